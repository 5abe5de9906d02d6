#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace conceptlab {

/// Lower-cased whitespace/punctuation word tokenizer with reserved ids.
///
/// "[MASK]" in input text maps to the reserved mask id before lowercasing;
/// punctuation characters become single-character tokens; everything else is
/// split on whitespace and lower-cased. Out-of-vocabulary words fall back to
/// the unknown id.
class Tokenizer {
public:
    static constexpr int kPadId = 0;
    static constexpr int kUnkId = 1;
    static constexpr int kBosId = 2;
    static constexpr int kMaskId = 3;
    static constexpr std::size_t kReservedCount = 4;

    Tokenizer();

    /// Build a vocabulary from corpus lines: most frequent words first,
    /// ties broken lexicographically, capped at max_vocab total ids.
    static Tokenizer build(const std::vector<std::string>& lines, std::size_t max_vocab);

    /// Restore from an id-ordered vocabulary list (checkpoint loading).
    static Tokenizer from_vocabulary(std::vector<std::string> vocabulary);

    /// Normalized surface tokens of a text (no ids, no unk substitution).
    static std::vector<std::string> normalize(const std::string& text);

    std::vector<int> encode(const std::string& text) const;
    std::string decode(const std::vector<int>& ids) const;

    /// Id for one word, kUnkId when absent.
    int token_id(const std::string& word) const;

    std::size_t vocab_size() const { return vocabulary_.size(); }
    const std::vector<std::string>& vocabulary() const { return vocabulary_; }

    bool operator==(const Tokenizer& other) const { return vocabulary_ == other.vocabulary_; }

private:
    std::vector<std::string> vocabulary_;
    std::unordered_map<std::string, int> index_;
};

} // namespace conceptlab
