#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "conceptlab/dataset.hpp"

namespace conceptlab {

enum class PromptMode { Mlm, Causal, MatchingObject, MatchingAttribute };

std::string to_string(PromptMode m);
std::optional<PromptMode> prompt_mode_from_string(const std::string& s);

/// A template body with placeholders from {[Head], [Rel], [Tail], [MASK], [Attribute]}.
/// `task` is a category name or "all".
struct PromptTemplate {
    std::string task;
    PromptMode mode = PromptMode::Mlm;
    std::string body;
};

/// Throws ValidationError when the body breaks the mode's placeholder rules.
void validate_template(const PromptTemplate& t);

/// Relation surface forms, antonyms and polarity adjectives.
struct RelationEntry {
    std::string surface;        // "heavier" for heavier_than
    Relation antonym;           // lighter_than
    std::string attribute_word; // "heavy"
};

class RelationLexicon {
public:
    /// Lexicon for the built-in relation set.
    static RelationLexicon standard();

    const RelationEntry& entry(Relation r) const;
    const std::string& surface(Relation r) const;
    Relation antonym_of(Relation r) const;
    const std::string& attribute_word(Relation r) const;

private:
    std::map<Relation, RelationEntry> entries_;
};

/// Templates grouped by (task, mode). Lookup for a category includes
/// templates whose task is "all".
class PromptBank {
public:
    void add(PromptTemplate t); // validates
    const std::vector<PromptTemplate>& all() const { return templates_; }
    std::vector<PromptTemplate> for_task(Category task, PromptMode mode) const;
    bool empty() const { return templates_.empty(); }

private:
    std::vector<PromptTemplate> templates_;
};

/// Prompt-bank file: JSON-lines, one {task, mode, template} object per line.
PromptBank load_prompt_bank(const std::string& path);

/// The mask marker as it appears in rendered text.
inline constexpr const char* kMaskMarker = "[MASK]";

struct MlmRendering {
    std::string text;                    // contains exactly one [MASK]
    std::vector<std::string> candidates; // {"yes", "no"}
};

/// Cloze rendering of a comparison triplet. [Rel] resolves through the lexicon.
MlmRendering render_mlm(const PromptTemplate& t, const ComparisonTriplet& x,
                        const RelationLexicon& lex);

/// Cloze rendering of an attribute instance with one option in the [Tail] slot.
MlmRendering render_mlm_option(const PromptTemplate& t, const AttributeInstance& x,
                               const std::string& option);

struct CausalPair {
    std::string assertion;         // relation as stated
    std::string antonym_assertion; // relation replaced with its antonym
};

/// Two assertions differing only in the relation surface form.
CausalPair render_causal_pair(const PromptTemplate& t, const ComparisonTriplet& x,
                              const RelationLexicon& lex);

/// Causal rendering of an attribute instance: one text per option.
CausalPair render_causal_options(const PromptTemplate& t, const AttributeInstance& x);

struct MatchingRendering {
    std::string object_1;   // head substituted
    std::string object_2;   // tail substituted
    std::string attribute;  // attribute word substituted
};

/// Object/attribute texts for similarity-based prediction.
MatchingRendering render_matching(const PromptTemplate& object_t,
                                  const PromptTemplate& attribute_t,
                                  const ComparisonTriplet& x,
                                  const std::string& attribute_word);

/// Matching texts for an attribute instance: the two options go through the
/// attribute template, the head through the object template.
MatchingRendering render_matching_options(const PromptTemplate& object_t,
                                          const PromptTemplate& attribute_t,
                                          const AttributeInstance& x);

/// Join k rendered demonstrations and the query with single newlines.
/// demos.size() must equal k; k == 0 returns the query unchanged.
std::string assemble_few_shot(const std::vector<std::string>& demos,
                              const std::string& query, std::size_t k);

/// Indices of k demonstrations drawn without replacement from [0, pool_size),
/// never including `exclude`. Throws when k exceeds the available pool.
std::vector<std::size_t> sample_demo_indices(std::size_t pool_size, std::size_t exclude,
                                             std::size_t k, std::uint64_t seed);

} // namespace conceptlab
