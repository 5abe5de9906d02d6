#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace conceptlab {

struct BackendCapabilities {
    bool conditional_logprobs = false;
    bool mask_candidate_probs = false;
    bool sentence_embedding = false;

    bool any() const { return conditional_logprobs || mask_candidate_probs || sentence_embedding; }
};

/// Per-token natural-log conditional probabilities, aligned to the backend's
/// own tokenization of the input text.
struct TokenLogProbs {
    std::vector<std::string> tokens;
    std::vector<double> logprobs; // all <= 0
};

/// Deterministic scoring interface over a language model.
///
/// Implementations must be referentially transparent (same input, same
/// output) and safe for concurrent read-only calls.
class ScoringBackend {
public:
    virtual ~ScoringBackend() = default;

    virtual BackendCapabilities capabilities() const = 0;

    virtual TokenLogProbs conditional_logprobs(const std::string& text) const = 0;

    /// Probability per candidate for the [MASK] slot. Nonnegative; need not
    /// sum to one.
    virtual std::vector<double> mask_candidate_probs(
        const std::string& text_with_mask, const std::vector<std::string>& candidates) const = 0;

    /// Fixed-dimension sentence embedding.
    virtual std::vector<double> embed(const std::string& text) const = 0;
};

/// Fixed lookup-table backend for tests and offline runs.
///
/// Explicit entries win; optional defaults cover the rest (constant per-token
/// log-prob over a whitespace tokenization, constant mask probabilities, and
/// a deterministic hash-derived embedding). Missing entry with no default is
/// an error.
class MockBackend final : public ScoringBackend {
public:
    MockBackend() = default;

    void set_causal_entry(const std::string& text, TokenLogProbs value);
    void set_mask_entry(const std::string& text, std::map<std::string, double> candidate_probs);
    void set_embed_entry(const std::string& text, std::vector<double> vec);

    void set_default_token_logprob(double logprob);
    void set_default_mask_probs(std::vector<double> probs);
    void set_default_embed_dim(std::size_t dim);

    BackendCapabilities capabilities() const override;
    TokenLogProbs conditional_logprobs(const std::string& text) const override;
    std::vector<double> mask_candidate_probs(
        const std::string& text_with_mask,
        const std::vector<std::string>& candidates) const override;
    std::vector<double> embed(const std::string& text) const override;

private:
    std::map<std::string, TokenLogProbs> causal_;
    std::map<std::string, std::map<std::string, double>> mask_;
    std::map<std::string, std::vector<double>> embed_;
    std::optional<double> default_token_logprob_;
    std::optional<std::vector<double>> default_mask_probs_;
    std::optional<std::size_t> default_embed_dim_;
};

/// Load a mock table from its JSON file format (see README).
std::unique_ptr<MockBackend> load_mock_backend(const std::string& path);

struct RemoteBackendOptions {
    double timeout_seconds = 30.0;
    int max_retries = 3;       // retries after the first attempt
    int max_concurrency = 4;   // bound on in-flight requests
};

/// HTTP client for the POST /v1/score wire protocol. Transient failures are
/// retried with exponential backoff; responses are validated against the
/// interface invariants before being returned.
class RemoteBackend final : public ScoringBackend {
public:
    RemoteBackend(std::string base_url, RemoteBackendOptions options = {});
    ~RemoteBackend() override;

    BackendCapabilities capabilities() const override;
    TokenLogProbs conditional_logprobs(const std::string& text) const override;
    std::vector<double> mask_candidate_probs(
        const std::string& text_with_mask,
        const std::vector<std::string>& candidates) const override;
    std::vector<double> embed(const std::string& text) const override;

    /// Total retried requests so far (for diagnostics and tests).
    std::uint64_t retries_performed() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace conceptlab
