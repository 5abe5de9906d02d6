#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "conceptlab/backend.hpp"
#include "conceptlab/errors.hpp"

namespace conceptlab {

namespace {

std::vector<std::string> whitespace_split(const std::string& text) {
    std::istringstream in(text);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

void check_logprobs(const TokenLogProbs& t, const std::string& context) {
    if (t.tokens.size() != t.logprobs.size()) {
        throw ValidationError(context + ": tokens/logprobs length mismatch");
    }
    for (double lp : t.logprobs) {
        if (!(lp <= 0.0)) {
            throw ValidationError(context + ": log-prob " + std::to_string(lp) + " > 0");
        }
    }
}

// FNV-1a, split into a small counter-based stream for the hash embedding.
std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t splitmix(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

} // namespace

void MockBackend::set_causal_entry(const std::string& text, TokenLogProbs value) {
    check_logprobs(value, "mock causal entry '" + text + "'");
    causal_[text] = std::move(value);
}

void MockBackend::set_mask_entry(const std::string& text,
                                 std::map<std::string, double> candidate_probs) {
    for (const auto& [cand, p] : candidate_probs) {
        if (!(p >= 0.0)) {
            throw ValidationError("mock mask entry '" + text + "': negative probability for '" +
                                  cand + "'");
        }
    }
    mask_[text] = std::move(candidate_probs);
}

void MockBackend::set_embed_entry(const std::string& text, std::vector<double> vec) {
    if (vec.empty()) throw ValidationError("mock embed entry '" + text + "' is empty");
    embed_[text] = std::move(vec);
}

void MockBackend::set_default_token_logprob(double logprob) {
    if (!(logprob <= 0.0)) throw ValidationError("default token log-prob must be <= 0");
    default_token_logprob_ = logprob;
}

void MockBackend::set_default_mask_probs(std::vector<double> probs) {
    for (double p : probs) {
        if (!(p >= 0.0)) throw ValidationError("default mask probabilities must be >= 0");
    }
    default_mask_probs_ = std::move(probs);
}

void MockBackend::set_default_embed_dim(std::size_t dim) {
    if (dim == 0) throw ValidationError("default embed dimension must be >= 1");
    default_embed_dim_ = dim;
}

BackendCapabilities MockBackend::capabilities() const {
    BackendCapabilities caps;
    caps.conditional_logprobs = !causal_.empty() || default_token_logprob_.has_value();
    caps.mask_candidate_probs = !mask_.empty() || default_mask_probs_.has_value();
    caps.sentence_embedding = !embed_.empty() || default_embed_dim_.has_value();
    if (!caps.any()) {
        // an empty mock still reports the lookup capabilities; calls will fail
        caps.conditional_logprobs = true;
        caps.mask_candidate_probs = true;
        caps.sentence_embedding = true;
    }
    return caps;
}

TokenLogProbs MockBackend::conditional_logprobs(const std::string& text) const {
    const auto it = causal_.find(text);
    if (it != causal_.end()) return it->second;
    if (default_token_logprob_) {
        TokenLogProbs out;
        out.tokens = whitespace_split(text);
        out.logprobs.assign(out.tokens.size(), *default_token_logprob_);
        return out;
    }
    throw BackendError("mock backend: no causal_logprobs entry for '" + text + "'");
}

std::vector<double> MockBackend::mask_candidate_probs(
    const std::string& text_with_mask, const std::vector<std::string>& candidates) const {
    const auto it = mask_.find(text_with_mask);
    if (it != mask_.end()) {
        std::vector<double> out;
        out.reserve(candidates.size());
        for (const auto& cand : candidates) {
            const auto cit = it->second.find(cand);
            if (cit == it->second.end()) {
                throw BackendError("mock backend: no probability for candidate '" + cand +
                                   "' under '" + text_with_mask + "'");
            }
            out.push_back(cit->second);
        }
        return out;
    }
    if (default_mask_probs_) {
        if (default_mask_probs_->size() != candidates.size()) {
            throw BackendError("mock backend: default mask probabilities cover " +
                               std::to_string(default_mask_probs_->size()) + " candidates, got " +
                               std::to_string(candidates.size()));
        }
        return *default_mask_probs_;
    }
    throw BackendError("mock backend: no mask_candidates entry for '" + text_with_mask + "'");
}

std::vector<double> MockBackend::embed(const std::string& text) const {
    const auto it = embed_.find(text);
    if (it != embed_.end()) return it->second;
    if (default_embed_dim_) {
        // Deterministic pseudo-embedding derived from the text hash.
        std::uint64_t state = fnv1a(text);
        std::vector<double> v(*default_embed_dim_);
        for (auto& x : v) {
            x = static_cast<double>(splitmix(state) >> 11) * 0x1.0p-53 * 2.0 - 1.0;
        }
        return v;
    }
    throw BackendError("mock backend: no embed entry for '" + text + "'");
}

std::unique_ptr<MockBackend> load_mock_backend(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open mock table: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    auto mock = std::make_unique<MockBackend>();
    try {
        if (j.contains("defaults")) {
            const auto& d = j["defaults"];
            if (d.contains("token_logprob")) {
                mock->set_default_token_logprob(d["token_logprob"].get<double>());
            }
            if (d.contains("mask_probs")) {
                mock->set_default_mask_probs(d["mask_probs"].get<std::vector<double>>());
            }
            if (d.contains("embed_dim")) {
                mock->set_default_embed_dim(d["embed_dim"].get<std::size_t>());
            }
        }
        if (j.contains("causal_logprobs")) {
            for (const auto& [text, entry] : j["causal_logprobs"].items()) {
                TokenLogProbs t;
                t.tokens = entry.at("tokens").get<std::vector<std::string>>();
                t.logprobs = entry.at("logprobs").get<std::vector<double>>();
                mock->set_causal_entry(text, std::move(t));
            }
        }
        if (j.contains("mask_candidates")) {
            for (const auto& [text, entry] : j["mask_candidates"].items()) {
                mock->set_mask_entry(text, entry.get<std::map<std::string, double>>());
            }
        }
        if (j.contains("embed")) {
            for (const auto& [text, entry] : j["embed"].items()) {
                mock->set_embed_entry(text, entry.get<std::vector<double>>());
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return mock;
}

} // namespace conceptlab
