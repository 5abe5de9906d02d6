#include <atomic>
#include <chrono>
#include <semaphore>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "conceptlab/backend.hpp"
#include "conceptlab/errors.hpp"

namespace conceptlab {

namespace {

constexpr const char* kScoreEndpoint = "/v1/score";

struct ParsedUrl {
    std::string scheme_host_port; // e.g. "http://localhost:8080"
};

ParsedUrl parse_base_url(const std::string& url) {
    if (url.rfind("http://", 0) != 0 && url.rfind("https://", 0) != 0) {
        throw ValidationError("remote backend URL must start with http:// or https://: " + url);
    }
    // strip any trailing path; httplib takes scheme://host:port
    const auto scheme_end = url.find("//") + 2;
    const auto path_start = url.find('/', scheme_end);
    ParsedUrl out;
    out.scheme_host_port = path_start == std::string::npos ? url : url.substr(0, path_start);
    if (out.scheme_host_port.size() == scheme_end) {
        throw ValidationError("remote backend URL has no host: " + url);
    }
    return out;
}

} // namespace

struct RemoteBackend::Impl {
    std::string base;
    RemoteBackendOptions options;
    mutable std::counting_semaphore<256> slots;
    mutable std::atomic<std::uint64_t> retries{0};

    Impl(std::string base_url, RemoteBackendOptions opts)
        : base(std::move(base_url)), options(opts),
          slots(std::max(1, std::min(opts.max_concurrency, 256))) {}

    nlohmann::json post(const nlohmann::json& request) const {
        slots.acquire();
        struct Release {
            const Impl* impl;
            ~Release() { impl->slots.release(); }
        } release{this};

        std::string last_error;
        for (int attempt = 0; attempt <= options.max_retries; ++attempt) {
            if (attempt > 0) {
                retries.fetch_add(1, std::memory_order_relaxed);
                const auto backoff = std::chrono::milliseconds(50u << (attempt - 1));
                std::this_thread::sleep_for(backoff);
            }
            httplib::Client client(base);
            const auto timeout = std::chrono::duration<double>(options.timeout_seconds);
            client.set_connection_timeout(timeout);
            client.set_read_timeout(timeout);
            client.set_write_timeout(timeout);

            auto res = client.Post(kScoreEndpoint, request.dump(), "application/json");
            if (!res) {
                last_error = "transport error: " + httplib::to_string(res.error());
                continue; // transient, retry
            }
            if (res->status >= 500) {
                last_error = "server error " + std::to_string(res->status);
                continue; // transient, retry
            }
            if (res->status < 200 || res->status >= 300) {
                std::string detail;
                try {
                    detail = nlohmann::json::parse(res->body).value("error", res->body);
                } catch (const nlohmann::json::exception&) {
                    detail = res->body;
                }
                throw BackendError("remote backend rejected request (status " +
                                   std::to_string(res->status) + "): " + detail);
            }
            try {
                return nlohmann::json::parse(res->body);
            } catch (const nlohmann::json::exception& e) {
                throw BackendError(std::string("remote backend returned invalid JSON: ") +
                                   e.what());
            }
        }
        throw BackendError("remote backend unreachable after " +
                           std::to_string(options.max_retries + 1) + " attempts (" + last_error +
                           ")");
    }
};

RemoteBackend::RemoteBackend(std::string base_url, RemoteBackendOptions options)
    : impl_(std::make_unique<Impl>(parse_base_url(base_url).scheme_host_port, options)) {}

RemoteBackend::~RemoteBackend() = default;

BackendCapabilities RemoteBackend::capabilities() const {
    // The wire protocol exposes all three modes; an unsupported mode surfaces
    // as a per-request error from the server.
    return BackendCapabilities{true, true, true};
}

TokenLogProbs RemoteBackend::conditional_logprobs(const std::string& text) const {
    const nlohmann::json resp =
        impl_->post({{"mode", "causal_logprobs"}, {"text", text}});
    TokenLogProbs out;
    try {
        out.tokens = resp.at("tokens").get<std::vector<std::string>>();
        out.logprobs = resp.at("logprobs").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw BackendError(std::string("remote backend response malformed: ") + e.what());
    }
    if (out.tokens.size() != out.logprobs.size()) {
        throw BackendError("remote backend protocol violation: tokens/logprobs length mismatch");
    }
    for (double lp : out.logprobs) {
        if (!(lp <= 0.0)) {
            throw BackendError("remote backend protocol violation: log-prob " +
                               std::to_string(lp) + " > 0");
        }
    }
    return out;
}

std::vector<double> RemoteBackend::mask_candidate_probs(
    const std::string& text_with_mask, const std::vector<std::string>& candidates) const {
    const nlohmann::json resp = impl_->post(
        {{"mode", "mask_candidates"}, {"text", text_with_mask}, {"candidates", candidates}});
    std::vector<double> probs;
    try {
        probs = resp.at("probs").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw BackendError(std::string("remote backend response malformed: ") + e.what());
    }
    if (probs.size() != candidates.size()) {
        throw BackendError("remote backend protocol violation: got " +
                           std::to_string(probs.size()) + " probs for " +
                           std::to_string(candidates.size()) + " candidates");
    }
    for (double p : probs) {
        if (!(p >= 0.0)) {
            throw BackendError("remote backend protocol violation: negative probability");
        }
    }
    return probs;
}

std::vector<double> RemoteBackend::embed(const std::string& text) const {
    const nlohmann::json resp = impl_->post({{"mode", "embed"}, {"text", text}});
    std::vector<double> vec;
    try {
        vec = resp.at("vector").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw BackendError(std::string("remote backend response malformed: ") + e.what());
    }
    if (vec.empty()) {
        throw BackendError("remote backend protocol violation: empty embedding");
    }
    return vec;
}

std::uint64_t RemoteBackend::retries_performed() const {
    return impl_->retries.load(std::memory_order_relaxed);
}

} // namespace conceptlab
