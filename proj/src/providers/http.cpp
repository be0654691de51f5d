#include "specfid/providers/http.hpp"

#include <httplib.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <thread>

#include "specfid/core/errors.hpp"
#include "specfid/core/sha256.hpp"

namespace specfid::providers {

namespace {

using nlohmann::json;

bool retriable_status(int status) {
    return status == 429 || (status >= 500 && status < 600);
}

// Extracts text and token counts from a chat-completions response body.
// Token counts default to a length/4 estimate when the server omits usage.
Completion parse_response(const std::string& body, std::size_t prompt_len) {
    json j = json::parse(body);
    Completion c;
    c.text = j.at("choices").at(0).at("message").at("content").get<std::string>();
    if (j.contains("usage")) {
        const auto& u = j["usage"];
        c.input_tokens = u.value("prompt_tokens", std::size_t{0});
        c.output_tokens = u.value("completion_tokens", std::size_t{0});
    }
    if (c.input_tokens == 0) c.input_tokens = prompt_len / 4 + 1;
    if (c.output_tokens == 0) c.output_tokens = c.text.size() / 4 + 1;
    return c;
}

}  // namespace

HttpTextProvider::HttpTextProvider(HttpOptions opts, UsageLedger* ledger)
    : opts_(std::move(opts)), ledger_(ledger) {
    if (opts_.base_url.empty()) throw ValidationError("http provider requires a base_url");
    if (opts_.attempts < 1) throw ValidationError("http provider requires attempts >= 1");
}

void HttpTextProvider::set_iteration(int k) {
    std::lock_guard<std::mutex> lock(mu_);
    iteration_ = k;
}

std::string HttpTextProvider::cache_file(const std::string& key) const {
    return opts_.cache_dir + "/" + sha256_hex(key) + ".json";
}

std::optional<Completion> HttpTextProvider::cache_get(const std::string& key) {
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    if (opts_.cache_dir.empty()) return std::nullopt;
    std::ifstream in(cache_file(key));
    if (!in) return std::nullopt;
    try {
        json j = json::parse(in);
        Completion c;
        c.text = j.at("text").get<std::string>();
        c.input_tokens = j.at("input_tokens").get<std::size_t>();
        c.output_tokens = j.at("output_tokens").get<std::size_t>();
        std::lock_guard<std::mutex> lock(mu_);
        cache_.emplace(key, c);
        return c;
    } catch (const json::exception&) {
        return std::nullopt;  // corrupt entry, fall through to a real call
    }
}

void HttpTextProvider::cache_put(const std::string& key, const Completion& c) {
    {
        std::lock_guard<std::mutex> lock(mu_);
        cache_[key] = c;
    }
    if (opts_.cache_dir.empty()) return;
    std::filesystem::create_directories(opts_.cache_dir);
    json j{{"text", c.text},
           {"input_tokens", c.input_tokens},
           {"output_tokens", c.output_tokens}};
    std::ofstream out(cache_file(key));
    out << j.dump(2) << "\n";
}

Completion HttpTextProvider::complete(Role role, const std::string& prompt) {
    const std::string key =
        std::string(to_string(role)) + ":" + opts_.model + ":" + sha256_hex(prompt);
    if (opts_.cache_enabled) {
        if (auto hit = cache_get(key)) return *hit;
    }

    json body{{"model", opts_.model},
              {"temperature", opts_.temperature},
              {"messages", json::array({json{{"role", "user"}, {"content", prompt}}})}};
    const std::string payload = body.dump();

    httplib::Client client(opts_.base_url);
    client.set_connection_timeout(opts_.timeout_seconds, 0);
    client.set_read_timeout(opts_.timeout_seconds, 0);
    httplib::Headers headers;
    if (!opts_.api_key.empty()) headers.emplace("Authorization", "Bearer " + opts_.api_key);

    std::string last_error;
    for (int attempt = 0; attempt < opts_.attempts; ++attempt) {
        if (attempt > 0 && opts_.backoff_ms > 0) {
            std::this_thread::sleep_for(
                std::chrono::milliseconds(opts_.backoff_ms << (attempt - 1)));
        }
        const auto start = std::chrono::steady_clock::now();
        auto res = client.Post(opts_.path, headers, payload, "application/json");
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!res) {
            last_error = "connection failed: " + httplib::to_string(res.error());
            continue;
        }
        if (retriable_status(res->status)) {
            last_error = "server returned status " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200) {
            throw ProviderError(std::string(to_string(role)) + " call failed with status " +
                                std::to_string(res->status));
        }
        Completion c;
        try {
            c = parse_response(res->body, prompt.size());
        } catch (const json::exception& e) {
            last_error = std::string("malformed response body: ") + e.what();
            continue;
        }
        if (ledger_) {
            int k;
            {
                std::lock_guard<std::mutex> lock(mu_);
                k = iteration_;
            }
            ledger_->record(k, c.input_tokens, c.output_tokens, seconds);
        }
        if (opts_.cache_enabled) cache_put(key, c);
        return c;
    }
    throw ProviderError(std::string(to_string(role)) + " call failed after " +
                        std::to_string(opts_.attempts) + " attempts: " + last_error);
}

}  // namespace specfid::providers
