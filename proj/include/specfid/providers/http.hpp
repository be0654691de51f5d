#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "specfid/providers/provider.hpp"
#include "specfid/providers/usage.hpp"

namespace specfid::providers {

struct HttpOptions {
    std::string base_url;  // scheme://host[:port]
    std::string path = "/v1/chat/completions";
    std::string model;
    std::string api_key;  // sent as a bearer token when non-empty
    double temperature = 0.0;
    int attempts = 3;
    int backoff_ms = 200;  // doubles per retry; 0 disables sleeping
    int timeout_seconds = 60;
    std::string cache_dir;  // persists responses across runs when set
    bool cache_enabled = true;
};

// Chat-completions wire client. Connection failures, timeouts, 429 and 5xx
// are retried with backoff; other non-200 statuses surface immediately as
// ProviderError. Responses are cached by (role, prompt hash, model id);
// cache hits return byte-identical text without touching the network or
// the usage ledger.
class HttpTextProvider : public TextProvider {
  public:
    explicit HttpTextProvider(HttpOptions opts, UsageLedger* ledger = nullptr);

    void set_iteration(int k);  // ledger rows are keyed by iteration
    Completion complete(Role role, const std::string& prompt) override;

  private:
    std::string cache_file(const std::string& key) const;
    std::optional<Completion> cache_get(const std::string& key);
    void cache_put(const std::string& key, const Completion& c);

    HttpOptions opts_;
    UsageLedger* ledger_;
    int iteration_ = 0;
    std::mutex mu_;
    std::map<std::string, Completion> cache_;
};

}  // namespace specfid::providers
