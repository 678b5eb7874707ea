#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <string>

namespace ragomp::net {

struct HttpResponse {
  int status = 0;
  std::string body;
};

using Headers = std::map<std::string, std::string>;

enum class Policy { Allow, Forbid };

// Process-wide switch. Under Forbid every request attempt is counted and then
// rejected with a ProviderError, so hermetic runs can assert request_count() == 0.
void set_policy(Policy p);
Policy policy();
std::size_t request_count();
void reset_request_count();

// Transport failures raise ProviderError with status 0; HTTP error statuses are
// returned to the caller unchanged.
HttpResponse post_json(const std::string& url, const std::string& body, const Headers& headers,
                       std::chrono::seconds timeout);
HttpResponse get(const std::string& url, const Headers& headers, std::chrono::seconds timeout);

struct RetryPolicy {
  int attempts = 3;
  std::chrono::milliseconds initial_backoff{500};
};

// Retries on transport errors, 429 and 5xx with exponential backoff. The last
// response (or error) is surfaced to the caller.
HttpResponse with_retries(const RetryPolicy& policy, const std::function<HttpResponse()>& call);

std::string env_or_empty(const std::string& name);

}  // namespace ragomp::net
