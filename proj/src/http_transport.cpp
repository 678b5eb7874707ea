#include "ragomp/http_transport.hpp"

#include "ragomp/errors.hpp"

#include <httplib.h>

#include <atomic>
#include <cstdlib>
#include <regex>
#include <thread>

namespace ragomp::net {

namespace {

std::atomic<Policy> g_policy{Policy::Allow};
std::atomic<std::size_t> g_requests{0};

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;    // /path?query
};

SplitUrl split_url(const std::string& url) {
  static const std::regex re(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, re)) throw InvalidInput("malformed URL: " + url);
  return {m[1].str(), m[2].matched ? m[2].str() : std::string("/")};
}

void admit(const std::string& url) {
  ++g_requests;
  if (g_policy.load() == Policy::Forbid) {
    throw ProviderError("network access forbidden by policy: " + url, 0);
  }
}

HttpResponse convert(const httplib::Result& res, const std::string& url) {
  if (!res) {
    throw ProviderError("transport failure for " + url + ": " + httplib::to_string(res.error()), 0);
  }
  return {res->status, res->body};
}

httplib::Headers to_httplib(const Headers& headers) {
  httplib::Headers out;
  for (const auto& [k, v] : headers) out.emplace(k, v);
  return out;
}

}  // namespace

void set_policy(Policy p) { g_policy = p; }
Policy policy() { return g_policy.load(); }
std::size_t request_count() { return g_requests.load(); }
void reset_request_count() { g_requests = 0; }

HttpResponse post_json(const std::string& url, const std::string& body, const Headers& headers,
                       std::chrono::seconds timeout) {
  admit(url);
  auto parts = split_url(url);
  httplib::Client client(parts.origin);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  return convert(client.Post(parts.path, to_httplib(headers), body, "application/json"), url);
}

HttpResponse get(const std::string& url, const Headers& headers, std::chrono::seconds timeout) {
  admit(url);
  auto parts = split_url(url);
  httplib::Client client(parts.origin);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_decompress(true);
  return convert(client.Get(parts.path, to_httplib(headers)), url);
}

HttpResponse with_retries(const RetryPolicy& policy, const std::function<HttpResponse()>& call) {
  auto backoff = policy.initial_backoff;
  for (int attempt = 1;; ++attempt) {
    const bool last = attempt >= policy.attempts;
    try {
      HttpResponse r = call();
      const bool retryable = r.status == 429 || r.status >= 500;
      if (!retryable || last) return r;
    } catch (const ProviderError& e) {
      if (e.status() != 0 || last || g_policy.load() == Policy::Forbid) throw;
    }
    std::this_thread::sleep_for(backoff);
    backoff *= 2;
  }
}

std::string env_or_empty(const std::string& name) {
  const char* v = std::getenv(name.c_str());
  return v ? std::string(v) : std::string();
}

}  // namespace ragomp::net
