#include "quasar/http.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <mutex>

#include <httplib.h>

#include "quasar/error.hpp"

namespace quasar {

namespace {

std::atomic<bool> g_warnings{true};
std::mutex g_log_mutex;

struct SplitUrl {
  std::string origin;
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  const std::string scheme = "http://";
  if (url.rfind(scheme, 0) != 0) {
    throw TransportError(url, "only http:// endpoints are supported");
  }
  auto slash = url.find('/', scheme.size());
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

}  // namespace

Json post_json(const std::string& url, const Json& body, int timeout_ms) {
  SplitUrl parts = split_url(url);
  httplib::Client client(parts.origin);
  auto timeout = std::chrono::milliseconds(timeout_ms > 0 ? timeout_ms : 1);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);

  auto result = client.Post(parts.path, body.dump(), "application/json");
  if (!result) {
    throw TransportError(url, "request failed: " + httplib::to_string(result.error()));
  }
  if (result->status < 200 || result->status >= 300) {
    throw TransportError(url, "HTTP status " + std::to_string(result->status));
  }
  try {
    return Json::parse(result->body);
  } catch (const std::exception& e) {
    throw TransportError(url, std::string("unparseable reply: ") + e.what());
  }
}

std::string env_or_empty(const char* name) {
  const char* value = std::getenv(name);
  return value == nullptr ? std::string() : std::string(value);
}

void log_warning(std::string_view message) {
  if (!g_warnings.load()) return;
  std::lock_guard<std::mutex> lock(g_log_mutex);
  std::cerr << "warning: " << message << '\n';
}

void set_warnings_enabled(bool enabled) { g_warnings.store(enabled); }

}  // namespace quasar
