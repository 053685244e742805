#pragma once

#include <string>
#include <string_view>

#include "quasar/io.hpp"

namespace quasar {

// POSTs a JSON body to an http:// URL and parses the JSON reply. Any
// connection failure, non-2xx status, or unparseable body raises
// TransportError naming the URL.
Json post_json(const std::string& url, const Json& body, int timeout_ms);

// Reads an environment variable; empty when unset.
std::string env_or_empty(const char* name);

void log_warning(std::string_view message);
// Silences log_warning (tests that exercise fallback paths).
void set_warnings_enabled(bool enabled);

}  // namespace quasar
