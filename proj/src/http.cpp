// Copyright (C) 2026 The intertext Authors
// SPDX-License-Identifier: Apache-2.0

#include "intertext/http.hpp"

#include <httplib.h>
#include <fmt/format.h>

#include "intertext/error.hpp"

namespace intertext {

HttpResponse post_json(const std::string& url, const std::string& body, const std::string& bearer_token,
                       std::chrono::milliseconds timeout) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ConfigError(fmt::format("endpoint '{}' has no scheme", url));
  auto path_start = url.find('/', scheme_end + 3);
  std::string origin = path_start == std::string::npos ? url : url.substr(0, path_start);
  std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

  httplib::Client client(origin);
  if (!client.is_valid()) throw ConfigError(fmt::format("unsupported endpoint '{}'", url));
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
  auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());
  if (!bearer_token.empty()) client.set_bearer_token_auth(bearer_token);

  auto res = client.Post(path, body, "application/json");
  if (!res) throw RemoteError(fmt::format("POST {} failed: {}", url, httplib::to_string(res.error())));
  return {res->status, res->body};
}

}  // namespace intertext
