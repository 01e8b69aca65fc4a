// Copyright (C) 2026 The intertext Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <string>

namespace intertext {

struct HttpResponse {
  int status = 0;
  std::string body;
};

/// One JSON POST. Throws RemoteError on transport failure (no response);
/// any HTTP status is returned to the caller.
HttpResponse post_json(const std::string& url, const std::string& body, const std::string& bearer_token,
                       std::chrono::milliseconds timeout);

}  // namespace intertext
