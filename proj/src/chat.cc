//
// Copyright 2026 The JurEE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "juree/chat.h"

#include <chrono>
#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "juree/error.h"

namespace juree {

HttpChatOptions HttpChatOptionsFromEnv() {
  HttpChatOptions options;
  const char* base = std::getenv("JUREE_LLM_BASE_URL");
  if (base == nullptr || *base == '\0') {
    throw InvalidArgument("JUREE_LLM_BASE_URL is not set");
  }
  options.base_url = base;
  if (const char* key = std::getenv("JUREE_LLM_API_KEY")) options.api_key = key;
  return options;
}

HttpChatClient::HttpChatClient(HttpChatOptions options)
    : options_(std::move(options)) {
  // Split "https://host:port/v1" into the client origin and a path prefix.
  const auto scheme_end = options_.base_url.find("://");
  if (scheme_end == std::string::npos) {
    throw InvalidArgument("chat base url must include a scheme: " +
                          options_.base_url);
  }
  const auto path_start = options_.base_url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    scheme_host_ = options_.base_url;
  } else {
    scheme_host_ = options_.base_url.substr(0, path_start);
    path_prefix_ = options_.base_url.substr(path_start);
    while (!path_prefix_.empty() && path_prefix_.back() == '/') {
      path_prefix_.pop_back();
    }
  }
}

std::string HttpChatClient::Complete(const std::string& model_id,
                                     const std::string& prompt,
                                     const Sampling& sampling) {
  nlohmann::ordered_json body;
  body["model"] = model_id;
  body["messages"] = nlohmann::ordered_json::array(
      {{{"role", "user"}, {"content", prompt}}});
  body["temperature"] = sampling.temperature;
  if (sampling.repetition_penalty != 1.0) {
    body["repetition_penalty"] = sampling.repetition_penalty;
  }
  const std::string payload = body.dump();

  httplib::Headers headers;
  if (!options_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + options_.api_key);
  }

  std::string last_error;
  for (int attempt = 0; attempt <= options_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(200 << attempt));
    }
    httplib::Client client(scheme_host_);
    const auto secs = static_cast<time_t>(options_.timeout_seconds);
    client.set_connection_timeout(secs, 0);
    client.set_read_timeout(secs, 0);
    auto res = client.Post(path_prefix_ + "/chat/completions", headers, payload,
                           "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw TransportError("chat endpoint returned HTTP " +
                           std::to_string(res->status) + ": " + res->body);
    }
    try {
      const auto doc = nlohmann::json::parse(res->body);
      return doc.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw TransportError(std::string("malformed chat response: ") + e.what());
    }
  }
  throw TransportError("chat endpoint failed after " +
                       std::to_string(options_.max_retries + 1) +
                       " attempts: " + last_error);
}

AuditingChatClient::AuditingChatClient(std::shared_ptr<ChatClient> inner,
                                       const std::string& path)
    : inner_(std::move(inner)), out_(path, std::ios::app) {
  if (!out_) throw Error("cannot open audit log " + path);
}

std::string AuditingChatClient::Complete(const std::string& model_id,
                                         const std::string& prompt,
                                         const Sampling& sampling) {
  nlohmann::ordered_json rec;
  rec["model"] = model_id;
  rec["temperature"] = sampling.temperature;
  rec["prompt"] = prompt;
  try {
    std::string response = inner_->Complete(model_id, prompt, sampling);
    rec["response"] = response;
    std::lock_guard<std::mutex> lock(mu_);
    out_ << rec.dump() << '\n' << std::flush;
    return response;
  } catch (const std::exception& e) {
    rec["error"] = e.what();
    std::lock_guard<std::mutex> lock(mu_);
    out_ << rec.dump() << '\n' << std::flush;
    throw;
  }
}

}  // namespace juree
