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

#ifndef JUREE_CHAT_H_
#define JUREE_CHAT_H_

#include <fstream>
#include <memory>
#include <mutex>
#include <string>

namespace juree {

struct Sampling {
  double temperature = 0.0;
  double repetition_penalty = 1.0;

  bool operator==(const Sampling&) const = default;
};

// A text-completion model. Transport failures are raised as TransportError,
// never returned as an empty success.
class ChatClient {
 public:
  virtual ~ChatClient() = default;
  virtual std::string Complete(const std::string& model_id,
                               const std::string& prompt,
                               const Sampling& sampling) = 0;
  // True when Complete() may be called from several threads at once.
  virtual bool concurrent_safe() const { return false; }
};

struct HttpChatOptions {
  std::string base_url;  // e.g. https://api.example.com/v1
  std::string api_key;
  double timeout_seconds = 60.0;
  int max_retries = 2;
};

// Reads JUREE_LLM_BASE_URL and JUREE_LLM_API_KEY. Throws InvalidArgument when
// the base url is unset.
HttpChatOptions HttpChatOptionsFromEnv();

// POSTs {model, messages, temperature} to <base_url>/chat/completions and
// returns choices[0].message.content. repetition_penalty is sent only when it
// differs from 1.0. Retries on transport errors, 429 and 5xx.
class HttpChatClient : public ChatClient {
 public:
  explicit HttpChatClient(HttpChatOptions options);

  std::string Complete(const std::string& model_id, const std::string& prompt,
                       const Sampling& sampling) override;
  bool concurrent_safe() const override { return true; }

 private:
  HttpChatOptions options_;
  std::string scheme_host_;
  std::string path_prefix_;
};

// Appends one JSON line per call ({model, prompt, response} or {..., error})
// to an audit file, then forwards the result or error.
class AuditingChatClient : public ChatClient {
 public:
  AuditingChatClient(std::shared_ptr<ChatClient> inner, const std::string& path);

  std::string Complete(const std::string& model_id, const std::string& prompt,
                       const Sampling& sampling) override;
  bool concurrent_safe() const override { return inner_->concurrent_safe(); }

 private:
  std::shared_ptr<ChatClient> inner_;
  std::mutex mu_;
  std::ofstream out_;
};

}  // namespace juree

#endif  // JUREE_CHAT_H_
