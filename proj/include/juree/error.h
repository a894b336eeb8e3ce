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

#ifndef JUREE_ERROR_H_
#define JUREE_ERROR_H_

#include <stdexcept>
#include <string>

namespace juree {

// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad config, unknown label, out-of-range value.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class NotFound : public Error {
 public:
  using Error::Error;
};

// State conflict, e.g. labeling a triage item twice.
class Conflict : public Error {
 public:
  using Error::Error;
};

// An inference backend failed or returned a malformed result.
class BackendError : public Error {
 public:
  using Error::Error;
};

// Network or protocol failure talking to a chat model or remote scorer.
class TransportError : public Error {
 public:
  using Error::Error;
};

}  // namespace juree

#endif  // JUREE_ERROR_H_
