// Copyright 2026 The RBlur Authors
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

#ifndef RBLUR_ERRORS_H_
#define RBLUR_ERRORS_H_

#include <stdexcept>
#include <string>

namespace rblur {

// Argument outside an operation's domain (bad coordinate, non-finite value,
// mismatched shapes).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Invalid or inconsistent configuration (bin count, viewing distance, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Undecodable or malformed external data (image files, manifests, heatmaps).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rblur

#endif  // RBLUR_ERRORS_H_
