// Copyright 2026 The forest-embed Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FOREST_EMBED_ERROR_HPP_
#define FOREST_EMBED_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace forest_embed {

// Malformed input, inconsistent shapes, missing or stale artifacts.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Training produced a non-finite value.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace forest_embed

#endif  // FOREST_EMBED_ERROR_HPP_
