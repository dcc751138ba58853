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

#include "forest_embed/prox.hpp"

namespace forest_embed {

ProxPlan::ProxPlan(Forest forest) : forest_(std::move(forest)) {
  const int m = forest_.size();
  offsets_.reserve(m + 1);
  offsets_.push_back(0);
  for (NodeId n = 0; n < m; ++n) {
    members_.push_back(n);
    const auto& desc = forest_.descendants(n);
    members_.insert(members_.end(), desc.begin(), desc.end());
    offsets_.push_back(members_.size());
  }
}

}  // namespace forest_embed
