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

#include "forest_embed/forest.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>

#include "forest_embed/corpus.hpp"

namespace forest_embed {

Forest::Forest(std::vector<NodeId> parents) : parents_(std::move(parents)) {
  const int m = size();
  if (m == 0) throw ValidationError("forest: empty parent array");
  children_.assign(m, {});
  for (NodeId i = 0; i < m; ++i) {
    const NodeId p = parents_[i];
    if (p == kNoParent) {
      roots_.push_back(i);
    } else if (p < 0 || p >= m) {
      throw ValidationError("forest: parent index out of range at node " + std::to_string(i));
    } else {
      children_[p].push_back(i);
    }
  }

  // Nodes on a cycle are never reached from a root.
  depth_.assign(m, -1);
  tree_.assign(m, -1);
  descendants_.assign(m, {});
  std::vector<NodeId> stack;
  int reached = 0;
  for (int t = 0; t < static_cast<int>(roots_.size()); ++t) {
    depth_[roots_[t]] = 0;
    stack.push_back(roots_[t]);
    while (!stack.empty()) {
      const NodeId n = stack.back();
      stack.pop_back();
      tree_[n] = t;
      ++reached;
      max_depth_ = std::max(max_depth_, depth_[n]);
      for (auto it = children_[n].rbegin(); it != children_[n].rend(); ++it) {
        depth_[*it] = depth_[n] + 1;
        stack.push_back(*it);
      }
    }
  }
  if (reached != m) throw ValidationError("forest: cycle detected in parent array");

  // Preorder descendant lists.
  for (NodeId n = 0; n < m; ++n) {
    std::vector<NodeId> pending(children_[n].rbegin(), children_[n].rend());
    while (!pending.empty()) {
      const NodeId d = pending.back();
      pending.pop_back();
      descendants_[n].push_back(d);
      pending.insert(pending.end(), children_[d].rbegin(), children_[d].rend());
    }
  }

  bottom_up_.resize(m);
  std::iota(bottom_up_.begin(), bottom_up_.end(), 0);
  std::stable_sort(bottom_up_.begin(), bottom_up_.end(),
                   [this](NodeId a, NodeId b) { return depth_[a] > depth_[b]; });
}

const std::vector<NodeId>& Forest::descendants(NodeId node) const {
  if (node < 0 || node >= size()) throw ValidationError("forest: node out of range");
  return descendants_[node];
}

Forest build_default_forest(int num_trees) {
  if (num_trees < 1) throw ValidationError("forest: num_trees must be >= 1");
  constexpr int kTreeSize = 13;
  std::vector<NodeId> parents;
  parents.reserve(static_cast<std::size_t>(num_trees) * kTreeSize);
  for (int t = 0; t < num_trees; ++t) {
    const NodeId root = t * kTreeSize;
    parents.push_back(kNoParent);
    for (int c = 0; c < 4; ++c) {
      const NodeId child = root + 1 + 3 * c;
      parents.push_back(root);
      parents.push_back(child);
      parents.push_back(child);
    }
  }
  return Forest(std::move(parents));
}

Forest build_flat_forest(int size) {
  if (size < 1) throw ValidationError("forest: size must be >= 1");
  return Forest(std::vector<NodeId>(size, kNoParent));
}

Forest parse_forest(std::string_view text) {
  std::vector<NodeId> parents;
  for (auto tok : split_tokens(text)) {
    NodeId value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      throw ValidationError("forest: bad parent index '" + std::string(tok) + "'");
    }
    if (value < kNoParent) throw ValidationError("forest: parent index out of range");
    parents.push_back(value);
  }
  return Forest(std::move(parents));
}

std::string format_forest(const Forest& forest) {
  std::ostringstream out;
  for (NodeId i = 0; i < forest.size(); ++i) {
    if (i) out << ' ';
    out << forest.parent(i);
  }
  return out.str();
}

}  // namespace forest_embed
