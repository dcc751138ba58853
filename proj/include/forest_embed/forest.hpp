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

#ifndef FOREST_EMBED_FOREST_HPP_
#define FOREST_EMBED_FOREST_HPP_

// Regularization forest over the M latent dimensions.
//
// Every node i defines one group: i together with all of its descendants. The
// penalty on a code vector a is
//
//   omega(a) = sum_i || (a_i, a_Descendants(i)) ||_2
//
// so a dimension can only become nonzero once its ancestors are nonzero.
// Nodes are 0-based; node k here is node k+1 in 1-based figure numbering.

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "forest_embed/error.hpp"

namespace forest_embed {

using NodeId = int;
inline constexpr NodeId kNoParent = -1;

class Forest {
 public:
  Forest() = default;

  // parents[i] is the parent of node i or kNoParent. Throws ValidationError on
  // out-of-range parents, cycles, or an empty array.
  explicit Forest(std::vector<NodeId> parents);

  int size() const { return static_cast<int>(parents_.size()); }
  NodeId parent(NodeId node) const { return parents_.at(node); }
  const std::vector<NodeId>& parents() const { return parents_; }
  const std::vector<NodeId>& children(NodeId node) const { return children_.at(node); }
  int depth(NodeId node) const { return depth_.at(node); }
  int max_depth() const { return max_depth_; }
  bool is_leaf(NodeId node) const { return children_.at(node).empty(); }

  const std::vector<NodeId>& roots() const { return roots_; }
  // Index into roots() of the tree containing `node`.
  int tree_of(NodeId node) const { return tree_.at(node); }

  // Strict descendants in preorder; empty for leaves.
  const std::vector<NodeId>& descendants(NodeId node) const;

  // Nodes sorted by non-increasing depth (ties by index): every node appears
  // after all of its descendants.
  const std::vector<NodeId>& bottom_up_order() const { return bottom_up_; }

 private:
  std::vector<NodeId> parents_;
  std::vector<std::vector<NodeId>> children_;
  std::vector<int> depth_;
  std::vector<NodeId> roots_;
  std::vector<int> tree_;
  std::vector<std::vector<NodeId>> descendants_;
  std::vector<NodeId> bottom_up_;
  int max_depth_ = 0;
};

// Identical 13-node trees: a root with 4 children, each with 2 leaves,
// numbered in preorder. M = 13 * num_trees.
Forest build_default_forest(int num_trees);

// M singleton trees; omega reduces to the l1 norm.
Forest build_flat_forest(int size);

// Whitespace-separated parent array, -1 for roots.
Forest parse_forest(std::string_view text);
std::string format_forest(const Forest& forest);

inline std::vector<NodeId> descendants(const Forest& forest, NodeId node) {
  return forest.descendants(node);
}

template <typename Derived>
typename Derived::Scalar omega(const Forest& forest, const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  if (a.size() != forest.size()) throw ValidationError("omega: length mismatch");
  // Subtree sums of squares, accumulated children-first.
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> sumsq = a.array().square().matrix();
  Scalar total(0);
  for (NodeId node : forest.bottom_up_order()) {
    total += std::sqrt(sumsq(node));
    if (forest.parent(node) != kNoParent) sumsq(forest.parent(node)) += sumsq(node);
  }
  return total;
}

}  // namespace forest_embed

#endif  // FOREST_EMBED_FOREST_HPP_
