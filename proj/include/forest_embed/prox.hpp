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

#ifndef FOREST_EMBED_PROX_HPP_
#define FOREST_EMBED_PROX_HPP_

// Proximal operators for the forest penalty and for plain l1.
//
// The prox of t * omega is computed exactly by block soft-thresholding each
// node's group (node plus descendants) once, visiting descendants before their
// ancestors.

#include <cmath>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "forest_embed/error.hpp"
#include "forest_embed/forest.hpp"

namespace forest_embed {

// Group norms below this are treated as zero.
inline constexpr double kGroupNormFloor = 1e-15;

template <typename Scalar>
Scalar soft_threshold(Scalar x, Scalar t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return Scalar(0);
}

class ProxPlan {
 public:
  ProxPlan() = default;
  explicit ProxPlan(Forest forest);

  int size() const { return forest_.size(); }
  const Forest& forest() const { return forest_; }

  // Every node appears after all of its descendants.
  const std::vector<NodeId>& order() const { return forest_.bottom_up_order(); }

  // The node itself followed by its descendants in preorder.
  std::span<const NodeId> group(NodeId node) const {
    return {members_.data() + offsets_[node], offsets_[node + 1] - offsets_[node]};
  }

 private:
  Forest forest_;
  std::vector<NodeId> members_;
  std::vector<std::size_t> offsets_;
};

namespace detail {

template <typename Derived>
void group_threshold_unchecked(Eigen::MatrixBase<Derived>& a, std::span<const NodeId> group,
                               typename Derived::Scalar t) {
  using Scalar = typename Derived::Scalar;
  if (group.size() == 1) {
    a(group[0]) = soft_threshold(a(group[0]), t);
    return;
  }
  Scalar sumsq(0);
  for (NodeId i : group) sumsq += a(i) * a(i);
  const Scalar r = std::sqrt(sumsq);
  if (r <= t || r < Scalar(kGroupNormFloor)) {
    for (NodeId i : group) a(i) = Scalar(0);
    return;
  }
  const Scalar scale = Scalar(1) - t / r;
  for (NodeId i : group) a(i) *= scale;
}

}  // namespace detail

// Block soft-thresholding of `group` in place; other coordinates untouched.
template <typename Derived>
void group_threshold_inplace(Eigen::MatrixBase<Derived>& a, std::span<const NodeId> group,
                             typename Derived::Scalar t) {
  if (group.empty()) throw ValidationError("group_threshold: empty group");
  for (NodeId i : group) {
    if (i < 0 || i >= a.size()) throw ValidationError("group_threshold: index out of range");
  }
  if (t < 0) throw ValidationError("group_threshold: negative threshold");
  detail::group_threshold_unchecked(a, group, t);
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> group_threshold(
    const Eigen::MatrixBase<Derived>& a, std::span<const NodeId> group,
    typename Derived::Scalar t) {
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> out = a;
  group_threshold_inplace(out, group, t);
  return out;
}

// Exact minimizer of 0.5 * ||u - a||^2 + t * omega(u), written over `a`.
template <typename Derived>
void forest_prox_inplace(const ProxPlan& plan, Eigen::MatrixBase<Derived>& a,
                         typename Derived::Scalar t) {
  if (a.size() != plan.size()) throw ValidationError("forest_prox: length mismatch");
  if (t < 0) throw ValidationError("forest_prox: negative threshold");
  for (NodeId node : plan.order()) detail::group_threshold_unchecked(a, plan.group(node), t);
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> forest_prox(
    const ProxPlan& plan, const Eigen::MatrixBase<Derived>& a, typename Derived::Scalar t) {
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> out = a;
  forest_prox_inplace(plan, out, t);
  return out;
}

// Coordinate-wise soft thresholding.
template <typename Derived>
void l1_prox_inplace(Eigen::MatrixBase<Derived>& a, typename Derived::Scalar t) {
  if (t < 0) throw ValidationError("l1_prox: negative threshold");
  for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = soft_threshold(a(i), t);
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> l1_prox(
    const Eigen::MatrixBase<Derived>& a, typename Derived::Scalar t) {
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> out = a;
  l1_prox_inplace(out, t);
  return out;
}

}  // namespace forest_embed

#endif  // FOREST_EMBED_PROX_HPP_
