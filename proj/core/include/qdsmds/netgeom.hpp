#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "qdsmds/geometry.hpp"
#include "qdsmds/quatlin/matrix.hpp"
#include "qdsmds/quatlin/quaternion.hpp"

namespace qdsmds::netgeom {

using quatlin::Quaternion;
using quatlin::RealMatrix;

/// Anchors (known positions) followed by targets (to be estimated).
///
/// Requires at least 4 anchors that are not coplanar and at least one target.
class NetworkLayout {
 public:
  NetworkLayout(std::vector<Vec3> anchors, std::vector<Vec3> targets);

  std::size_t num_anchors() const noexcept { return anchors_.size(); }
  std::size_t num_targets() const noexcept { return targets_.size(); }
  std::size_t num_nodes() const noexcept { return anchors_.size() + targets_.size(); }

  const std::vector<Vec3>& anchors() const noexcept { return anchors_; }
  const std::vector<Vec3>& targets() const noexcept { return targets_; }
  /// Anchors then targets, node index order.
  std::vector<Vec3> nodes() const;

  RealMatrix anchor_matrix() const;  // N_A x 3
  RealMatrix target_matrix() const;  // N_T x 3

 private:
  std::vector<Vec3> anchors_;
  std::vector<Vec3> targets_;
};

/// One measurable node pair, 0-based node indices, first < second.
struct Edge {
  std::size_t i = 0;
  std::size_t j = 0;
  constexpr bool operator==(const Edge&) const = default;
};

/// Measurable edges: all anchor-anchor pairs, then all anchor-target pairs,
/// each block in ascending (i, j) order. Target-target pairs are never present.
class EdgeSet {
 public:
  EdgeSet(std::size_t num_anchors, std::size_t num_targets, std::vector<Edge> pairs);

  std::size_t num_anchors() const noexcept { return num_anchors_; }
  std::size_t num_targets() const noexcept { return num_targets_; }
  std::size_t num_nodes() const noexcept { return num_anchors_ + num_targets_; }
  std::size_t size() const noexcept { return pairs_.size(); }
  /// Leading rows [0, num_anchor_edges()) are anchor-anchor edges.
  std::size_t num_anchor_edges() const noexcept { return num_anchors_ * (num_anchors_ - 1) / 2; }

  const Edge& operator[](std::size_t m) const { return pairs_[m]; }
  const std::vector<Edge>& pairs() const noexcept { return pairs_; }

 private:
  std::size_t num_anchors_;
  std::size_t num_targets_;
  std::vector<Edge> pairs_;
};

/// M = N_A (N_A - 1) / 2 + N_A N_T.
constexpr std::size_t edge_count(std::size_t num_anchors, std::size_t num_targets) {
  return num_anchors * (num_anchors - 1) / 2 + num_anchors * num_targets;
}

/// Throws kInvalidCounts if num_anchors < 2.
EdgeSet enumerate_edges(std::size_t num_anchors, std::size_t num_targets);

/// M x N incidence matrix with +1 at column i and -1 at column j of each row,
/// so C X = V for node coordinates X and edge vectors V.
RealMatrix build_structure_matrix(const EdgeSet& edges);

/// The anchor-anchor rows (C_AA) and anchor-target rows (C_AT) of C.
RealMatrix anchor_block(const RealMatrix& c, const EdgeSet& edges);
RealMatrix target_block(const RealMatrix& c, const EdgeSet& edges);

/// x + y i + z j + 0 k.
constexpr Quaternion coords_to_quat(const Vec3& p) { return {p.x, p.y, p.z, 0.0}; }
/// Drops the k part.
constexpr Vec3 quat_to_coords(const Quaternion& q) { return {q.w, q.x, q.y}; }

/// Node coordinates as quaternions, node index order.
std::vector<Quaternion> coords_to_quat(std::span<const Vec3> nodes);

struct TrueEdges {
  RealMatrix vectors;              // M x 3, row m = x_i - x_j
  std::vector<Quaternion> quats;   // M, nu_m
};

TrueEdges true_edges(std::span<const Vec3> nodes, const EdgeSet& edges);
TrueEdges true_edges(const NetworkLayout& layout, const EdgeSet& edges);

/// Edge vectors of a node set, row m = x_i - x_j.
std::vector<Vec3> edge_vectors(std::span<const Vec3> nodes, const EdgeSet& edges);

RealMatrix to_matrix(std::span<const Vec3> points);
std::vector<Vec3> to_points(const RealMatrix& m);

}  // namespace qdsmds::netgeom
