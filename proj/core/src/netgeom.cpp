#include "qdsmds/netgeom.hpp"

#include <string>

#include "qdsmds/error.hpp"
#include "qdsmds/quatlin/dense.hpp"

namespace qdsmds::netgeom {

NetworkLayout::NetworkLayout(std::vector<Vec3> anchors, std::vector<Vec3> targets)
    : anchors_(std::move(anchors)), targets_(std::move(targets)) {
  if (anchors_.size() < 4) {
    throw Error(ErrorCode::kInvalidCounts, "at least 4 anchors are required, got " +
                                               std::to_string(anchors_.size()));
  }
  if (targets_.empty()) throw Error(ErrorCode::kInvalidCounts, "at least one target is required");

  Vec3 centroid{};
  for (const auto& a : anchors_) centroid = centroid + a;
  centroid = (1.0 / static_cast<double>(anchors_.size())) * centroid;
  RealMatrix centered(anchors_.size(), 3);
  for (std::size_t r = 0; r < anchors_.size(); ++r) {
    const Vec3 d = anchors_[r] - centroid;
    centered(r, 0) = d.x;
    centered(r, 1) = d.y;
    centered(r, 2) = d.z;
  }
  if (quatlin::numerical_rank(centered, 1e-9) < 3) {
    throw Error(ErrorCode::kDegenerateLayout, "anchors are coplanar");
  }
}

std::vector<Vec3> NetworkLayout::nodes() const {
  std::vector<Vec3> all = anchors_;
  all.insert(all.end(), targets_.begin(), targets_.end());
  return all;
}

RealMatrix NetworkLayout::anchor_matrix() const { return to_matrix(anchors_); }
RealMatrix NetworkLayout::target_matrix() const { return to_matrix(targets_); }

EdgeSet::EdgeSet(std::size_t num_anchors, std::size_t num_targets, std::vector<Edge> pairs)
    : num_anchors_(num_anchors), num_targets_(num_targets), pairs_(std::move(pairs)) {}

EdgeSet enumerate_edges(std::size_t num_anchors, std::size_t num_targets) {
  if (num_anchors < 2) {
    throw Error(ErrorCode::kInvalidCounts, "at least 2 anchors are needed to form an edge");
  }
  const std::size_t n = num_anchors + num_targets;
  std::vector<Edge> pairs;
  pairs.reserve(edge_count(num_anchors, num_targets));
  for (std::size_t i = 0; i < num_anchors; ++i)
    for (std::size_t j = i + 1; j < num_anchors; ++j) pairs.push_back({i, j});
  for (std::size_t i = 0; i < num_anchors; ++i)
    for (std::size_t j = num_anchors; j < n; ++j) pairs.push_back({i, j});
  return EdgeSet(num_anchors, num_targets, std::move(pairs));
}

RealMatrix build_structure_matrix(const EdgeSet& edges) {
  RealMatrix c(edges.size(), edges.num_nodes());
  for (std::size_t m = 0; m < edges.size(); ++m) {
    c(m, edges[m].i) = 1.0;
    c(m, edges[m].j) = -1.0;
  }
  return c;
}

namespace {
RealMatrix row_slice(const RealMatrix& c, std::size_t begin, std::size_t end) {
  RealMatrix out(end - begin, c.cols());
  for (std::size_t r = begin; r < end; ++r)
    for (std::size_t k = 0; k < c.cols(); ++k) out(r - begin, k) = c(r, k);
  return out;
}
}  // namespace

RealMatrix anchor_block(const RealMatrix& c, const EdgeSet& edges) {
  return row_slice(c, 0, edges.num_anchor_edges());
}

RealMatrix target_block(const RealMatrix& c, const EdgeSet& edges) {
  return row_slice(c, edges.num_anchor_edges(), edges.size());
}

std::vector<Quaternion> coords_to_quat(std::span<const Vec3> nodes) {
  std::vector<Quaternion> out;
  out.reserve(nodes.size());
  for (const auto& p : nodes) out.push_back(coords_to_quat(p));
  return out;
}

std::vector<Vec3> edge_vectors(std::span<const Vec3> nodes, const EdgeSet& edges) {
  if (nodes.size() != edges.num_nodes()) {
    throw Error(ErrorCode::kShapeMismatch, "node count does not match edge set");
  }
  std::vector<Vec3> out;
  out.reserve(edges.size());
  for (const auto& e : edges.pairs()) out.push_back(nodes[e.i] - nodes[e.j]);
  return out;
}

TrueEdges true_edges(std::span<const Vec3> nodes, const EdgeSet& edges) {
  const auto vecs = edge_vectors(nodes, edges);
  TrueEdges out{to_matrix(vecs), {}};
  out.quats.reserve(vecs.size());
  for (const auto& v : vecs) out.quats.push_back(coords_to_quat(v));
  return out;
}

TrueEdges true_edges(const NetworkLayout& layout, const EdgeSet& edges) {
  const auto nodes = layout.nodes();
  return true_edges(nodes, edges);
}

RealMatrix to_matrix(std::span<const Vec3> points) {
  RealMatrix m(points.size(), 3);
  for (std::size_t r = 0; r < points.size(); ++r) {
    m(r, 0) = points[r].x;
    m(r, 1) = points[r].y;
    m(r, 2) = points[r].z;
  }
  return m;
}

std::vector<Vec3> to_points(const RealMatrix& m) {
  if (m.cols() != 3) throw Error(ErrorCode::kShapeMismatch, "point matrix must have 3 columns");
  std::vector<Vec3> out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) out[r] = {m(r, 0), m(r, 1), m(r, 2)};
  return out;
}

}  // namespace qdsmds::netgeom
