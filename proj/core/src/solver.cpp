#include "qdsmds/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qdsmds/error.hpp"
#include "qdsmds/quatlin/dense.hpp"
#include "qdsmds/quatlin/qsvd.hpp"

namespace qdsmds::solver {
namespace {

RealMatrix leading_rows(const RealMatrix& m, std::size_t count) {
  RealMatrix out(count, m.cols());
  for (std::size_t r = 0; r < count; ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
  return out;
}

RealMatrix trailing_rows(const RealMatrix& m, std::size_t from) {
  RealMatrix out(m.rows() - from, m.cols());
  for (std::size_t r = from; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r - from, c) = m(r, c);
  return out;
}

// Shared tail of both estimators: coordinates from edges, optional
// alignment, error against the true targets.
void finish(EstimateResult& res, const netgeom::NetworkLayout& layout, const netgeom::EdgeSet& edges,
            const SolverOptions& options) {
  const RealMatrix c = netgeom::build_structure_matrix(edges);
  const RealMatrix anchors = layout.anchor_matrix();
  RealMatrix nodes = recover_nodes(res.v_hat, c, anchors);
  if (options.procrustes) {
    RealMatrix ref = nodes;
    for (std::size_t r = 0; r < anchors.rows(); ++r)
      for (std::size_t k = 0; k < 3; ++k) ref(r, k) = anchors(r, k);
    std::vector<std::size_t> idx(anchors.rows());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    nodes = procrustes_align(nodes, ref, idx);
  }
  res.x_hat = trailing_rows(nodes, layout.num_anchors());
  res.xi = error_metric(res.x_hat, layout.target_matrix());
}

void require_square(std::size_t rows, std::size_t cols, const netgeom::EdgeSet& edges) {
  if (rows != cols || rows != edges.size()) {
    throw Error(ErrorCode::kShapeMismatch, "kernel must be M x M for the edge set");
  }
}

}  // namespace

EstimateResult smds_estimate(const RealMatrix& kernel, const netgeom::NetworkLayout& layout,
                             const netgeom::EdgeSet& edges, const SolverOptions& options) {
  require_square(kernel.rows(), kernel.cols(), edges);
  const std::size_t m = kernel.rows();
  quatlin::EigenOptions eig_opt = options.eigen;
  eig_opt.compute_vectors = true;
  eig_opt.max_vectors = 3;
  const auto eig = quatlin::hermitian_eig(kernel, eig_opt);
  if (m < 3 || !(eig.values[2] > 0.0)) {
    throw Error(ErrorCode::kRankDeficient, "real kernel has fewer than 3 positive eigenvalues");
  }

  EstimateResult res;
  res.diagnostics.spectrum = eig.values;
  RealMatrix v_prime(m, 3);
  for (std::size_t k = 0; k < 3; ++k) {
    const double s = std::sqrt(std::max(eig.values[k], 0.0));
    for (std::size_t r = 0; r < m; ++r) v_prime(r, k) = eig.vectors(r, k) * s;
  }

  const std::size_t aa = edges.num_anchor_edges();
  const auto truth = netgeom::true_edges(layout.anchors(), netgeom::enumerate_edges(layout.num_anchors(), 0));
  const RealMatrix v_prime_aa = leading_rows(v_prime, aa);
  const RealMatrix q = quatlin::orthogonal_procrustes(v_prime_aa, truth.vectors);
  res.v_hat = v_prime * q;
  res.diagnostics.gauge_residual_before = quatlin::frobenius_norm(v_prime_aa - truth.vectors);
  res.diagnostics.gauge_residual = quatlin::frobenius_norm(leading_rows(res.v_hat, aa) - truth.vectors);

  finish(res, layout, edges, options);
  return res;
}

EstimateResult qdsmds_estimate(const QuatMatrix& kernel, const netgeom::NetworkLayout& layout,
                               const netgeom::EdgeSet& edges, const SolverOptions& options) {
  require_square(kernel.rows(), kernel.cols(), edges);
  const std::size_t m = kernel.rows();
  quatlin::QsvdOptions qopt;
  qopt.eigen = options.eigen;
  const auto dom = quatlin::qsvd_dominant(kernel, qopt);

  EstimateResult res;
  res.diagnostics.spectrum = dom.singular_values;
  std::vector<Quaternion> nu_prime(m);
  const double s = std::sqrt(dom.sigma1);
  for (std::size_t r = 0; r < m; ++r) nu_prime[r] = dom.u1[r] * s;

  const std::size_t aa = edges.num_anchor_edges();
  const auto truth = netgeom::true_edges(layout.anchors(), netgeom::enumerate_edges(layout.num_anchors(), 0));
  const auto nu_hat = fix_quaternion_gauge(nu_prime, truth.quats, options.eigen.tol.gauge_min_norm);

  double before = 0.0, after = 0.0;
  for (std::size_t r = 0; r < aa; ++r) {
    before += quatlin::norm2(nu_prime[r] - truth.quats[r]);
    after += quatlin::norm2(nu_hat[r] - truth.quats[r]);
  }
  res.diagnostics.gauge_residual_before = std::sqrt(before);
  res.diagnostics.gauge_residual = std::sqrt(after);

  res.v_hat = RealMatrix(m, 3);
  double total = 0.0, discarded = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    res.v_hat(r, 0) = nu_hat[r].w;
    res.v_hat(r, 1) = nu_hat[r].x;
    res.v_hat(r, 2) = nu_hat[r].y;
    total += quatlin::norm2(nu_hat[r]);
    discarded += nu_hat[r].z * nu_hat[r].z;
  }
  res.diagnostics.k_energy = total > 0.0 ? discarded / total : 0.0;

  finish(res, layout, edges, options);
  return res;
}

std::vector<Quaternion> fix_quaternion_gauge(std::span<const Quaternion> nu_hat,
                                             std::span<const Quaternion> true_anchor_edges, double min_norm) {
  if (true_anchor_edges.empty() || true_anchor_edges.size() > nu_hat.size()) {
    throw Error(ErrorCode::kDegenerateGauge, "need at least one anchor-anchor edge");
  }
  Quaternion acc;
  for (std::size_t r = 0; r < true_anchor_edges.size(); ++r) acc += conj(nu_hat[r]) * true_anchor_edges[r];
  const double n = quatlin::norm(acc);
  if (!(n >= min_norm)) throw Error(ErrorCode::kDegenerateGauge, "gauge accumulator vanishes");
  const Quaternion q = acc * (1.0 / n);
  std::vector<Quaternion> out(nu_hat.size());
  for (std::size_t r = 0; r < nu_hat.size(); ++r) out[r] = nu_hat[r] * q;
  return out;
}

RealMatrix recover_nodes(const RealMatrix& v_hat, const RealMatrix& structure, const RealMatrix& anchors) {
  const std::size_t na = anchors.rows();
  const std::size_t n = structure.cols();
  const std::size_t m = structure.rows();
  if (v_hat.rows() != m || na > n || v_hat.cols() != anchors.cols()) {
    throw Error(ErrorCode::kShapeMismatch, "recover_coords: inconsistent shapes");
  }
  RealMatrix stacked(na + m, n);
  RealMatrix rhs(na + m, v_hat.cols());
  for (std::size_t r = 0; r < na; ++r) {
    stacked(r, r) = 1.0;
    for (std::size_t c = 0; c < anchors.cols(); ++c) rhs(r, c) = anchors(r, c);
  }
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) stacked(na + r, c) = structure(r, c);
    for (std::size_t c = 0; c < v_hat.cols(); ++c) rhs(na + r, c) = v_hat(r, c);
  }
  return quatlin::least_squares(stacked, rhs);
}

RealMatrix recover_coords(const RealMatrix& v_hat, const RealMatrix& structure, const RealMatrix& anchors) {
  return trailing_rows(recover_nodes(v_hat, structure, anchors), anchors.rows());
}

RealMatrix procrustes_align(const RealMatrix& x_hat, const RealMatrix& x_ref,
                            std::span<const std::size_t> anchor_indices) {
  if (x_hat.rows() != x_ref.rows() || x_hat.cols() != x_ref.cols()) {
    throw Error(ErrorCode::kShapeMismatch, "procrustes_align: shape mismatch");
  }
  const std::size_t k = anchor_indices.size();
  const std::size_t dim = x_hat.cols();
  if (k < 4) throw Error(ErrorCode::kDegenerateReference, "need at least 4 reference points");

  std::vector<double> mu_x(dim, 0.0), mu_y(dim, 0.0);
  for (std::size_t idx : anchor_indices) {
    for (std::size_t c = 0; c < dim; ++c) {
      mu_x[c] += x_hat(idx, c) / static_cast<double>(k);
      mu_y[c] += x_ref(idx, c) / static_cast<double>(k);
    }
  }
  RealMatrix xc(k, dim), yc(k, dim);
  double x_energy = 0.0;
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      xc(r, c) = x_hat(anchor_indices[r], c) - mu_x[c];
      yc(r, c) = x_ref(anchor_indices[r], c) - mu_y[c];
      x_energy += xc(r, c) * xc(r, c);
    }
  }
  if (quatlin::numerical_rank(yc, 1e-9) < dim || quatlin::numerical_rank(xc, 1e-9) < dim) {
    throw Error(ErrorCode::kDegenerateReference, "reference points are coplanar");
  }
  const auto svd = quatlin::svd_jacobi(transpose(xc) * yc);
  const RealMatrix rot = svd.u * transpose(svd.v);
  const double scale = std::accumulate(svd.s.begin(), svd.s.end(), 0.0) / x_energy;

  RealMatrix out(x_hat.rows(), dim);
  for (std::size_t r = 0; r < x_hat.rows(); ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      double acc = 0.0;
      for (std::size_t j = 0; j < dim; ++j) acc += (x_hat(r, j) - mu_x[j]) * rot(j, c);
      out(r, c) = scale * acc + mu_y[c];
    }
  }
  return out;
}

double error_metric(const RealMatrix& x_hat, const RealMatrix& x_true) {
  if (x_hat.rows() != x_true.rows() || x_hat.cols() != x_true.cols() || x_hat.rows() == 0) {
    throw Error(ErrorCode::kShapeMismatch, "error_metric: shape mismatch");
  }
  return quatlin::frobenius_norm(x_hat - x_true) / static_cast<double>(x_hat.rows());
}

}  // namespace qdsmds::solver
