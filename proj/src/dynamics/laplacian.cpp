#include <algorithm>
#include <cmath>
#include <string>

#include "pixflow/error.hpp"
#include "pixflow/laplacian.hpp"

namespace pixflow {

LaplacianSolver::LaplacianSolver(const PixelGraph& graph) : graph_(graph) {
  const auto n = graph.node_count();
  row_ptr_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    row_ptr_[i + 1] = row_ptr_[i] + static_cast<std::uint32_t>(graph.degree(static_cast<NodeId>(i)));
  }
  col_.reserve(row_ptr_[n]);
  edge_of_.reserve(row_ptr_[n]);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& inc : graph.incident(static_cast<NodeId>(i))) {
      col_.push_back(inc.node);
      edge_of_.push_back(inc.edge);
    }
  }
  val_.resize(col_.size());
  diag_.resize(n);
  inv_diag_.resize(n);
  rhs_.resize(n);
  r_.resize(n);
  z_.resize(n);
  p_.resize(n);
  q_.resize(n);
}

void LaplacianSolver::assemble(std::span<const double> conductance) {
  for (std::size_t k = 0; k < col_.size(); ++k) {
    val_[k] = conductance[static_cast<std::size_t>(edge_of_[k])];
  }
  for (std::size_t i = 0; i + 1 < row_ptr_.size(); ++i) {
    double s = 0.0;
    for (std::uint32_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += val_[k];
    diag_[i] = s;
  }
}

LaplacianSolveStats LaplacianSolver::solve(std::span<const double> conductance,
                                           std::span<const double> forcing, std::span<double> u,
                                           double tolerance, const simd::KernelTable& kernels) {
  const auto n = graph_.node_count();
  if (conductance.size() != graph_.edge_count() || forcing.size() != n || u.size() != n) {
    throw Error(ErrorCode::InvalidConfig, "laplacian solve: size mismatch");
  }
  assemble(conductance);
  component_ = component_labels(graph_, [&](EdgeId e) {
    return conductance[static_cast<std::size_t>(e)] > 0.0;
  });
  const auto comps = static_cast<std::size_t>(
      n == 0 ? 0 : *std::max_element(component_.begin(), component_.end()) + 1);

  std::vector<double> sum(comps, 0.0);
  std::vector<double> count(comps, 0.0);
  std::vector<char> active(comps, 0);
  std::vector<NodeId> ground(comps, -1);
  double total_abs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = static_cast<std::size_t>(component_[i]);
    sum[c] += forcing[i];
    count[c] += 1.0;
    if (forcing[i] != 0.0) active[c] = 1;
    if (ground[c] < 0) ground[c] = static_cast<NodeId>(i);
    total_abs += std::abs(forcing[i]);
  }
  for (std::size_t c = 0; c < comps; ++c) {
    if (active[c] && std::abs(sum[c]) > 1e-9 * std::max(1.0, total_abs)) {
      throw Error(ErrorCode::DisconnectedForcing,
                  "component rooted at node " + std::to_string(ground[c]) +
                      " carries net forcing " + std::to_string(sum[c]));
    }
  }

  std::vector<NodeId> fixed;
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = static_cast<std::size_t>(component_[i]);
    const bool is_fixed = !active[c] || ground[c] == static_cast<NodeId>(i);
    if (is_fixed) fixed.push_back(static_cast<NodeId>(i));
    rhs_[i] = active[c] ? forcing[i] - sum[c] / count[c] : 0.0;
    inv_diag_[i] = is_fixed ? 0.0 : 1.0 / diag_[i];
  }
  // Shift the warm start so every grounded node sits at zero.
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = static_cast<std::size_t>(component_[i]);
    u[i] = active[c] ? u[i] - u[static_cast<std::size_t>(ground[c])] : 0.0;
  }
  for (std::size_t c = 0; c < comps; ++c) {
    if (active[c]) u[static_cast<std::size_t>(ground[c])] = 0.0;
  }
  LaplacianSolveStats stats;
  if (n == 0) return stats;

  const simd::LaplacianView lap{n, row_ptr_.data(), col_.data(), val_.data(), diag_.data()};
  auto residual = [&] {
    kernels.laplacian_apply(lap, u.data(), q_.data());
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(q_[i] - forcing[i]));
    return worst;
  };
  auto true_residual = [&] {
    kernels.laplacian_apply(lap, u.data(), r_.data());
    for (std::size_t i = 0; i < n; ++i) r_[i] = rhs_[i] - r_[i];
    for (NodeId g : fixed) r_[static_cast<std::size_t>(g)] = 0.0;
  };

  const std::size_t max_iterations = 20 * n + 200;
  double inner_tol = 0.1 * tolerance;
  for (int attempt = 0; attempt < 8; ++attempt) {
    true_residual();
    kernels.multiply(inv_diag_.data(), r_.data(), z_.data(), n);
    std::copy(z_.begin(), z_.end(), p_.begin());
    double rz = kernels.dot(r_.data(), z_.data(), n);
    std::size_t it = 0;
    while (kernels.max_abs(r_.data(), n) > inner_tol) {
      if (it++ >= max_iterations) {
        throw Error(ErrorCode::SolveFailure, "conjugate gradients did not reach " +
                                                 std::to_string(inner_tol) + " in " +
                                                 std::to_string(max_iterations) + " iterations");
      }
      kernels.laplacian_apply(lap, p_.data(), q_.data());
      for (NodeId g : fixed) q_[static_cast<std::size_t>(g)] = 0.0;
      const double pq = kernels.dot(p_.data(), q_.data(), n);
      if (!(pq > 0.0)) break;
      const double alpha = rz / pq;
      kernels.axpy(alpha, p_.data(), u.data(), n);
      if (it % 50 == 0) {
        true_residual();
      } else {
        kernels.axpy(-alpha, q_.data(), r_.data(), n);
      }
      kernels.multiply(inv_diag_.data(), r_.data(), z_.data(), n);
      const double rz_next = kernels.dot(r_.data(), z_.data(), n);
      kernels.xpby(z_.data(), rz_next / rz, p_.data(), n);
      rz = rz_next;
      if (rz == 0.0) break;
    }
    stats.iterations += it;
    stats.residual = residual();
    if (stats.residual <= tolerance) return stats;
    inner_tol *= 0.1;
  }
  throw Error(ErrorCode::SolveFailure,
              "Kirchhoff residual " + std::to_string(stats.residual) + " above " +
                  std::to_string(tolerance));
}

}  // namespace pixflow
