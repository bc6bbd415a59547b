#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pixflow/pixel_graph.hpp"
#include "pixflow/simd/kernels.hpp"

namespace pixflow {

struct LaplacianSolveStats {
  std::size_t iterations = 0;
  double residual = 0.0;  // ||L u - f||_inf over every node
};

/// Solves the weighted graph Laplacian system L u = f with
/// L = B diag(c) B^T, grounding u = 0 at the lowest-id node of every component
/// of the subgraph with c_e > 0. Jacobi-preconditioned conjugate gradients on
/// a CSR structure built once per graph.
class LaplacianSolver {
 public:
  explicit LaplacianSolver(const PixelGraph& graph);

  /// `u` carries the warm start in and the grounded solution out.
  LaplacianSolveStats solve(std::span<const double> conductance, std::span<const double> forcing,
                            std::span<double> u, double tolerance,
                            const simd::KernelTable& kernels = simd::kernels());

 private:
  void assemble(std::span<const double> conductance);

  const PixelGraph& graph_;
  std::vector<std::uint32_t> row_ptr_;
  std::vector<std::int32_t> col_;
  std::vector<EdgeId> edge_of_;
  std::vector<double> val_;
  std::vector<double> diag_;
  std::vector<double> inv_diag_;
  std::vector<double> rhs_;
  std::vector<double> r_, z_, p_, q_;
  std::vector<std::int32_t> component_;
};

}  // namespace pixflow
