#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "pixflow/pixel_graph.hpp"
#include "pixflow/simd/kernels.hpp"
#include "pixflow/subgraph.hpp"

namespace pixflow {

/// Forcing (sources > 0, sinks < 0) on a graph, with the adaptation exponent
/// and the initial conductivities.
struct TransportProblem {
  const PixelGraph& graph;
  std::vector<double> forcing;
  double beta = 1.5;
  std::vector<double> mu0;

  /// Mass balance, beta >= 1 and strictly positive mu0; throws InvalidConfig.
  void validate() const;
};

struct SolverParams {
  double dt = 0.1;
  double dt_max = 0.5;
  double dt_growth = 1.05;
  double dt_min = 1e-10;
  std::size_t max_iter = 5000;
  /// Converged once every live edge changes by less than this fraction of
  /// itself per unit time.
  double mu_tol = 1e-6;
  // The transportation cost is first-order in the solve error, so this sits
  // well below the residual any caller needs.
  double kirchhoff_tol = 1e-10;
  double mu_floor = 1e-12;
  /// Largest cost increase an accepted step may show.
  double lyapunov_slack = 1e-10;

  void validate() const;
};

struct DynamicsState {
  std::vector<double> mu;
  std::vector<double> u;
  std::vector<double> flux;
  std::size_t iteration = 0;
  double cost = 0.0;
  bool converged = false;
  double dt = 0.0;
  std::size_t rejected_steps = 0;
  /// Steps accepted at dt_min although the cost still rose.
  std::size_t forced_steps = 0;
  double max_kirchhoff_residual = 0.0;
  std::size_t live_edges = 0;
};

/// One record per attempted step (accepted or not), for diagnostics and tests.
struct StepRecord {
  std::size_t iteration;
  double dt;
  bool accepted;
  double cost;
  double kirchhoff_residual;
  double max_rate;
  std::span<const double> mu;
  std::span<const double> u;
};
using StepObserver = std::function<void(const StepRecord&)>;

/// Potentials for the given conductivities, grounded at the lowest-id node of
/// every live component.
std::vector<double> solve_potentials(const PixelGraph& graph, std::span<const double> mu,
                                     std::span<const double> forcing,
                                     double kirchhoff_tol = 1e-10, double mu_floor = 1e-12);

/// F_e = (mu_e / l_e) (u_a - u_b) with the incidence orientation.
std::vector<double> compute_flux(const PixelGraph& graph, std::span<const double> mu,
                                 std::span<const double> u);

/// ||B F - f||_inf.
double kirchhoff_residual(const PixelGraph& graph, std::span<const double> flux,
                          std::span<const double> forcing);

/// Explicit Euler step of mu' = |F|^beta - mu, clipped at zero; entries below
/// mu_floor are set to exactly zero and stay dead.
std::vector<double> step_conductivities(std::span<const double> mu, std::span<const double> flux,
                                        double dt, double beta, double mu_floor = 1e-12);

/// Transportation cost: operational term plus infrastructure term, summed over
/// edges with mu > 0. Throws BetaSingular for beta == 2.
double lyapunov_cost(const PixelGraph& graph, std::span<const double> mu, std::span<const double> u,
                     double beta);

/// Iterates potentials -> flux -> conductivities to a stationary state with a
/// cost-safeguarded adaptive step. Returns converged=false when max_iter runs
/// out; DisconnectedForcing and SolveFailure propagate as exceptions.
DynamicsState run_dynamics(const TransportProblem& problem, const SolverParams& params = {},
                           const StepObserver& observer = {});

/// Keeps edges with mu >= eps_rel * max(mu), then reduces to a maximum-mu
/// spanning forest (ties by lower edge id). With a source, only the tree
/// holding that node is returned. Weights are the conductivities.
WeightedSubgraph filter_to_tree(const PixelGraph& graph, std::span<const double> mu,
                                double eps_rel = 1e-6, std::optional<NodeId> source = std::nullopt);

}  // namespace pixflow
