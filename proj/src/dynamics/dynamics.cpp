#include <algorithm>
#include <cmath>
#include <string>

#include "pixflow/dynamics.hpp"
#include "pixflow/error.hpp"
#include "pixflow/laplacian.hpp"

namespace pixflow {
namespace {

void require_size(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw Error(ErrorCode::InvalidConfig, std::string(what) + ": expected " + std::to_string(want) +
                                              " entries, got " + std::to_string(got));
  }
}

std::vector<double> conductances(const PixelGraph& graph, std::span<const double> mu, double floor) {
  std::vector<double> c(graph.edge_count());
  for (std::size_t e = 0; e < c.size(); ++e) {
    c[e] = mu[e] > floor ? mu[e] / graph.edges()[e].length : 0.0;
  }
  return c;
}

double operational_cost(const PixelGraph& graph, std::span<const double> mu, std::span<const double> u) {
  double s = 0.0;
  for (std::size_t e = 0; e < graph.edge_count(); ++e) {
    if (mu[e] <= 0.0) continue;
    const auto& ed = graph.edges()[e];
    const double grad = (u[static_cast<std::size_t>(ed.a)] - u[static_cast<std::size_t>(ed.b)]) / ed.length;
    s += mu[e] * grad * grad * ed.length;
  }
  return 0.5 * s;
}

// Per-edge infrastructure term; at beta == 2 the log limit (up to a constant).
double infrastructure_term(double mu, double length, double beta) {
  if (beta == 2.0) return 0.5 * std::log(mu) * length;
  return 0.5 * beta * std::pow(mu, (2.0 - beta) / beta) / (2.0 - beta) * length;
}

struct Energy {
  double operational;  // f.u - u.L.u/2, equal to the quadratic term at the exact solve
  std::vector<double> infrastructure;  // per edge, 0 on dead edges
  double infrastructure_total;

  [[nodiscard]] double total() const { return operational + infrastructure_total; }
  [[nodiscard]] double restricted_to(std::span<const double> live_mu) const {
    double s = operational;
    for (std::size_t e = 0; e < infrastructure.size(); ++e) {
      if (live_mu[e] > 0.0) s += infrastructure[e];
    }
    return s;
  }
};

Energy evaluate_energy(const PixelGraph& graph, std::span<const double> mu, std::span<const double> u,
                       std::span<const double> forcing, double beta) {
  Energy en;
  double work = 0.0;
  for (std::size_t i = 0; i < forcing.size(); ++i) work += forcing[i] * u[i];
  en.operational = work - operational_cost(graph, mu, u);
  en.infrastructure.assign(graph.edge_count(), 0.0);
  en.infrastructure_total = 0.0;
  for (std::size_t e = 0; e < graph.edge_count(); ++e) {
    if (mu[e] <= 0.0) continue;
    en.infrastructure[e] = infrastructure_term(mu[e], graph.edges()[e].length, beta);
    en.infrastructure_total += en.infrastructure[e];
  }
  return en;
}

}  // namespace

void TransportProblem::validate() const {
  require_size(forcing.size(), graph.node_count(), "forcing");
  require_size(mu0.size(), graph.edge_count(), "mu0");
  if (!(beta >= 1.0) || !std::isfinite(beta)) {
    throw Error(ErrorCode::InvalidConfig, "beta must be >= 1, got " + std::to_string(beta));
  }
  double sum = 0.0;
  double total = 0.0;
  for (double f : forcing) {
    if (!std::isfinite(f)) throw Error(ErrorCode::InvalidConfig, "forcing must be finite");
    sum += f;
    total += std::abs(f);
  }
  if (std::abs(sum) > 1e-12 * std::max(1.0, total)) {
    throw Error(ErrorCode::InvalidConfig, "forcing does not sum to zero (" + std::to_string(sum) + ")");
  }
  for (double m : mu0) {
    if (!(m > 0.0) || !std::isfinite(m)) {
      throw Error(ErrorCode::InvalidConfig, "initial conductivities must be positive");
    }
  }
}

void SolverParams::validate() const {
  if (!(dt > 0.0) || !(dt_max >= dt) || !(dt_growth >= 1.0) || !(dt_min > 0.0) || dt_min > dt) {
    throw Error(ErrorCode::InvalidConfig, "time step settings are inconsistent");
  }
  if (!(mu_tol > 0.0) || !(kirchhoff_tol > 0.0) || !(mu_floor > 0.0) || !(lyapunov_slack >= 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "solver tolerances must be positive");
  }
  if (max_iter == 0) throw Error(ErrorCode::InvalidConfig, "max_iter must be positive");
}

std::vector<double> solve_potentials(const PixelGraph& graph, std::span<const double> mu,
                                     std::span<const double> forcing, double kirchhoff_tol,
                                     double mu_floor) {
  require_size(mu.size(), graph.edge_count(), "mu");
  require_size(forcing.size(), graph.node_count(), "forcing");
  LaplacianSolver solver(graph);
  std::vector<double> u(graph.node_count(), 0.0);
  solver.solve(conductances(graph, mu, mu_floor), forcing, u, kirchhoff_tol);
  return u;
}

std::vector<double> compute_flux(const PixelGraph& graph, std::span<const double> mu,
                                 std::span<const double> u) {
  require_size(mu.size(), graph.edge_count(), "mu");
  require_size(u.size(), graph.node_count(), "u");
  std::vector<double> flux(graph.edge_count());
  for (std::size_t e = 0; e < flux.size(); ++e) {
    const auto& ed = graph.edges()[e];
    flux[e] = mu[e] / ed.length * (u[static_cast<std::size_t>(ed.a)] - u[static_cast<std::size_t>(ed.b)]);
  }
  return flux;
}

double kirchhoff_residual(const PixelGraph& graph, std::span<const double> flux,
                          std::span<const double> forcing) {
  const auto divergence = IncidenceMatrix(graph).apply(flux);
  double worst = 0.0;
  for (std::size_t i = 0; i < divergence.size(); ++i) {
    worst = std::max(worst, std::abs(divergence[i] - forcing[i]));
  }
  return worst;
}

std::vector<double> step_conductivities(std::span<const double> mu, std::span<const double> flux,
                                        double dt, double beta, double mu_floor) {
  require_size(flux.size(), mu.size(), "flux");
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidConfig, "dt must be positive");
  std::vector<double> next(mu.begin(), mu.end());
  simd::kernels().conductivity_step(next.data(), flux.data(), next.size(), dt, beta, mu_floor);
  return next;
}

double lyapunov_cost(const PixelGraph& graph, std::span<const double> mu, std::span<const double> u,
                     double beta) {
  if (beta == 2.0) throw Error(ErrorCode::BetaSingular, "cost is undefined at beta == 2");
  require_size(mu.size(), graph.edge_count(), "mu");
  require_size(u.size(), graph.node_count(), "u");
  double infra = 0.0;
  for (std::size_t e = 0; e < graph.edge_count(); ++e) {
    if (mu[e] > 0.0) infra += infrastructure_term(mu[e], graph.edges()[e].length, beta);
  }
  return operational_cost(graph, mu, u) + infra;
}

DynamicsState run_dynamics(const TransportProblem& problem, const SolverParams& params,
                           const StepObserver& observer) {
  problem.validate();
  params.validate();
  const PixelGraph& graph = problem.graph;
  const auto& k = simd::kernels();
  const auto m = graph.edge_count();
  const double beta = problem.beta;
  std::span<const double> forcing = problem.forcing;

  std::vector<double> lengths = graph.lengths();
  std::vector<std::int32_t> heads(m), tails(m);
  for (std::size_t e = 0; e < m; ++e) {
    heads[e] = graph.edges()[e].a;
    tails[e] = graph.edges()[e].b;
  }

  LaplacianSolver solver(graph);
  std::vector<double> cond(m);
  auto solve = [&](const std::vector<double>& mu, std::vector<double>& u, std::vector<double>& flux) {
    for (std::size_t e = 0; e < m; ++e) cond[e] = mu[e] / lengths[e];
    solver.solve(cond, forcing, u, params.kirchhoff_tol, k);
    k.edge_gradient(heads.data(), tails.data(), cond.data(), u.data(), flux.data(), m);
    return kirchhoff_residual(graph, flux, forcing);
  };
  auto notify = [&](std::size_t it, double dt, bool accepted, double cost, double residual, double rate,
                    const std::vector<double>& mu, const std::vector<double>& u) {
    if (observer) observer(StepRecord{it, dt, accepted, cost, residual, rate, mu, u});
  };

  DynamicsState state;
  state.mu.resize(m);
  for (std::size_t e = 0; e < m; ++e) {
    state.mu[e] = problem.mu0[e] < params.mu_floor ? 0.0 : problem.mu0[e];
  }
  state.u.assign(graph.node_count(), 0.0);
  state.flux.assign(m, 0.0);
  double residual = solve(state.mu, state.u, state.flux);
  state.max_kirchhoff_residual = residual;
  Energy energy = evaluate_energy(graph, state.mu, state.u, forcing, beta);
  notify(0, 0.0, true, energy.total(), residual, 0.0, state.mu, state.u);

  std::vector<double> mu_try(m), u_try, flux_try(m);
  double dt = params.dt;
  for (std::size_t it = 1; it <= params.max_iter; ++it) {
    bool forced = false;
    Energy trial;
    for (;;) {
      std::copy(state.mu.begin(), state.mu.end(), mu_try.begin());
      k.conductivity_step(mu_try.data(), state.flux.data(), m, dt, beta, params.mu_floor);
      u_try = state.u;
      residual = solve(mu_try, u_try, flux_try);
      trial = evaluate_energy(graph, mu_try, u_try, forcing, beta);
      // Edges that died this step leave both sides of the comparison.
      const double before = energy.restricted_to(mu_try);
      if (trial.total() <= before + params.lyapunov_slack) break;
      if (dt <= params.dt_min) {
        forced = true;
        break;
      }
      ++state.rejected_steps;
      notify(it, dt, false, trial.total(), residual, 0.0, mu_try, u_try);
      dt = std::max(0.5 * dt, params.dt_min);
    }

    double rate = 0.0;
    std::size_t live = 0;
    for (std::size_t e = 0; e < m; ++e) {
      if (state.mu[e] > 0.0) rate = std::max(rate, std::abs(mu_try[e] - state.mu[e]) / (dt * state.mu[e]));
      if (mu_try[e] > 0.0) ++live;
    }
    std::swap(state.mu, mu_try);
    std::swap(state.u, u_try);
    std::swap(state.flux, flux_try);
    energy = std::move(trial);
    state.iteration = it;
    state.dt = dt;
    state.live_edges = live;
    state.max_kirchhoff_residual = std::max(state.max_kirchhoff_residual, residual);
    if (forced) ++state.forced_steps;
    notify(it, dt, true, energy.total(), residual, rate, state.mu, state.u);

    if (live == 0 || rate < params.mu_tol) {
      state.converged = true;
      break;
    }
    dt = std::min(dt * params.dt_growth, params.dt_max);
  }
  state.cost = energy.total();
  return state;
}

WeightedSubgraph filter_to_tree(const PixelGraph& graph, std::span<const double> mu, double eps_rel,
                                std::optional<NodeId> source) {
  require_size(mu.size(), graph.edge_count(), "mu");
  const double top = mu.empty() ? 0.0 : *std::max_element(mu.begin(), mu.end());
  if (!(top > 0.0)) throw Error(ErrorCode::EmptyFilter, "no edge carries conductivity");
  const double cutoff = eps_rel * top;
  std::vector<EdgeId> candidates;
  for (std::size_t e = 0; e < mu.size(); ++e) {
    if (mu[e] > 0.0 && mu[e] >= cutoff) candidates.push_back(static_cast<EdgeId>(e));
  }
  auto forest = maximum_spanning_forest(graph, candidates, mu);
  if (source) {
    forest = component_containing(graph, forest, *source);
    if (forest.empty()) {
      throw Error(ErrorCode::EmptyFilter,
                  "no surviving edge touches source node " + std::to_string(*source));
    }
  }
  return forest;
}

}  // namespace pixflow
