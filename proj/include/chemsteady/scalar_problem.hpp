#ifndef CHEMSTEADY_SCALAR_PROBLEM_HPP
#define CHEMSTEADY_SCALAR_PROBLEM_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "chemsteady/domain.hpp"
#include "chemsteady/errors.hpp"
#include "chemsteady/robin.hpp"

namespace chemsteady {

struct ScalarSolveConfig {
  double tol_outer = 1e-10;    // sup-norm step tolerance
  int max_picard = 200;        // outer iteration cap (Picard + Newton)
  double newton_switch = 1e-3; // step size below which Newton engages
  double damping = 1.0;        // Newton damping in (0, 1]
  std::optional<ScalarField> initial_guess;  // default: c0 = gamma
  std::function<void(const ScalarField&)> on_iterate;  // observer hook

  void validate() const {
    if (!(tol_outer > 0.0)) throw ConfigError("tol_outer must be positive");
    if (max_picard < 1) throw ConfigError("max_picard must be at least 1");
    if (!(newton_switch > 0.0))
      throw ConfigError("newton_switch must be positive");
    if (!(damping > 0.0) || damping > 1.0)
      throw ConfigError("damping must lie in (0, 1]");
  }
};

struct ScalarSolution {
  ScalarField c;
  double alpha = 0.0;
  double gamma = 0.0;
  int iterations = 0;
  std::vector<double> step_history;
  double pde_residual = 0.0;  // |Delta_h c - alpha c e^c|_inf on PDE rows
  double bc_residual = 0.0;   // boundary-row defect in boundary-condition units
};

namespace detail {

/// Algebraic residual of the discrete scalar problem: F(c) = A c - alpha c
/// e^c - rhs_phi, where A is the Laplacian with the Robin fold (q = 0) and
/// rhs_phi carries phi = gamma*g. Zero exactly at the discrete solution.
struct ScalarResidual {
  const RobinOperator* laplacian;
  ScalarField rhs_phi;
  double alpha;

  ScalarField operator()(const ScalarField& c) const {
    ScalarField F = laplacian->apply(c);
    for (std::size_t i = 0; i < c.size(); ++i)
      F[i] -= alpha * c[i] * std::exp(c[i]) + rhs_phi[i];
    return F;
  }
};

inline double sup_norm(const ScalarField& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline void split_residual_norms(const Grid& grid, const RobinOperator& lap,
                                 const ScalarField& F, double& pde_res,
                                 double& bc_res) {
  pde_res = 0.0;
  bc_res = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    if (!grid.is_boundary(i)) pde_res = std::max(pde_res, std::abs(F[i]));
  }
  const auto& fold = lap.phi_coefficients();
  for (std::size_t e = 0; e < grid.boundary.size(); ++e) {
    const double scale = std::abs(fold[e]);
    bc_res = std::max(bc_res,
                      std::abs(F[grid.boundary[e].node]) / std::max(scale, 1.0));
  }
}

}  // namespace detail

/// One Picard step: solves the linear problem Delta c = alpha e^{c_prev} c
/// with d_nu(c) + g c = gamma g. The frozen-exponent operator keeps the
/// M-matrix structure, so the output satisfies 0 <= c <= gamma exactly (to
/// rounding) whenever 0 <= c_prev.
inline ScalarField picard_step(const Grid& grid, double alpha,
                               const BoundaryData& bdata,
                               const ScalarField& c_prev) {
  if (alpha < 0.0) throw ConfigError("alpha must be nonnegative");
  bdata.validate(grid);
  if (static_cast<int>(c_prev.size()) != grid.size())
    throw std::invalid_argument("picard_step: field does not match grid");
  ScalarField q(grid.size());
  for (int i = 0; i < grid.size(); ++i) q[i] = alpha * std::exp(c_prev[i]);
  const RobinOperator op = RobinOperator::assemble(grid, q, bdata.g);
  ScalarField f(grid.size(), 0.0);
  std::vector<double> phi(grid.boundary.size());
  for (std::size_t e = 0; e < phi.size(); ++e)
    phi[e] = bdata.gamma * bdata.g[e];
  return op.solve(f, phi);
}

/// Solves Delta c = alpha c e^c, d_nu(c) = (gamma - c) g by Picard iteration
/// from c0 = gamma, switching to damped Newton once steps drop below
/// newton_switch. Convergence requires both a small step and a small PDE
/// residual.
inline ScalarSolution solve_scalar(const Grid& grid, double alpha,
                                   const BoundaryData& bdata,
                                   const ScalarSolveConfig& cfg = {}) {
  cfg.validate();
  if (alpha < 0.0) throw ConfigError("alpha must be nonnegative");
  bdata.validate(grid);

  const int n = grid.size();
  const ScalarField zero_q(n, 0.0);
  const RobinOperator laplacian = RobinOperator::assemble(grid, zero_q, bdata.g);
  std::vector<double> phi(grid.boundary.size());
  for (std::size_t e = 0; e < phi.size(); ++e)
    phi[e] = bdata.gamma * bdata.g[e];
  detail::ScalarResidual residual{&laplacian,
                                  laplacian.rhs_vector(ScalarField(n, 0.0), phi),
                                  alpha};

  ScalarSolution sol;
  sol.alpha = alpha;
  sol.gamma = bdata.gamma;
  sol.c = cfg.initial_guess ? *cfg.initial_guess : ScalarField(n, bdata.gamma);
  if (static_cast<int>(sol.c.size()) != n)
    throw std::invalid_argument("solve_scalar: initial guess does not match grid");
  if (cfg.on_iterate) cfg.on_iterate(sol.c);

  const double residual_scale =
      1e-8 * std::max(1.0, alpha * bdata.gamma * std::exp(bdata.gamma));
  bool newton = false;
  bool converged = false;

  for (int k = 0; k < cfg.max_picard; ++k) {
    double step = 0.0;
    if (!newton) {
      ScalarField c_next = picard_step(grid, alpha, bdata, sol.c);
      for (int i = 0; i < n; ++i)
        step = std::max(step, std::abs(c_next[i] - sol.c[i]));
      sol.c = std::move(c_next);
      if (step < cfg.newton_switch) newton = true;
    } else {
      ScalarField F = residual(sol.c);
      const double f_norm = detail::sup_norm(F);
      ScalarField q_newton(n);
      for (int i = 0; i < n; ++i)
        q_newton[i] = alpha * std::exp(sol.c[i]) * (1.0 + sol.c[i]);
      const RobinOperator op =
          RobinOperator::assemble(grid, q_newton, bdata.g);
      for (double& v : F) v = -v;
      const ScalarField delta = op.solve_raw(F);

      double lambda = cfg.damping;
      ScalarField c_trial(n);
      while (true) {
        for (int i = 0; i < n; ++i)
          c_trial[i] = sol.c[i] + lambda * delta[i];
        if (detail::sup_norm(residual(c_trial)) <= f_norm || lambda <= 0.0625)
          break;
        lambda *= 0.5;
      }
      step = lambda * detail::sup_norm(delta);
      sol.c = std::move(c_trial);
    }

    sol.step_history.push_back(step);
    ++sol.iterations;
    if (cfg.on_iterate) cfg.on_iterate(sol.c);

    if (step < cfg.tol_outer) {
      const ScalarField F = residual(sol.c);
      detail::split_residual_norms(grid, laplacian, F, sol.pde_residual,
                                   sol.bc_residual);
      if (sol.pde_residual <= residual_scale) {
        converged = true;
        break;
      }
    }
  }

  if (!converged)
    throw NumericalError("scalar solve did not converge within iteration cap",
                         sol.step_history.empty() ? 0.0
                                                  : sol.step_history.back(),
                         sol.step_history);

  return sol;
}

}  // namespace chemsteady

#endif  // CHEMSTEADY_SCALAR_PROBLEM_HPP
