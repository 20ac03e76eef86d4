#ifndef CHEMSTEADY_MASS_MAP_HPP
#define CHEMSTEADY_MASS_MAP_HPP

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "chemsteady/domain.hpp"
#include "chemsteady/errors.hpp"
#include "chemsteady/report.hpp"
#include "chemsteady/robin.hpp"
#include "chemsteady/scalar_problem.hpp"

namespace chemsteady {

/// One evaluation of the mass map m(alpha) = alpha * integral(e^{c_alpha}),
/// optionally with the derivative obtained from the linearized problem.
struct MassMapEval {
  double alpha = 0.0;
  double mass = 0.0;
  ScalarSolution solution;
  std::optional<ScalarField> c_prime;
  std::optional<double> dmass;
};

/// The steady pair (n, c) with its bookkeeping. n = alpha * e^c nodewise by
/// construction; report is filled by diagnostics::run_all.
struct SteadyState {
  ScalarField n;
  ScalarField c;
  double alpha = 0.0;
  double gamma = 0.0;
  std::optional<double> mass_target;
  double mass_achieved = 0.0;
  double n_equation_residual = 0.0;
  int scalar_iterations = 0;
  int mass_iterations = 0;
  double pde_residual = 0.0;
  double bc_residual = 0.0;
  CheckReport report;
};

/// Discrete residual of the n-equation div(grad n - n grad c) formed with
/// midpoint fluxes; vanishes analytically for n = alpha e^c, so its sup norm
/// measures pure discretization error. Evaluated on interior nodes.
inline double n_equation_residual(const Grid& grid, const ScalarField& n,
                                  const ScalarField& c) {
  if (static_cast<int>(n.size()) != grid.size() ||
      static_cast<int>(c.size()) != grid.size())
    throw std::invalid_argument("n_equation_residual: field/grid mismatch");

  double worst = 0.0;
  const auto flux = [&](double nl, double nr, double cl, double cr,
                        double h) {
    return (nr - nl) / h - 0.5 * (nl + nr) * (cr - cl) / h;
  };

  switch (grid.domain.kind) {
    case DomainKind::Interval: {
      const double h = grid.hx;
      for (int i = 1; i + 1 < grid.nx; ++i) {
        const double fr = flux(n[i], n[i + 1], c[i], c[i + 1], h);
        const double fl = flux(n[i - 1], n[i], c[i - 1], c[i], h);
        worst = std::max(worst, std::abs((fr - fl) / h));
      }
      break;
    }
    case DomainKind::RadialBall: {
      const double h = grid.hx;
      const int N = grid.domain.dim;
      for (int i = 1; i + 1 < grid.nx; ++i) {
        const double r = grid.xs[i];
        const double ap = std::pow(r + 0.5 * h, N - 1);
        const double am = std::pow(r - 0.5 * h, N - 1);
        const double fr = flux(n[i], n[i + 1], c[i], c[i + 1], h);
        const double fl = flux(n[i - 1], n[i], c[i - 1], c[i], h);
        worst = std::max(worst, std::abs((ap * fr - am * fl) /
                                         (h * std::pow(r, N - 1))));
      }
      break;
    }
    case DomainKind::Rectangle: {
      for (int j = 1; j + 1 < grid.ny; ++j) {
        for (int i = 1; i + 1 < grid.nx; ++i) {
          const int p = grid.index(i, j);
          const int e = grid.index(i + 1, j), w = grid.index(i - 1, j);
          const int nn = grid.index(i, j + 1), s = grid.index(i, j - 1);
          const double fx = (flux(n[p], n[e], c[p], c[e], grid.hx) -
                             flux(n[w], n[p], c[w], c[p], grid.hx)) /
                            grid.hx;
          const double fy = (flux(n[p], n[nn], c[p], c[nn], grid.hy) -
                             flux(n[s], n[p], c[s], c[p], grid.hy)) /
                            grid.hy;
          worst = std::max(worst, std::abs(fx + fy));
        }
      }
      break;
    }
  }
  return worst;
}

/// Evaluates m(alpha). The result satisfies alpha*|Omega| <= m <=
/// alpha*e^gamma*|Omega|, forced by 0 <= c <= gamma.
inline MassMapEval mass_of_alpha(const Grid& grid, const BoundaryData& bdata,
                                 double alpha,
                                 const ScalarSolveConfig& cfg = {}) {
  if (alpha < 0.0) throw ConfigError("alpha must be nonnegative");
  MassMapEval eval;
  eval.alpha = alpha;
  eval.solution = solve_scalar(grid, alpha, bdata, cfg);
  ScalarField ec(grid.size());
  for (int i = 0; i < grid.size(); ++i) ec[i] = std::exp(eval.solution.c[i]);
  eval.mass = alpha * integrate(ec, grid);

  const double measure = grid.domain.measure();
  const double lo = alpha * measure;
  const double hi = alpha * std::exp(bdata.gamma) * measure;
  const double slack = 1e-10 * std::max(1.0, hi);
  if (eval.mass < lo - slack || eval.mass > hi + slack)
    throw NumericalError("mass map left its two-sided bracket", eval.mass);
  return eval;
}

/// Solves the linearized problem for c' = dc/dalpha and returns (c', m').
/// c' satisfies -1/alpha < c' <= 0 nodewise and m' > 0; a breach signals
/// discretization failure and suggests grid refinement.
inline std::pair<ScalarField, double> dmass_dalpha(
    const Grid& grid, const BoundaryData& bdata, const ScalarSolution& sol) {
  if (!(sol.alpha > 0.0))
    throw std::invalid_argument("dmass_dalpha requires alpha > 0");

  const int n = grid.size();
  ScalarField q(n), f(n);
  for (int i = 0; i < n; ++i) {
    const double ec = std::exp(sol.c[i]);
    q[i] = sol.alpha * ec * (1.0 + sol.c[i]);
    f[i] = sol.c[i] * ec;
  }
  const RobinOperator op = RobinOperator::assemble(grid, q, bdata.g);
  const std::vector<double> phi(grid.boundary.size(), 0.0);
  ScalarField c_prime = op.solve(f, phi);

  const double slack = 1e-10;
  const double lower = -1.0 / sol.alpha;
  for (int i = 0; i < n; ++i) {
    if (c_prime[i] > slack || c_prime[i] <= lower - slack)
      throw NumericalError(
          "dc/dalpha violated (-1/alpha, 0]; refine the grid", c_prime[i]);
  }

  ScalarField integrand(n);
  for (int i = 0; i < n; ++i)
    integrand[i] = std::exp(sol.c[i]) * (1.0 + sol.alpha * c_prime[i]);
  const double dmass = integrate(integrand, grid);
  if (!(dmass > 0.0))
    throw NumericalError("mass-map derivative is not positive", dmass);
  return {std::move(c_prime), dmass};
}

/// Inverts the mass map: finds alpha with |m(alpha) - m_target| <=
/// tol * m_target by safeguarded Newton on the bracket
/// [m e^{-gamma}/|Omega|, m/|Omega|], which contains the root by the
/// two-sided mass bounds.
inline MassMapEval invert_mass(const Grid& grid, const BoundaryData& bdata,
                               double m_target, double tol = 1e-8,
                               const ScalarSolveConfig& cfg = {},
                               int* iterations_out = nullptr) {
  if (!(m_target > 0.0)) throw ConfigError("target mass must be positive");
  if (!(tol > 0.0)) throw ConfigError("mass tolerance must be positive");

  const double measure = grid.domain.measure();
  double lo = m_target * std::exp(-bdata.gamma) / measure;
  double hi = m_target / measure;

  MassMapEval at_lo = mass_of_alpha(grid, bdata, lo, cfg);
  MassMapEval at_hi = mass_of_alpha(grid, bdata, hi, cfg);
  const double slack = 1e-10 * m_target;
  if (at_lo.mass > m_target + slack || at_hi.mass < m_target - slack)
    throw NumericalError("mass bracket does not straddle the target: m(" +
                             std::to_string(lo) + ") = " +
                             std::to_string(at_lo.mass) + ", m(" +
                             std::to_string(hi) + ") = " +
                             std::to_string(at_hi.mass),
                         m_target);

  const auto finish = [&](MassMapEval eval, int iters) {
    if (!eval.c_prime && eval.alpha > 0.0) {
      auto [cp, dm] = dmass_dalpha(grid, bdata, eval.solution);
      eval.c_prime = std::move(cp);
      eval.dmass = dm;
    }
    if (iterations_out) *iterations_out = iters;
    return eval;
  };

  if (std::abs(at_lo.mass - m_target) <= tol * m_target)
    return finish(std::move(at_lo), 0);
  if (std::abs(at_hi.mass - m_target) <= tol * m_target)
    return finish(std::move(at_hi), 0);

  double alpha = 0.5 * (lo + hi);
  for (int k = 1; k <= 100; ++k) {
    MassMapEval eval = mass_of_alpha(grid, bdata, alpha, cfg);
    auto [cp, dm] = dmass_dalpha(grid, bdata, eval.solution);
    eval.c_prime = std::move(cp);
    eval.dmass = dm;

    if (std::abs(eval.mass - m_target) <= tol * m_target) {
      if (iterations_out) *iterations_out = k;
      return eval;
    }
    if (eval.mass < m_target)
      lo = alpha;
    else
      hi = alpha;

    double next = alpha - (eval.mass - m_target) / dm;
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
    alpha = next;
  }
  throw NumericalError("mass inversion did not converge", alpha);
}

/// Full pipeline for a prescribed mass: inverts the mass map, assembles
/// n = alpha e^c, and evaluates the n-equation consistency residual.
inline SteadyState steady_state(const Grid& grid, const BoundaryData& bdata,
                                double m_target, double tol = 1e-8,
                                const ScalarSolveConfig& cfg = {}) {
  int iters = 0;
  MassMapEval eval = invert_mass(grid, bdata, m_target, tol, cfg, &iters);

  SteadyState st;
  st.alpha = eval.alpha;
  st.gamma = bdata.gamma;
  st.mass_target = m_target;
  st.c = eval.solution.c;
  st.n.resize(grid.size());
  for (int i = 0; i < grid.size(); ++i)
    st.n[i] = eval.alpha * std::exp(st.c[i]);
  st.mass_achieved = integrate(st.n, grid);
  st.n_equation_residual = n_equation_residual(grid, st.n, st.c);
  st.scalar_iterations = eval.solution.iterations;
  st.mass_iterations = iters;
  st.pde_residual = eval.solution.pde_residual;
  st.bc_residual = eval.solution.bc_residual;
  return st;
}

/// Steady state for a directly prescribed alpha (no inversion); alpha = 0
/// yields the degenerate pair c = gamma, n = 0.
inline SteadyState steady_state_from_alpha(const Grid& grid,
                                           const BoundaryData& bdata,
                                           double alpha,
                                           const ScalarSolveConfig& cfg = {}) {
  SteadyState st;
  ScalarSolution sol = solve_scalar(grid, alpha, bdata, cfg);
  st.alpha = alpha;
  st.gamma = bdata.gamma;
  st.c = std::move(sol.c);
  st.n.resize(grid.size());
  for (int i = 0; i < grid.size(); ++i)
    st.n[i] = alpha * std::exp(st.c[i]);
  st.mass_achieved = integrate(st.n, grid);
  st.n_equation_residual = n_equation_residual(grid, st.n, st.c);
  st.scalar_iterations = sol.iterations;
  st.pde_residual = sol.pde_residual;
  st.bc_residual = sol.bc_residual;
  return st;
}

}  // namespace chemsteady

#endif  // CHEMSTEADY_MASS_MAP_HPP
