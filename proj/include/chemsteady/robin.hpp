#ifndef CHEMSTEADY_ROBIN_HPP
#define CHEMSTEADY_ROBIN_HPP

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>
#include <memory>
#include <vector>

#include "chemsteady/domain.hpp"
#include "chemsteady/errors.hpp"

namespace chemsteady {

/// Discrete elliptic operator (Laplacian - q) with the Robin condition
/// d_nu(u) + b*u = phi folded into the boundary rows by centered ghost
/// nodes. Interval and radial grids assemble to a tridiagonal system solved
/// by direct banded elimination; rectangles assemble to a sparse matrix
/// solved by sparse LU. Immutable after assembly.
///
/// Sign conventions: interior rows discretize (Delta u)_i - q_i u_i, so the
/// negated matrix has the M-matrix sign pattern (positive diagonal,
/// nonpositive off-diagonals) and the discrete comparison principle holds
/// exactly: f >= 0 and phi <= 0 imply u <= 0.
class RobinOperator {
 public:
  /// Requires q >= 0, b >= 0 and (q or b not identically zero); an all-zero
  /// pair leaves the constant nullspace and is refused at assembly.
  static RobinOperator assemble(const Grid& grid, const ScalarField& q,
                                const std::vector<double>& b) {
    if (static_cast<int>(q.size()) != grid.size())
      throw std::invalid_argument("assemble: q does not match grid");
    if (b.size() != grid.boundary.size())
      throw std::invalid_argument("assemble: b does not match grid boundary");
    double qmax = 0.0, bmax = 0.0;
    for (double v : q) {
      if (v < 0.0) throw ConfigError("assemble: q must be nonnegative");
      qmax = std::max(qmax, v);
    }
    for (double v : b) {
      if (v < 0.0) throw ConfigError("assemble: b must be nonnegative");
      bmax = std::max(bmax, v);
    }
    if (qmax == 0.0 && bmax == 0.0)
      throw ConfigError(
          "singular operator: q and b vanish identically, the discrete "
          "problem has a constant nullspace");

    RobinOperator op;
    op.grid_ = &grid;
    op.phi_coef_.assign(grid.boundary.size(), 0.0);
    if (grid.domain.kind == DomainKind::Rectangle)
      op.assemble_rectangle(q, b);
    else
      op.assemble_banded(q, b);
    return op;
  }

  /// Solves (Delta - q)u = f, d_nu(u) + b*u = phi. The residual of the
  /// assembled system is verified against 1e-10 * |rhs|_inf.
  ScalarField solve(const ScalarField& f,
                    const std::vector<double>& phi) const {
    return solve_raw(rhs_vector(f, phi));
  }

  /// Solves against a raw algebraic right-hand side (Newton corrections).
  ScalarField solve_raw(const ScalarField& rhs) const {
    ScalarField u = banded_ ? solve_tridiagonal(rhs) : solve_sparse(rhs);
    double rnorm = 0.0, bnorm = 0.0;
    const ScalarField au = apply(u);
    for (int i = 0; i < grid_->size(); ++i) {
      rnorm = std::max(rnorm, std::abs(au[i] - rhs[i]));
      bnorm = std::max(bnorm, std::abs(rhs[i]));
    }
    if (rnorm > kSolveTol * bnorm)
      throw NumericalError("linear solve residual above tolerance", rnorm);
    return u;
  }

  /// Right-hand side vector for data (f, phi): f plus the ghost-node fold
  /// of the boundary values.
  ScalarField rhs_vector(const ScalarField& f,
                         const std::vector<double>& phi) const {
    if (static_cast<int>(f.size()) != grid_->size())
      throw std::invalid_argument("rhs_vector: f does not match grid");
    if (phi.size() != grid_->boundary.size())
      throw std::invalid_argument("rhs_vector: phi does not match boundary");
    ScalarField rhs = f;
    for (std::size_t e = 0; e < grid_->boundary.size(); ++e)
      rhs[grid_->boundary[e].node] += phi_coef_[e] * phi[e];
    return rhs;
  }

  /// Matrix-vector product with the assembled operator.
  ScalarField apply(const ScalarField& u) const {
    const int n = grid_->size();
    ScalarField out(n, 0.0);
    if (banded_) {
      for (int i = 0; i < n; ++i) {
        double s = diag_[i] * u[i];
        if (i > 0) s += lower_[i] * u[i - 1];
        if (i < n - 1) s += upper_[i] * u[i + 1];
        out[i] = s;
      }
    } else {
      Eigen::Map<const Eigen::VectorXd> uv(u.data(), n);
      Eigen::VectorXd r = (*matrix_) * uv;
      for (int i = 0; i < n; ++i) out[i] = r[i];
    }
    return out;
  }

  const Grid& grid() const { return *grid_; }
  bool banded() const { return banded_; }
  const std::vector<double>& band_lower() const { return lower_; }
  const std::vector<double>& band_diag() const { return diag_; }
  const std::vector<double>& band_upper() const { return upper_; }
  const Eigen::SparseMatrix<double>& matrix() const { return *matrix_; }
  /// Fold coefficient of phi into the rhs at each boundary entry (negative).
  const std::vector<double>& phi_coefficients() const { return phi_coef_; }

  static constexpr double kSolveTol = 1e-10;

 private:
  RobinOperator() = default;

  void assemble_banded(const ScalarField& q, const std::vector<double>& b) {
    banded_ = true;
    const Grid& g = *grid_;
    const int n = g.nx;
    const double h = g.hx;
    lower_.assign(n, 0.0);
    diag_.assign(n, 0.0);
    upper_.assign(n, 0.0);

    if (g.domain.kind == DomainKind::Interval) {
      // left end, outward normal -x
      diag_[0] = -2.0 / (h * h) - 2.0 * b[0] / h - q[0];
      upper_[0] = 2.0 / (h * h);
      phi_coef_[0] = -2.0 / h;
      for (int i = 1; i < n - 1; ++i) {
        lower_[i] = 1.0 / (h * h);
        upper_[i] = 1.0 / (h * h);
        diag_[i] = -2.0 / (h * h) - q[i];
      }
      diag_[n - 1] = -2.0 / (h * h) - 2.0 * b[1] / h - q[n - 1];
      lower_[n - 1] = 2.0 / (h * h);
      phi_coef_[1] = -2.0 / h;
    } else {  // radial ball
      const int N = g.domain.dim;
      const double R = g.domain.radius;
      // r = 0: symmetry limit Delta u(0) = N u''(0)
      diag_[0] = -2.0 * N / (h * h) - q[0];
      upper_[0] = 2.0 * N / (h * h);
      for (int i = 1; i < n - 1; ++i) {
        const double r = g.xs[i];
        const double am = std::pow(r - 0.5 * h, N - 1);
        const double ap = std::pow(r + 0.5 * h, N - 1);
        const double denom = h * h * std::pow(r, N - 1);
        lower_[i] = am / denom;
        upper_[i] = ap / denom;
        diag_[i] = -(am + ap) / denom - q[i];
      }
      const double am = std::pow(R - 0.5 * h, N - 1);
      const double ap = std::pow(R + 0.5 * h, N - 1);
      const double rpow = std::pow(R, N - 1);
      lower_[n - 1] = (am + ap) / (h * h * rpow);
      const double fold = 2.0 * ap / (h * rpow);
      diag_[n - 1] = -lower_[n - 1] - fold * b[0] - q[n - 1];
      phi_coef_[0] = -fold;
    }
  }

  void assemble_rectangle(const ScalarField& q, const std::vector<double>& b) {
    banded_ = false;
    const Grid& g = *grid_;
    const double ihx2 = 1.0 / (g.hx * g.hx);
    const double ihy2 = 1.0 / (g.hy * g.hy);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(g.size()) * 5);

    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        const int node = g.index(i, j);
        const int e = g.boundary_entry[node];
        const int sx = (e >= 0) ? g.boundary[e].side_x : 0;
        const int sy = (e >= 0) ? g.boundary[e].side_y : 0;
        double diag = -2.0 * ihx2 - 2.0 * ihy2 - q[node];

        if (sx == 0) {
          trip.emplace_back(node, g.index(i - 1, j), ihx2);
          trip.emplace_back(node, g.index(i + 1, j), ihx2);
        } else {
          trip.emplace_back(node, g.index(i - sx, j), 2.0 * ihx2);
          diag -= 2.0 * b[e] / g.hx;
          phi_coef_[e] -= 2.0 / g.hx;
        }
        if (sy == 0) {
          trip.emplace_back(node, g.index(i, j - 1), ihy2);
          trip.emplace_back(node, g.index(i, j + 1), ihy2);
        } else {
          trip.emplace_back(node, g.index(i, j - sy), 2.0 * ihy2);
          diag -= 2.0 * b[e] / g.hy;
          phi_coef_[e] -= 2.0 / g.hy;
        }
        trip.emplace_back(node, node, diag);
      }
    }

    matrix_ = std::make_unique<Eigen::SparseMatrix<double>>(g.size(), g.size());
    matrix_->setFromTriplets(trip.begin(), trip.end());
    matrix_->makeCompressed();
    lu_ = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
    lu_->compute(*matrix_);
    if (lu_->info() != Eigen::Success)
      throw NumericalError("sparse factorization failed");
  }

  ScalarField solve_tridiagonal(const ScalarField& rhs) const {
    // Thomas algorithm; the system is irreducibly diagonally dominant, so
    // elimination without pivoting is stable.
    const int n = grid_->size();
    std::vector<double> cp(n), dp(n);
    ScalarField u(n);
    cp[0] = upper_[0] / diag_[0];
    dp[0] = rhs[0] / diag_[0];
    for (int i = 1; i < n; ++i) {
      const double denom = diag_[i] - lower_[i] * cp[i - 1];
      cp[i] = upper_[i] / denom;
      dp[i] = (rhs[i] - lower_[i] * dp[i - 1]) / denom;
    }
    u[n - 1] = dp[n - 1];
    for (int i = n - 2; i >= 0; --i) u[i] = dp[i] - cp[i] * u[i + 1];
    return u;
  }

  ScalarField solve_sparse(const ScalarField& rhs) const {
    Eigen::Map<const Eigen::VectorXd> bv(rhs.data(), grid_->size());
    Eigen::VectorXd x = lu_->solve(bv);
    if (lu_->info() != Eigen::Success)
      throw NumericalError("sparse solve failed");
    return ScalarField(x.data(), x.data() + grid_->size());
  }

  const Grid* grid_ = nullptr;  // non-owning; grid must outlive the operator
  bool banded_ = true;
  std::vector<double> lower_, diag_, upper_;
  std::unique_ptr<Eigen::SparseMatrix<double>> matrix_;
  std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>> lu_;
  std::vector<double> phi_coef_;
};

}  // namespace chemsteady

#endif  // CHEMSTEADY_ROBIN_HPP
