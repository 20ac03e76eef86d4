#ifndef CHEMSTEADY_DOMAIN_HPP
#define CHEMSTEADY_DOMAIN_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "chemsteady/errors.hpp"

namespace chemsteady {

/// Node-indexed real values tied to one Grid (by size and layout).
using ScalarField = std::vector<double>;

enum class DomainKind { Interval, RadialBall, Rectangle };

/// Volume of the unit ball in dimension n.
inline double unit_ball_volume(int n) {
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

struct DomainSpec {
  DomainKind kind = DomainKind::Interval;
  int dim = 1;          // spatial dimension N
  double length = 0.0;  // interval
  double radius = 0.0;  // radial ball
  double lx = 0.0, ly = 0.0;  // rectangle

  static DomainSpec interval(double L) {
    if (!(L > 0.0)) throw ConfigError("interval length must be positive");
    DomainSpec d;
    d.kind = DomainKind::Interval;
    d.dim = 1;
    d.length = L;
    return d;
  }

  static DomainSpec radial_ball(int N, double R) {
    if (N < 1) throw ConfigError("ball dimension must be >= 1");
    if (!(R > 0.0)) throw ConfigError("ball radius must be positive");
    DomainSpec d;
    d.kind = DomainKind::RadialBall;
    d.dim = N;
    d.radius = R;
    return d;
  }

  static DomainSpec rectangle(double Lx, double Ly) {
    if (!(Lx > 0.0) || !(Ly > 0.0))
      throw ConfigError("rectangle side lengths must be positive");
    DomainSpec d;
    d.kind = DomainKind::Rectangle;
    d.dim = 2;
    d.lx = Lx;
    d.ly = Ly;
    return d;
  }

  /// Closed-form volume |Omega| of the described set.
  double measure() const {
    switch (kind) {
      case DomainKind::Interval:
        return length;
      case DomainKind::RadialBall:
        return unit_ball_volume(dim) * std::pow(radius, dim);
      case DomainKind::Rectangle:
        return lx * ly;
    }
    return 0.0;
  }

  std::string kind_name() const {
    switch (kind) {
      case DomainKind::Interval: return "interval";
      case DomainKind::RadialBall: return "ball";
      case DomainKind::Rectangle: return "rectangle";
    }
    return "?";
  }
};

/// One boundary node with its outward normal. side_x/side_y say which axis
/// directions the Robin condition acts along (-1, 0, +1); rectangle corners
/// have both set and carry the averaged normal for bookkeeping.
struct BoundaryEntry {
  int node = -1;
  int side_x = 0;
  int side_y = 0;
  double normal_x = 0.0;
  double normal_y = 0.0;
};

/// Uniform tensor grid over a DomainSpec. Immutable after construction.
struct Grid {
  DomainSpec domain;
  int nx = 0;
  int ny = 1;              // 1 for interval/radial grids
  double hx = 0.0;
  double hy = 0.0;
  std::vector<double> xs;  // axis coordinates (radius values for balls)
  std::vector<double> ys;  // empty for 1-D grids
  std::vector<BoundaryEntry> boundary;
  std::vector<int> boundary_entry;  // per node: index into boundary, or -1
  std::vector<double> quad_weights;
  bool has_origin = false;  // radial grids carry the symmetry node r = 0

  int size() const { return nx * std::max(ny, 1); }
  int index(int i, int j) const { return j * nx + i; }
  bool is_boundary(int node) const { return boundary_entry[node] >= 0; }
};

namespace detail {

// Trapezoidal weights written as telescoping coordinate differences so the
// weight sum reproduces the interval length to a few ulps.
inline std::vector<double> trapezoid_weights(const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  std::vector<double> w(n);
  w[0] = 0.5 * (x[1] - x[0]);
  for (int i = 1; i < n - 1; ++i) w[i] = 0.5 * (x[i + 1] - x[i - 1]);
  w[n - 1] = 0.5 * (x[n - 1] - x[n - 2]);
  return w;
}

inline std::vector<double> uniform_axis(double len, int n) {
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = len * (static_cast<double>(i) / (n - 1));
  x[n - 1] = len;
  return x;
}

}  // namespace detail

/// Builds a uniform grid with boundary bookkeeping and quadrature weights.
/// Radial quadrature carries the full surface-area factor so integrate()
/// returns true N-dimensional volume integrals.
inline Grid build_grid(const DomainSpec& domain, int resolution) {
  if (resolution < 8)
    throw ConfigError("grid resolution must be at least 8 nodes per axis");

  Grid g;
  g.domain = domain;

  switch (domain.kind) {
    case DomainKind::Interval: {
      g.nx = resolution;
      g.xs = detail::uniform_axis(domain.length, resolution);
      g.hx = domain.length / (resolution - 1);
      g.quad_weights = detail::trapezoid_weights(g.xs);
      g.boundary.push_back({0, -1, 0, -1.0, 0.0});
      g.boundary.push_back({resolution - 1, +1, 0, +1.0, 0.0});
      break;
    }
    case DomainKind::RadialBall: {
      g.nx = resolution;
      g.xs = detail::uniform_axis(domain.radius, resolution);
      g.hx = domain.radius / (resolution - 1);
      g.has_origin = true;
      const double surface = domain.dim * unit_ball_volume(domain.dim);
      const auto trap = detail::trapezoid_weights(g.xs);
      g.quad_weights.resize(resolution);
      for (int i = 0; i < resolution; ++i)
        g.quad_weights[i] =
            surface * trap[i] * std::pow(g.xs[i], domain.dim - 1);
      g.boundary.push_back({resolution - 1, +1, 0, +1.0, 0.0});
      break;
    }
    case DomainKind::Rectangle: {
      g.nx = resolution;
      g.ny = resolution;
      g.xs = detail::uniform_axis(domain.lx, resolution);
      g.ys = detail::uniform_axis(domain.ly, resolution);
      g.hx = domain.lx / (resolution - 1);
      g.hy = domain.ly / (resolution - 1);
      const auto wx = detail::trapezoid_weights(g.xs);
      const auto wy = detail::trapezoid_weights(g.ys);
      g.quad_weights.resize(g.size());
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
          g.quad_weights[g.index(i, j)] = wx[i] * wy[j];
      const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
      for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
          const int sx = (i == 0) ? -1 : (i == g.nx - 1 ? +1 : 0);
          const int sy = (j == 0) ? -1 : (j == g.ny - 1 ? +1 : 0);
          if (sx == 0 && sy == 0) continue;
          BoundaryEntry e;
          e.node = g.index(i, j);
          e.side_x = sx;
          e.side_y = sy;
          if (sx != 0 && sy != 0) {  // corner: averaged normal, bookkeeping only
            e.normal_x = sx * inv_sqrt2;
            e.normal_y = sy * inv_sqrt2;
          } else {
            e.normal_x = sx;
            e.normal_y = sy;
          }
          g.boundary.push_back(e);
        }
      }
      break;
    }
  }

  g.boundary_entry.assign(g.size(), -1);
  for (int k = 0; k < static_cast<int>(g.boundary.size()); ++k)
    g.boundary_entry[g.boundary[k].node] = k;
  return g;
}

/// Quadrature: sum of quad_weights * field. Second-order accurate for smooth
/// fields; exact (to rounding) for constants on interval/rectangle grids.
inline double integrate(const ScalarField& field, const Grid& grid) {
  if (static_cast<int>(field.size()) != grid.size())
    throw std::invalid_argument("integrate: field does not match grid");
  double s = 0.0;
  for (int i = 0; i < grid.size(); ++i) s += grid.quad_weights[i] * field[i];
  return s;
}

/// Boundary permeability g (one value per boundary entry) and saturation
/// gamma. Admissible data has g >= 0 everywhere and g > 0 somewhere.
struct BoundaryData {
  std::vector<double> g;
  double gamma = 0.0;

  static BoundaryData constant(const Grid& grid, double g_value,
                               double gamma) {
    BoundaryData b;
    b.g.assign(grid.boundary.size(), g_value);
    b.gamma = gamma;
    b.validate(grid);
    return b;
  }

  void validate(const Grid& grid) const {
    if (g.size() != grid.boundary.size())
      throw ConfigError("boundary data does not match grid boundary");
    if (!(gamma > 0.0)) throw ConfigError("gamma must be positive");
    double gmax = 0.0;
    for (double v : g) {
      if (v < 0.0) throw ConfigError("permeability g must be nonnegative");
      gmax = std::max(gmax, v);
    }
    if (!(gmax > 0.0))
      throw ConfigError("permeability g must not vanish identically");
  }

  bool is_constant() const {
    for (double v : g)
      if (v != g.front()) return false;
    return true;
  }
};

}  // namespace chemsteady

#endif  // CHEMSTEADY_DOMAIN_HPP
