#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "susypiv/error.hpp"
#include "susypiv/jet.hpp"

namespace susypiv {

/// Uniform grid of `n` points on [xmin, xmax].
struct Grid {
  double xmin = -10.0;
  double xmax = 10.0;
  std::size_t n = 4001;

  Grid() = default;
  Grid(double lo, double hi, std::size_t count) : xmin(lo), xmax(hi), n(count) {
    if (!(lo < hi) || count < 2) throw InvalidArgument("grid: need xmin < xmax and n >= 2");
  }

  double step() const { return (xmax - xmin) / static_cast<double>(n - 1); }
  double x(std::size_t i) const { return xmin + static_cast<double>(i) * step(); }
  std::size_t size() const { return n; }

  friend bool operator==(const Grid&, const Grid&) = default;
};

/// Complex samples on a grid. The first and last `trim` samples carry no
/// information (boundary points lost to finite-difference stencils).
struct GridFunction {
  Grid grid;
  std::vector<cplx> samples;
  std::string label;
  std::size_t trim = 0;

  GridFunction() = default;
  GridFunction(Grid g, std::vector<cplx> s, std::string l = {}, std::size_t t = 0)
      : grid(g), samples(std::move(s)), label(std::move(l)), trim(t) {
    if (samples.size() != grid.size()) throw InvalidArgument("grid function: sample count mismatch");
  }

  std::size_t size() const { return samples.size(); }
  std::size_t first() const { return trim; }
  std::size_t last() const { return samples.size() - trim; }  // one past the end

  double sup_norm() const {
    double s = 0.0;
    for (std::size_t i = first(); i < last(); ++i) s = std::max(s, std::abs(samples[i]));
    return s;
  }

  /// Rescales so that the largest |sample| is one. Zero functions are left alone.
  GridFunction& normalize_sup() {
    const double s = sup_norm();
    if (s > 0.0)
      for (auto& v : samples) v /= s;
    return *this;
  }
};

/// Samples `f` on `grid`.
inline GridFunction sample(const Grid& grid, const std::function<cplx(double)>& f,
                           std::string label = {}) {
  std::vector<cplx> s(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) s[i] = f(grid.x(i));
  return GridFunction(grid, std::move(s), std::move(label));
}

namespace fd {

// Central-difference stencils at index i; callers guarantee the stencil fits.

inline cplx d1_5(std::span<const cplx> f, std::size_t i, double h) {
  return (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
}

inline cplx d2_5(std::span<const cplx> f, std::size_t i, double h) {
  return (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) / (12.0 * h * h);
}

inline cplx d1_7(std::span<const cplx> f, std::size_t i, double h) {
  return (-f[i - 3] + 9.0 * f[i - 2] - 45.0 * f[i - 1] + 45.0 * f[i + 1] - 9.0 * f[i + 2] +
          f[i + 3]) /
         (60.0 * h);
}

inline cplx d2_7(std::span<const cplx> f, std::size_t i, double h) {
  return (2.0 * f[i - 3] - 27.0 * f[i - 2] + 270.0 * f[i - 1] - 490.0 * f[i] +
          270.0 * f[i + 1] - 27.0 * f[i + 2] + 2.0 * f[i + 3]) /
         (180.0 * h * h);
}

/// 5-point first derivative of a grid function; the trim grows by two.
inline GridFunction derivative(const GridFunction& g) {
  const std::size_t t = g.trim + 2;
  if (g.size() < 2 * t + 1) throw InvalidArgument("derivative: grid too coarse");
  std::vector<cplx> out(g.size(), cplx{});
  const double h = g.grid.step();
  for (std::size_t i = t; i + t < g.size(); ++i) out[i] = d1_5(g.samples, i, h);
  return GridFunction(g.grid, std::move(out), g.label + "'", t);
}

}  // namespace fd

/// Least-squares proportionality of `out` against `target` over the common
/// interior: out ~ c * target.
struct ProportionalityFit {
  cplx constant;
  double relative_residual;  // ||out - c target|| / ||out||
};

inline ProportionalityFit fit_proportional(const GridFunction& out, const GridFunction& target) {
  if (out.size() != target.size()) throw InvalidArgument("fit: grid mismatch");
  const std::size_t lo = std::max(out.first(), target.first());
  const std::size_t hi = std::min(out.last(), target.last());
  cplx num{};
  double den = 0.0;
  double out_norm = 0.0;
  for (std::size_t i = lo; i < hi; ++i) {
    num += std::conj(target.samples[i]) * out.samples[i];
    den += std::norm(target.samples[i]);
    out_norm += std::norm(out.samples[i]);
  }
  if (den == 0.0 || out_norm == 0.0) return {cplx{}, 1.0};
  const cplx c = num / den;
  double res = 0.0;
  for (std::size_t i = lo; i < hi; ++i) res += std::norm(out.samples[i] - c * target.samples[i]);
  return {c, std::sqrt(res / out_norm)};
}

}  // namespace susypiv
