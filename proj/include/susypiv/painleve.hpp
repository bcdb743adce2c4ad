#pragma once

// Painleve IV solutions g = -x - (ln psi)' from the extremal states of H_k,
// and an independent finite-difference residual check of
//   g'' = g'^2/(2g) + 3/2 g^3 + 4x g^2 + 2(x^2 - a) g + b/g.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "susypiv/error.hpp"
#include "susypiv/grid.hpp"
#include "susypiv/precision.hpp"
#include "susypiv/susy.hpp"
#include "susypiv/wronskian.hpp"

namespace susypiv {

struct PivParams {
  double a = 0.0;
  double b = 0.0;
  int family = 1;
};

/// Which of (E1, E2, E3) plays the distinguished role for a family.
/// Families are numbered over the extremal states ordered
/// (eps_k, eps_1 + 1, 1/2): family 1 uses E1, family 2 uses E3 and
/// family 3 uses E2 (the mapped oscillator ground level, b = -2k^2).
inline int distinguished_level(int family) {
  switch (family) {
    case 1: return 1;
    case 2: return 3;
    case 3: return 2;
    default: throw InvalidArgument("family must be 1, 2 or 3");
  }
}

/// a = (sum of the other two) - 2 E_d - 1, b = -2 (difference of the other two)^2.
inline PivParams piv_parameters(double E1, double E2, double E3, int family) {
  const double e[3] = {E1, E2, E3};
  const int d = distinguished_level(family) - 1;
  const double p = e[(d + 1) % 3];
  const double q = e[(d + 2) % 3];
  return {p + q - 2.0 * e[d] - 1.0, -2.0 * (p - q) * (p - q), family};
}

inline PivParams piv_parameters(const ExtremalEnergies& E, int family) {
  return piv_parameters(E.E1, E.E2, E.E3, family);
}

struct PivSolution {
  Grid grid;
  std::vector<cplx> g;
  std::vector<bool> masked;  // pole of g (zero of the extremal state) at this sample
  PivParams params;
  SeedSpec provenance;

  std::size_t masked_count() const {
    std::size_t n = 0;
    for (bool m : masked) n += m;
    return n;
  }
};

inline constexpr double kZeroStateRatio = 1e-30;
inline constexpr double kPoleResolution = 14.0;
inline constexpr double kMaxPoleRadius = 0.07;
inline constexpr double kMaxMaskedFraction = 0.10;

/// Largest |g'| the 7-point residual can follow. Near a simple zero of a
/// Wronskian at distance d, (ln W)'' ~ -1/d^2 while it stays of order one
/// in the Gaussian tails, so |g'| > (14 h)^{-2} flags a pole of g within
/// about 14 grid steps, too sharp for the stencil. The radius is capped at
/// 0.07 (14 steps of the default grid) so coarse grids do not mask whole
/// neighbourhoods of a pole; their residuals simply come out larger.
inline double pole_slope_limit(double h) {
  const double r = std::min(kPoleResolution * h, kMaxPoleRadius);
  return 1.0 / (r * r);
}

/// g = -x - (ln psi_f)' for the extremal state of the family, from the
/// analytic log-derivatives of the Wronskians:
///   psi_E1 = W_{k-1}/W_k,  psi_E2 = W(u.., psi_0)/W_k,  psi_E3 = W(u.., a+u1)/W_k.
/// Throws ExtremalStateZero when more than 10% of the grid is masked.
inline PivSolution piv_solution(const PartnerModel& model, int family) {
  const int k = model.order();
  if (k < 1) throw InvalidArgument("piv_solution: needs a transformation of order >= 1");
  const int level = distinguished_level(family);
  const Grid& grid = model.grid();
  const std::size_t n = grid.size();

  PivSolution sol;
  sol.grid = grid;
  sol.g.assign(n, cplx{});
  sol.params = piv_parameters(model.levels(), family);
  sol.provenance = model.spec();

  const double eps1 = model.spec().eps1;
  auto extra = [&](std::size_t i) {
    return level == 2 ? oscillator_state(0, grid.x(i)).cast<wide_real>() : raise(model.chain(i)[0], eps1);
  };
  const double extra_energy = level == 2 ? oscillator_energy(0) : eps1 + 1.0;

  sol.masked.assign(n, false);
  const double h = grid.step();
  for (std::size_t i = 0; i < n; ++i) {
    const double x = grid.x(i);
    auto jets = model.chain(i, k + 2);
    const auto den = wronskian_jet<wide_real>(std::span<const WideJet>(jets).first(k), x);
    BasicWronskianJet<wide_real> num;
    if (level == 1) {
      num = wronskian_derivatives<wide_real>(std::span<const WideJet>(jets).first(k - 1));
    } else {
      jets.push_back(extend_jet(extra(i), extra_energy, k + 2));
      num = wronskian_derivatives<wide_real>(jets);
    }
    if (!(num.relative() >= wide_real(kZeroStateRatio))) {
      sol.masked[i] = true;
      continue;
    }
    const wide_cplx l1 = num.dW / num.W;
    const wide_cplx l2 = num.d2W / num.W - l1 * l1;
    const cplx slope = -1.0 - to_cplx(l2 - den.logd2);
    if (std::abs(slope) > pole_slope_limit(h)) {
      sol.masked[i] = true;
      continue;
    }
    sol.g[i] = -x - to_cplx(l1 - den.logd1);
  }

  if (sol.masked_count() > kMaxMaskedFraction * n)
    throw ExtremalStateZero("piv_solution: extremal state vanishes on more than 10% of the grid");

  double gmax = 0.0, xmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (sol.masked[i]) continue;
    gmax = std::max(gmax, std::abs(sol.g[i]));
    xmax = std::max(xmax, std::abs(grid.x(i)));
  }
  if (gmax <= 1e-12 * (1.0 + xmax)) throw DegenerateSeed("degenerate: g identically zero");
  return sol;
}

struct PivResidual {
  double value = 0.0;         // sup of the normalized residual
  std::size_t admissible = 0; // points where it was evaluated
  std::size_t excluded = 0;   // interior points dropped (masked stencil or |g| ~ 0)
};

inline constexpr double kSmallGRatio = 1e-8;

/// sup |g'' - rhs(g, g', x)| / (1 + |g|^3) over admissible interior points,
/// g' and g'' by 7-point central differences. Points whose stencil touches a
/// masked sample, or where |g| < 1e-8 sup|g|, are excluded.
inline PivResidual piv_residual(const Grid& grid, std::span<const cplx> g, const std::vector<bool>& masked,
                                double a, double b) {
  const std::size_t n = grid.size();
  if (g.size() != n || (!masked.empty() && masked.size() != n))
    throw InvalidArgument("piv_residual: sample count mismatch");
  auto is_masked = [&](std::size_t i) { return !masked.empty() && masked[i]; };
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (!is_masked(i)) scale = std::max(scale, std::abs(g[i]));

  const double h = grid.step();
  PivResidual r;
  for (std::size_t i = 3; i + 3 < n; ++i) {
    bool ok = std::abs(g[i]) >= kSmallGRatio * scale;
    for (std::size_t s = i - 3; ok && s <= i + 3; ++s) ok = !is_masked(s);
    if (!ok) {
      ++r.excluded;
      continue;
    }
    const double x = grid.x(i);
    const cplx gv = g[i];
    const cplx g1 = fd::d1_7(g, i, h);
    const cplx g2 = fd::d2_7(g, i, h);
    const cplx rhs = g1 * g1 / (2.0 * gv) + 1.5 * gv * gv * gv + 4.0 * x * gv * gv +
                     2.0 * (x * x - a) * gv + b / gv;
    const double mag = std::abs(gv);
    r.value = std::max(r.value, std::abs(g2 - rhs) / (1.0 + mag * mag * mag));
    ++r.admissible;
  }
  if (2 * r.admissible < n) throw InvalidArgument("piv_residual: fewer than half of the grid is admissible");
  return r;
}

inline PivResidual piv_residual(const PivSolution& s, double a, double b) {
  return piv_residual(s.grid, s.g, s.masked, a, b);
}

inline PivResidual piv_residual(const PivSolution& s) { return piv_residual(s, s.params.a, s.params.b); }

}  // namespace susypiv
