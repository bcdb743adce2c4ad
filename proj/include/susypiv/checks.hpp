#pragma once

// Residual checks that re-derive each analytic quantity by finite
// differences, so that the Wronskian engine cannot certify itself.

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "susypiv/grid.hpp"
#include "susypiv/painleve.hpp"
#include "susypiv/precision.hpp"
#include "susypiv/seeds.hpp"
#include "susypiv/susy.hpp"
#include "susypiv/wronskian.hpp"

namespace susypiv {

struct CheckResult {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass() const { return value <= threshold; }
};

/// max_j sup |u_j'' - (x^2 - 2 eps_j) u_j| / (sup|u_j| + sup|u_j''|) with
/// u_j'' by 5-point differences of the sampled chain.
inline double chain_schrodinger_residual(const PartnerModel& model) {
  const Grid& grid = model.grid();
  const double h = grid.step();
  double worst = 0.0;
  for (int j = 0; j < model.order(); ++j) {
    std::vector<cplx> u(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) u[i] = to_cplx(model.chain(i)[j].value());
    const double eps = model.spec().energy(j + 1);
    double su = 0.0, sd = 0.0, sr = 0.0;
    for (std::size_t i = 2; i + 2 < grid.size(); ++i) {
      const double x = grid.x(i);
      const cplx d2 = fd::d2_5(u, i, h);
      su = std::max(su, std::abs(u[i]));
      sd = std::max(sd, std::abs(d2));
      sr = std::max(sr, std::abs(d2 - (x * x - 2.0 * eps) * u[i]));
    }
    worst = std::max(worst, sr / (su + sd));
  }
  return worst;
}

namespace detail {

/// (ln W_j)' and (ln W_j)'' for j = 0..k at x, from freshly evaluated seeds.
struct ChainLogs {
  std::vector<wide_cplx> d1, d2;
};

inline ChainLogs chain_logs(const SeedSpec& spec, double x) {
  const auto base = seed_chain_as<wide_real>(spec, x);
  std::vector<WideJet> ext;
  for (int j = 0; j < spec.k; ++j) ext.push_back(extend_jet(base[j], spec.energy(j + 1), spec.k + 1));
  ChainLogs out{std::vector<wide_cplx>(spec.k + 1), std::vector<wide_cplx>(spec.k + 1)};
  for (int j = 1; j <= spec.k; ++j) {
    const auto w = wronskian_derivatives<wide_real>(std::span<const WideJet>(ext).first(j));
    out.d1[j] = w.dW / w.W;
    out.d2[j] = w.d2W / w.W - out.d1[j] * out.d1[j];
  }
  return out;
}

inline constexpr double kCheckStep = 1e-4;

/// Random grid indices whose Richardson stencil stays inside the seed domain.
inline std::vector<std::size_t> check_points(const Grid& grid, int points, unsigned seed) {
  std::size_t lo = 0, hi = grid.size();
  while (lo < hi && std::abs(grid.x(lo)) + 2 * kCheckStep > kMaxAbsX) ++lo;
  while (hi > lo && std::abs(grid.x(hi - 1)) + 2 * kCheckStep > kMaxAbsX) --hi;
  if (lo >= hi) throw InvalidArgument("check: no admissible points");
  std::mt19937 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(lo, hi - 1);
  std::vector<std::size_t> out(points);
  for (auto& i : out) i = pick(rng);
  return out;
}

/// Richardson-extrapolated central first derivative from samples at x -+ h, x -+ 2h.
inline wide_cplx richardson_d1(const wide_cplx& m2, const wide_cplx& m1, const wide_cplx& p1,
                               const wide_cplx& p2, double step) {
  const wide_real h = step, two = 2, four = 4, three = 3;
  const wide_cplx d1h = (p1 - m1) / (two * h), d12h = (p2 - m2) / (four * h);
  return (four * d1h - d12h) / three;
}

/// alpha_j' for j = 1..k at x by Richardson differences of fresh alpha_j.
inline std::vector<wide_cplx> alpha_slopes(const SeedSpec& spec, double x) {
  const double h = kCheckStep;
  const ChainLogs m2 = chain_logs(spec, x - 2 * h), m1 = chain_logs(spec, x - h);
  const ChainLogs p1 = chain_logs(spec, x + h), p2 = chain_logs(spec, x + 2 * h);
  auto alpha = [](const ChainLogs& c, int j) { return c.d1[j] - c.d1[j - 1]; };
  std::vector<wide_cplx> out(spec.k);
  for (int j = 1; j <= spec.k; ++j)
    out[j - 1] = richardson_d1(alpha(m2, j), alpha(m1, j), alpha(p1, j), alpha(p2, j), h);
  return out;
}

}  // namespace detail

/// max_j |alpha_j' + alpha_j^2 - 2 (V_{j-1} - eps_j)| / (1 + |alpha_j|^2 + 2 |V_{j-1} - eps_j|)
/// at `points` random grid points, alpha_j from the model and alpha_j' by
/// Richardson differences of freshly evaluated seeds.
inline double riccati_residual(const PartnerModel& model, int points = 200, unsigned seed = 11) {
  const SeedSpec& spec = model.spec();
  double worst = 0.0;
  for (std::size_t i : detail::check_points(model.grid(), points, seed)) {
    const double x = model.grid().x(i);
    const auto here = detail::chain_logs(spec, x);
    const auto slopes = detail::alpha_slopes(spec, x);
    for (int j = 1; j <= spec.k; ++j) {
      const cplx a = model.alpha(i)[j - 1];
      const cplx q = 2.0 * (0.5 * x * x - to_cplx(here.d2[j - 1]) - spec.energy(j));
      const cplx r = to_cplx(slopes[j - 1]) + a * a - q;
      worst = std::max(worst, std::abs(r) / (1.0 + std::norm(a) + std::abs(q)));
    }
  }
  return worst;
}

/// |V_k - x^2/2 + sum_j alpha_j'| / (1 + |V_k|) at `points` random grid points,
/// V_k from the model and alpha_j' as in riccati_residual.
inline double telescoping_residual(const PartnerModel& model, int points = 200, unsigned seed = 13) {
  const SeedSpec& spec = model.spec();
  const auto& v = model.potential().samples;
  double worst = 0.0;
  for (std::size_t i : detail::check_points(model.grid(), points, seed)) {
    const double x = model.grid().x(i);
    cplx r = v[i] - 0.5 * x * x;
    for (const auto& s : detail::alpha_slopes(spec, x)) r += to_cplx(s);
    worst = std::max(worst, std::abs(r) / (1.0 + std::abs(v[i])));
  }
  return worst;
}

/// Analytic W_k' and W_k'' against Richardson-extrapolated central
/// differences of W_k evaluated from fresh seeds at `points` random grid
/// points; the error is relative to |W| + |W'| (resp. |W| + |W''|).
inline double wronskian_fd_discrepancy(const PartnerModel& model, int points = 200, unsigned seed = 7) {
  const SeedSpec& spec = model.spec();
  const Grid& grid = model.grid();
  const int k = spec.k;
  const std::vector<double> energies = model.chain_energies();
  auto W = [&](double x) {
    const auto chain = seed_chain_as<wide_real>(spec, x);
    std::vector<WideJet> ext;
    for (int j = 0; j < k; ++j) ext.push_back(extend_jet(chain[j], energies[j], k));
    return wronskian_value<wide_real>(ext);
  };
  const double step = detail::kCheckStep;
  double worst = 0.0;
  for (std::size_t i : detail::check_points(grid, points, seed)) {
    const double x = grid.x(i);
    const auto w = wronskian_jet<wide_real>(model.chain(i, k + 1), x);
    const wide_cplx w0 = W(x), wp1 = W(x + step), wm1 = W(x - step), wp2 = W(x + 2 * step), wm2 = W(x - 2 * step);
    const wide_real h = step, two = 2, four = 4, three = 3;
    const wide_cplx d1h = (wp1 - wm1) / (two * h), d12h = (wp2 - wm2) / (four * h);
    const wide_cplx d2h = (wp1 - two * w0 + wm1) / (h * h), d22h = (wp2 - two * w0 + wm2) / (four * h * h);
    const wide_cplx d1 = (four * d1h - d12h) / three, d2 = (four * d2h - d22h) / three;
    const double e1 = static_cast<double>(abs(d1 - w.dW) / (abs(w.W) + abs(w.dW)));
    const double e2 = static_cast<double>(abs(d2 - w.d2W) / (abs(w.W) + abs(w.d2W)));
    worst = std::max({worst, e1, e2});
  }
  return worst;
}

/// min over the grid of |W_k| / Hadamard bound.
inline double wronskian_min_relative(const PartnerModel& model) {
  double m = 1.0;
  for (std::size_t i = 0; i < model.grid().size(); ++i) {
    const auto w = wronskian_derivatives<wide_real>(model.chain(i, model.order() + 1));
    m = std::min(m, static_cast<double>(w.relative()));
  }
  return m;
}

/// Largest grid step at which extremal-state residuals are evaluated. Near
/// complex zeros of W_k that sit close to the axis V_k has spikes of width
/// ~0.1, which 7-point differences resolve to ~1e-7 only below this step.
inline constexpr double kExtremalCheckStep = 6.25e-4;

/// Hamiltonian residuals of psi_E1, psi_E2, psi_E3 at their energies, on
/// `grid` refined until its step is at most kExtremalCheckStep.
inline std::array<double, 3> extremal_residuals(const SeedSpec& spec, const Grid& grid) {
  const double span = grid.xmax - grid.xmin;
  const auto needed = static_cast<std::size_t>(std::ceil(span / kExtremalCheckStep)) + 1;
  const Grid fine(grid.xmin, grid.xmax, std::max(grid.size(), needed));
  const PartnerModel model = partner_potential(spec, fine);
  const auto states = extremal_states(model);
  const auto& lv = model.levels();
  return {hamiltonian_residual(model, states[0], lv.E1), hamiltonian_residual(model, states[1], lv.E2),
          hamiltonian_residual(model, states[2], lv.E3)};
}

/// The property suite run by the verify command, in report order.
inline std::vector<CheckResult> verification_suite(const PartnerModel& model, const PivSolution& sol, double a,
                                                   double b) {
  std::vector<CheckResult> out;
  out.push_back({"schrodinger_residual", chain_schrodinger_residual(model), 1e-7});
  out.push_back({"riccati_residual", riccati_residual(model), 1e-6});
  out.push_back({"telescoping_residual", telescoping_residual(model), 1e-6});
  out.push_back({"wronskian_fd_discrepancy", wronskian_fd_discrepancy(model), 1e-6});
  out.push_back({"piv_masked_fraction",
                 static_cast<double>(sol.masked_count()) / static_cast<double>(sol.grid.size()), kMaxMaskedFraction});
  out.push_back({"piv_residual", piv_residual(sol, a, b).value, 1e-5});
  const auto ex = extremal_residuals(model.spec(), model.grid());
  out.push_back({"extremal_residual_E1", ex[0], 1e-6});
  out.push_back({"extremal_residual_E2", ex[1], 1e-6});
  out.push_back({"extremal_residual_E3", ex[2], 1e-6});
  return out;
}

}  // namespace susypiv
