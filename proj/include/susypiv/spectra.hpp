#pragma once

// Spectral structure of H_k probed with the ladder operators
// L^+- = B_k^+ a^+- B_k^-, of order 2k+1.
//
// On eigenstates these agree with the third-order operators l^+- up to a
// polynomial in H: L^- = l^- p(H) and L^+ = p(H) l^+ with
// p(E) = prod_{j<k} (E - eps_j). Where p vanishes the realized operator
// annihilates a state that l^+- would move; such actions are reported as
// reduced and kept out of the annihilation lists.

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "susypiv/error.hpp"
#include "susypiv/grid.hpp"
#include "susypiv/series.hpp"
#include "susypiv/special.hpp"
#include "susypiv/susy.hpp"

namespace susypiv {

enum class Direction { Up, Down };

inline const char* to_string(Direction d) { return d == Direction::Up ? "up" : "down"; }

inline Direction reverse(Direction d) { return d == Direction::Up ? Direction::Down : Direction::Up; }

inline constexpr double kAnnihilationRatio = 1e-8;
inline constexpr double kProportionalityTolerance = 1e-4;
inline constexpr double kFactorizationTolerance = 1e-3;
inline constexpr int kMaxLadderDepth = 20;

/// Order of L^+- for a model of order k.
inline int ladder_order(const PartnerModel& model) { return 2 * model.order() + 1; }

namespace detail {

/// (-+ d/dx + w) f / sqrt(2) on series; Up takes the minus sign.
inline Series first_order(const Series& f, const Series& w, Direction d) {
  const Series df = f.derivative();
  const Series wf = w * f;
  Series out = d == Direction::Up ? wf - df : wf + df;
  out *= 1.0 / std::numbers::sqrt2;
  return out;
}

inline GridFunction first_order(const GridFunction& f, std::span<const cplx> w, Direction d) {
  GridFunction df = fd::derivative(f);
  const double s = d == Direction::Up ? -1.0 : 1.0;
  for (std::size_t i = df.first(); i < df.last(); ++i)
    df.samples[i] = (s * df.samples[i] + w[i] * f.samples[i]) / std::numbers::sqrt2;
  return df;
}

inline bool near_zero(double v) { return std::abs(v) <= 1e-12; }

}  // namespace detail

/// L^+- applied to the Taylor series of a state of H_k at one point; the
/// result has degree psi.degree() - (2k+1).
inline Series ladder_series(const ChainTaylor& ct, Series psi, Direction dir) {
  const int k = static_cast<int>(ct.alpha.size());
  for (int j = k; j >= 1; --j) psi = detail::first_order(psi, ct.alpha[j - 1], Direction::Down);
  psi = detail::first_order(psi, Series::coordinate(ct.x, psi.degree()), dir);
  for (int j = 1; j <= k; ++j) psi = detail::first_order(psi, ct.alpha[j - 1], Direction::Up);
  return psi;
}

/// L^+- psi on the model grid, with every derivative taken exactly on the
/// local Taylor expansion of psi.
inline GridFunction ladder_apply(const PartnerModel& model, const StateField& psi, Direction dir) {
  const Grid& grid = model.grid();
  const int m = ladder_order(model);
  std::vector<cplx> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const ChainTaylor ct(model, i, m);
    out[i] = ladder_series(ct, psi.taylor(ct, i, m), dir).value();
  }
  return GridFunction(grid, std::move(out), std::string(dir == Direction::Up ? "L+" : "L-") + psi.label);
}

/// L^+- psi with 5-point finite differences for every derivative. Each of
/// the 2k+1 differentiations trims two more points per side.
inline GridFunction ladder_apply(const PartnerModel& model, const GridFunction& psi, Direction dir) {
  if (psi.grid != model.grid()) throw InvalidArgument("ladder_apply: grid mismatch");
  const Grid& grid = model.grid();
  const int k = model.order();
  if (grid.size() < psi.trim + 8 * static_cast<std::size_t>(k + 1) + 1)
    throw InvalidArgument("ladder_apply: grid too coarse");
  std::vector<std::vector<cplx>> alpha(k, std::vector<cplx>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& a = model.alpha(i);
    for (int j = 0; j < k; ++j) alpha[j][i] = a[j];
  }
  std::vector<cplx> xs(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) xs[i] = grid.x(i);

  GridFunction f = psi;
  for (int j = k; j >= 1; --j) f = detail::first_order(f, alpha[j - 1], Direction::Down);
  f = detail::first_order(f, xs, dir);
  for (int j = 1; j <= k; ++j) f = detail::first_order(f, alpha[j - 1], Direction::Up);
  f.label = std::string(dir == Direction::Up ? "L+" : "L-") + psi.label;
  return f;
}

/// p(E) = prod_{j<k} (E - eps_j), the factor separating L^+- from l^+-.
inline double reduction_factor(const PartnerModel& model, double E) {
  double p = 1.0;
  for (int j = 1; j < model.order(); ++j) p *= E - model.spec().energy(j);
  return p;
}

/// True when L^+- annihilates a state at E only through p(H).
inline bool reduced_action(const PartnerModel& model, double E, Direction dir) {
  return detail::near_zero(reduction_factor(model, dir == Direction::Up ? E + 1.0 : E));
}

/// Roots of Q(E) = (E - 1/2) prod_j (E - eps_j)(E - eps_j - 1), the number
/// operator L^+ L^- of the realized ladder; equal to
/// p(E)^2 (E - E1)(E - E2)(E - E3).
inline std::vector<double> q_roots(const PartnerModel& model) {
  std::vector<double> r{0.5};
  for (int j = 1; j <= model.order(); ++j) {
    r.push_back(model.spec().energy(j));
    r.push_back(model.spec().energy(j) + 1.0);
  }
  std::sort(r.begin(), r.end());
  return r;
}

inline double q_polynomial(const PartnerModel& model, double E) {
  double q = 1.0;
  for (double r : q_roots(model)) q *= E - r;
  return q;
}

enum class Verdict { Annihilated, Proportional, Unresolved };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Annihilated: return "Annihilated";
    case Verdict::Proportional: return "Proportional";
    case Verdict::Unresolved: return "Unresolved";
  }
  return "?";
}

struct LadderActionResult {
  double source_energy = 0.0;
  Direction direction = Direction::Down;
  Verdict verdict = Verdict::Unresolved;
  std::optional<double> target_energy;  // set for Proportional
  double fit_residual = 0.0;            // Proportional / Unresolved
  cplx constant{};                      // fitted constant, Proportional only
  double output_ratio = 0.0;            // sup |L psi| / sup |psi|
  bool reduced = false;                 // annihilation forced by p(H)
};

/// Classifies one action from its output. `target` is the state one rung
/// away in the action's direction, or null when there is none.
inline LadderActionResult classify_action(const GridFunction& out, const GridFunction& psi, double energy,
                                          Direction dir, const GridFunction* target) {
  LadderActionResult r;
  r.source_energy = energy;
  r.direction = dir;
  r.output_ratio = out.sup_norm() / psi.sup_norm();
  if (r.output_ratio <= kAnnihilationRatio) {
    r.verdict = Verdict::Annihilated;
    return r;
  }
  if (!target) {
    r.fit_residual = 1.0;
    return r;
  }
  const ProportionalityFit fit = fit_proportional(out, *target);
  r.fit_residual = fit.relative_residual;
  if (fit.relative_residual <= kProportionalityTolerance) {
    r.verdict = Verdict::Proportional;
    r.target_energy = energy + (dir == Direction::Up ? 1.0 : -1.0);
    r.constant = fit.constant;
  }
  return r;
}

struct OneWayLink {
  double from = 0.0;
  double to = 0.0;
  Direction direction = Direction::Down;
  double fit_residual = 0.0;
};

struct SpectrumReport {
  std::vector<double> finite_ladder;
  std::vector<double> infinite_ladder;
  std::vector<double> annihilated_down;
  std::vector<double> annihilated_up;
  std::vector<OneWayLink> one_way_links;
  std::vector<LadderActionResult> actions;
  std::vector<double> q_roots;
  bool degenerate = false;
  std::optional<int> degenerate_level;
  bool verified = false;
  std::optional<double> offending_energy;
  std::string note;
};

namespace detail {

inline bool same_energies(std::vector<double> a, std::vector<double> b) {
  if (a.size() != b.size()) return false;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > 1e-9) return false;
  return true;
}

inline bool same_links(const std::vector<OneWayLink>& a, const std::vector<OneWayLink>& b) {
  if (a.size() != b.size()) return false;
  for (const auto& l : a) {
    const bool found = std::any_of(b.begin(), b.end(), [&](const OneWayLink& m) {
      return m.direction == l.direction && std::abs(m.from - l.from) <= 1e-9 && std::abs(m.to - l.to) <= 1e-9;
    });
    if (!found) return false;
  }
  return true;
}

struct Rung {
  StateField field;
  GridFunction samples;  // sup-normalized
  double raw_sup = 1.0;
  bool listed = true;  // false for the helper state above the top rung
};

/// Evaluates a field once on the grid; the returned field reads the table.
inline Rung tabulate(const PartnerModel& model, const StateField& f, bool listed) {
  auto table = std::make_shared<std::vector<std::array<cplx, 2>>>(model.grid().size());
  std::vector<cplx> v(table->size());
  for (std::size_t i = 0; i < table->size(); ++i) {
    (*table)[i] = f.point(i);
    v[i] = (*table)[i][0];
  }
  GridFunction g(model.grid(), std::move(v), f.label);
  const double sup = g.sup_norm();
  g.normalize_sup();
  StateField t{f.energy, f.label, [table](std::size_t i) { return (*table)[i]; }};
  return {std::move(t), std::move(g), sup, listed};
}

}  // namespace detail

/// Ladder structure of H_k with the first N levels of the infinite ladder.
///
/// Every listed state is hit with L^- and L^+; the outputs are classified
/// and the observed annihilations and one-way links are compared with the
/// structure expected for the seed (degenerate seeds with eps_1 = E_j,
/// j > k, are isospectral to H_0). Any Unresolved action or mismatch leaves
/// the report unverified with the offending energy recorded.
inline SpectrumReport spectrum_report(const PartnerModel& model, int N) {
  if (N < 1 || N > kMaxLadderDepth) throw InvalidArgument("spectrum_report: N must lie in [1, 20]");
  const int k = model.order();
  SpectrumReport rep;
  rep.q_roots = q_roots(model);

  int j_deg = -1;
  if (k >= 1) {
    const SeedClassification c = classify_seed(model.spec());
    if (c.kind == SeedKind::EigenvalueDegenerate) {
      if (*c.j_index <= k)
        throw DegenerateSeed("spectrum_report: eps_1 = E_j with j <= k is outside the analysed cases");
      j_deg = *c.j_index;
      rep.degenerate = true;
      rep.degenerate_level = j_deg;
    }
  }
  const int levels = rep.degenerate ? std::max(N, j_deg + 3) : N;

  std::vector<detail::Rung> finite, infinite;
  if (!rep.degenerate) {
    for (int j = k; j >= 1; --j) {
      finite.push_back(detail::tabulate(model, missing_state_field(model, j), true));
      rep.finite_ladder.push_back(model.spec().energy(j));
    }
  }
  for (int l = 0; l <= levels; ++l) {
    infinite.push_back(detail::tabulate(model, crum_field(model, oscillator_solution(l)), l < levels));
    if (l < levels) rep.infinite_ladder.push_back(oscillator_energy(l));
  }

  auto evaluate = [&](std::vector<detail::Rung>& ladder) {
    for (std::size_t r = 0; r < ladder.size(); ++r) {
      if (!ladder[r].listed) continue;
      for (Direction d : {Direction::Down, Direction::Up}) {
        const std::size_t t = d == Direction::Up ? r + 1 : r - 1;
        const GridFunction* target = (d == Direction::Down && r == 0) || t >= ladder.size() ? nullptr
                                                                                              : &ladder[t].samples;
        GridFunction out = ladder_apply(model, ladder[r].field, d);
        for (auto& v : out.samples) v /= ladder[r].raw_sup;
        LadderActionResult res = classify_action(out, ladder[r].samples, ladder[r].field.energy, d, target);
        res.reduced = reduced_action(model, ladder[r].field.energy, d);
        rep.actions.push_back(res);
      }
    }
  };
  evaluate(finite);
  evaluate(infinite);

  auto find = [&](double E, Direction d) -> const LadderActionResult* {
    for (const auto& a : rep.actions)
      if (a.direction == d && std::abs(a.source_energy - E) <= 1e-9) return &a;
    return nullptr;
  };
  for (const auto& a : rep.actions) {
    if (a.verdict == Verdict::Unresolved && !rep.offending_energy) {
      rep.offending_energy = a.source_energy;
      rep.note = std::string("unresolved ") + to_string(a.direction) + " action";
    }
    if (a.reduced && a.verdict != Verdict::Annihilated && !rep.offending_energy) {
      rep.offending_energy = a.source_energy;
      rep.note = "reduced action not annihilated";
    }
    if (a.verdict == Verdict::Annihilated && !a.reduced)
      (a.direction == Direction::Down ? rep.annihilated_down : rep.annihilated_up).push_back(a.source_energy);
    if (a.verdict == Verdict::Proportional) {
      const LadderActionResult* back = find(*a.target_energy, reverse(a.direction));
      if (back && back->verdict == Verdict::Annihilated && !back->reduced)
        rep.one_way_links.push_back({a.source_energy, *a.target_energy, a.direction, a.fit_residual});
    }
  }

  std::vector<double> want_down{0.5}, want_up;
  std::vector<OneWayLink> want_links;
  if (rep.degenerate) {
    const double Ej = oscillator_energy(j_deg);
    want_down.push_back(oscillator_energy(j_deg - k + 1));
    want_up.push_back(Ej);
    want_links.push_back({Ej + 1.0, Ej, Direction::Down, 0.0});
    want_links.push_back({oscillator_energy(j_deg - k), oscillator_energy(j_deg - k + 1), Direction::Up, 0.0});
  } else if (k >= 1) {
    want_down.push_back(model.spec().energy(k));
    want_up.push_back(model.spec().energy(1));
  }
  if (!rep.offending_energy) {
    if (!detail::same_energies(rep.annihilated_down, want_down)) {
      rep.offending_energy = rep.annihilated_down.empty() ? want_down.front() : rep.annihilated_down.back();
      rep.note = "down-annihilations differ from the expected structure";
    } else if (!detail::same_energies(rep.annihilated_up, want_up)) {
      rep.offending_energy = rep.annihilated_up.empty() ? 0.5 : rep.annihilated_up.back();
      rep.note = "up-annihilations differ from the expected structure";
    } else if (!detail::same_links(rep.one_way_links, want_links)) {
      rep.offending_energy = rep.one_way_links.empty() ? want_links.front().from : rep.one_way_links.back().from;
      rep.note = "one-way links differ from the expected structure";
    }
  }
  rep.verified = !rep.offending_energy.has_value();
  return rep;
}

struct FactorizationCheck {
  double deviation = 0.0;  // |c_fit - Q(E)| / max(1, |Q(E)|)
  cplx fitted{};
  double q = 0.0;
  double fit_residual = 0.0;
  bool vacuous = false;  // L^- psi = 0: nothing to compare
};

namespace detail {

inline FactorizationCheck finish_factorization(const PartnerModel& model, const GridFunction& lm,
                                               const GridFunction& lplm, const GridFunction& psi, double E) {
  FactorizationCheck c;
  c.q = q_polynomial(model, E);
  if (lm.sup_norm() <= kAnnihilationRatio * psi.sup_norm()) {
    c.vacuous = true;
    return c;
  }
  const ProportionalityFit fit = fit_proportional(lplm, psi);
  c.fitted = fit.constant;
  c.fit_residual = fit.relative_residual;
  c.deviation = std::abs(fit.constant - c.q) / std::max(1.0, std::abs(c.q));
  return c;
}

}  // namespace detail

/// L^+ L^- psi = Q(E) psi, with both operators applied on Taylor series.
inline FactorizationCheck pha_factorization_check(const PartnerModel& model, const StateField& psi) {
  const Grid& grid = model.grid();
  const int m = ladder_order(model);
  std::vector<cplx> lm(grid.size()), lplm(grid.size()), v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const ChainTaylor ct(model, i, 2 * m);
    const Series s = psi.taylor(ct, i, 2 * m);
    const Series down = ladder_series(ct, s, Direction::Down);
    lm[i] = down.value();
    lplm[i] = ladder_series(ct, down, Direction::Up).value();
    v[i] = s.value();
  }
  return detail::finish_factorization(model, GridFunction(grid, std::move(lm)), GridFunction(grid, std::move(lplm)),
                                      GridFunction(grid, std::move(v)), psi.energy);
}

/// Same check with finite-difference ladder operators on sampled psi.
inline FactorizationCheck pha_factorization_check(const PartnerModel& model, const GridFunction& psi, double E) {
  const GridFunction lm = ladder_apply(model, psi, Direction::Down);
  const GridFunction lplm = ladder_apply(model, lm, Direction::Up);
  return detail::finish_factorization(model, lm, lplm, psi, E);
}

}  // namespace susypiv
