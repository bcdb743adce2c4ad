#pragma once

// k-th order SUSY partners of the oscillator built from the annihilation
// chain of one seed: potential, Riccati chain, Crum images and extremal states.

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "susypiv/error.hpp"
#include "susypiv/grid.hpp"
#include "susypiv/precision.hpp"
#include "susypiv/seeds.hpp"
#include "susypiv/series.hpp"
#include "susypiv/special.hpp"
#include "susypiv/wronskian.hpp"

namespace susypiv {

/// Energies of the three extremal states of H_k.
struct ExtremalEnergies {
  double E1 = 0.0;  // eps_k, bottom of the finite ladder
  double E2 = 0.5;  // ground level of the mapped oscillator ladder
  double E3 = 0.0;  // eps_1 + 1
};

inline ExtremalEnergies energies(const SeedSpec& s) { return {s.eps1 - (s.k - 1), 0.5, s.eps1 + 1.0}; }

/// A solution of H_0 f = energy f, given pointwise as (f, f') in the wide type.
struct H0Solution {
  std::function<WideJet(double)> jet;
  double energy = 0.0;
  std::string label;
};

inline H0Solution oscillator_solution(int n) {
  return {[n](double x) { return oscillator_state(n, x).cast<wide_real>(); }, oscillator_energy(n),
          "psi_" + std::to_string(n)};
}

/// a^+ u = (-u' + x u)/sqrt(2) for a solution u at energy eps; the result
/// solves the oscillator equation at eps + 1.
inline WideJet raise(const WideJet& u, double eps) {
  using std::sqrt;
  const wide_real x = u.x;
  const wide_cplx u2 = (x * x - 2 * wide_real(eps)) * u.value();
  const wide_real r = 1 / sqrt(wide_real(2));
  return WideJet(u.x, (-u.slope() + x * u.value()) * r, (-u2 + u.value() + x * u.slope()) * r);
}

/// a^+ u_1, a solution at eps_1 + 1.
inline H0Solution raised_seed(const SeedSpec& s) {
  return {[s](double x) { return raise(seed_value_as<wide_real>(x, s.eps1, s.lambda, s.kappa), s.eps1); },
          s.eps1 + 1.0, "a+u1"};
}

/// Immutable k-th order partner on a grid. Order 0 is the oscillator itself.
class PartnerModel {
 public:
  const SeedSpec& spec() const { return spec_; }
  int order() const { return spec_.k; }
  const ExtremalEnergies& levels() const { return levels_; }
  const Grid& grid() const { return grid_; }
  const GridFunction& potential() const { return vk_; }

  /// Chain energies eps_1..eps_k.
  std::vector<double> chain_energies() const {
    std::vector<double> e(order());
    for (int j = 1; j <= order(); ++j) e[j - 1] = spec_.energy(j);
    return e;
  }

  /// Seed chain (u_j, u_j') at grid point i.
  const std::vector<WideJet>& chain(std::size_t i) const { return chain_[i]; }

  /// Seed chain at grid point i, extended to `order` derivatives.
  std::vector<WideJet> chain(std::size_t i, int order) const {
    std::vector<WideJet> out;
    out.reserve(chain_[i].size());
    for (std::size_t j = 0; j < chain_[i].size(); ++j)
      out.push_back(extend_jet(chain_[i][j], spec_.energy(static_cast<int>(j) + 1), order));
    return out;
  }

  /// alpha_1..alpha_k at grid point i. Throws SingularWronskian when an
  /// intermediate W_j vanishes there.
  const std::vector<cplx>& alpha(std::size_t i) const {
    const auto& a = alpha_[i];
    for (std::size_t j = 0; j < a.size(); ++j)
      if (!std::isfinite(a[j].real())) throw SingularWronskian(grid_.x(i), static_cast<int>(j) + 1);
    return a;
  }

 private:
  friend PartnerModel partner_potential(const SeedSpec&, const Grid&, bool);
  friend PartnerModel oscillator_model(const Grid&);

  SeedSpec spec_;
  ExtremalEnergies levels_;
  Grid grid_;
  GridFunction vk_;
  std::vector<std::vector<WideJet>> chain_;
  std::vector<std::vector<cplx>> alpha_;
};

/// V_k = x^2/2 - (ln W(u_1..u_k))''. RealRisky seeds are refused unless
/// `allow_risky` is set. Fails at the first singular grid point, and for
/// real seeds also at a sign change of W between neighbouring samples.
inline PartnerModel partner_potential(const SeedSpec& spec, const Grid& grid, bool allow_risky = false) {
  validate(spec);
  if (!allow_risky && classify_seed(spec).kind == SeedKind::RealRisky)
    throw DegenerateSeed("partner_potential: real seed above the ground level (RealRisky)");
  PartnerModel m;
  m.spec_ = spec;
  m.levels_ = energies(spec);
  m.grid_ = grid;
  m.chain_.resize(grid.size());
  m.alpha_.resize(grid.size());
  std::vector<cplx> v(grid.size());
  wide_real prev_w = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.x(i);
    m.chain_[i] = seed_chain_as<wide_real>(spec, x);
    const auto ext = m.chain(i, spec.k + 1);
    const auto w = wronskian_jet(ext, x);
    if (spec.kappa == 0.0) {
      if (i > 0 && prev_w * w.W.real() < 0) {
        const double t = static_cast<double>(prev_w / (prev_w - w.W.real()));
        throw SingularWronskian(grid.x(i - 1) + t * grid.step(), spec.k);
      }
      prev_w = w.W.real();
    }
    v[i] = 0.5 * x * x - to_cplx(w.logd2);

    auto& alpha = m.alpha_[i];
    alpha.assign(spec.k, cplx{});
    wide_cplx prev{};
    for (int j = 1; j <= spec.k; ++j) {
      const auto wj = j == spec.k ? w : wronskian_derivatives<wide_real>(std::span<const WideJet>(ext).first(j));
      if (!(wj.relative() >= wide_real(kSingularWronskianRatio))) {
        for (int r = j; r <= spec.k; ++r) alpha[r - 1] = cplx(std::nan(""), 0.0);
        break;
      }
      const wide_cplx l = wj.dW / wj.W;
      alpha[j - 1] = to_cplx(l - prev);
      prev = l;
    }
  }
  m.vk_ = GridFunction(grid, std::move(v), "V_k");
  return m;
}

inline PartnerModel oscillator_model(const Grid& grid) {
  PartnerModel m;
  m.spec_ = SeedSpec{0.5, 0.0, 0.0, 0};
  m.levels_ = {0.5, 0.5, 1.5};
  m.grid_ = grid;
  m.chain_.assign(grid.size(), {});
  m.alpha_.assign(grid.size(), {});
  m.vk_ = sample(grid, [](double x) { return cplx(0.5 * x * x); }, "V_0");
  return m;
}

/// W_0..W_k (W_0 = 1) of the leading chain elements at x.
inline std::vector<WronskianJet> chain_wronskians(const SeedSpec& spec, double x) {
  auto base = seed_chain_as<wide_real>(spec, x);
  std::vector<WideJet> ext;
  for (int j = 0; j < spec.k; ++j) ext.push_back(extend_jet(base[j], spec.energy(j + 1), spec.k + 1));
  std::vector<WronskianJet> w(spec.k + 1);
  for (int j = 1; j <= spec.k; ++j)
    w[j] = narrow(wronskian_jet<wide_real>(std::span<const WideJet>(ext).first(j), x));
  return w;
}

/// alpha_j = (ln W_j/W_{j-1})', j = 1..k.
inline std::vector<cplx> alpha_chain(const SeedSpec& spec, double x) {
  const auto w = chain_wronskians(spec, x);
  std::vector<cplx> alpha(spec.k);
  for (int j = 1; j <= spec.k; ++j) alpha[j - 1] = w[j].logd1 - w[j - 1].logd1;
  return alpha;
}

namespace detail {

template <typename JetAt>
GridFunction crum_image(const PartnerModel& model, double energy, const std::string& label, JetAt jet_at) {
  const int k = model.order();
  const Grid& grid = model.grid();
  std::vector<cplx> out(grid.size());
  bool all_zero = true;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.x(i);
    auto jets = model.chain(i, k + 1);
    const auto den = wronskian_jet<wide_real>(jets, x);
    jets.push_back(extend_jet(jet_at(i), energy, k + 1));
    const wide_cplx num = wronskian_value(jets);
    if (abs(num) > wide_real(kSingularWronskianRatio) * hadamard_scale<wide_real>(jets, k + 1))
      all_zero = false;
    out[i] = to_cplx(num / den.W);
  }
  if (all_zero) throw AnnihilatedState("crum_map: " + label + " is annihilated by B_k^+");
  GridFunction g(grid, std::move(out), "B+" + label);
  return g.normalize_sup();
}

}  // namespace detail

/// Sup-normalized Crum image W(u_1..u_k, f)/W(u_1..u_k) on the model grid,
/// an eigenfunction of H_k at f.energy. Throws AnnihilatedState when the
/// numerator vanishes identically (f in the span of the seeds).
inline GridFunction crum_map(const PartnerModel& model, const H0Solution& f) {
  const Grid& grid = model.grid();
  return detail::crum_image(model, f.energy, f.label, [&](std::size_t i) { return f.jet(grid.x(i)); });
}

/// Taylor data of the factorization chain at one grid point: V_0..V_k and
/// alpha_1..alpha_k as series in t = x - x_i.
///
/// Only the pointwise alpha_j(x_i), computed from the wide-precision
/// Wronskians, enter; the higher coefficients follow from the Riccati
/// equations alpha_j' = 2 (V_{j-1} - eps_j) - alpha_j^2 and
/// V_j = V_{j-1} - alpha_j'. This sidesteps the cancellation that a
/// double-precision expansion of the Wronskians would suffer.
struct ChainTaylor {
  double x = 0.0;
  int degree = 0;
  std::vector<Series> V;      // V[j], degree >= `degree`
  std::vector<Series> alpha;  // alpha[j-1], degree >= `degree`

  ChainTaylor(const PartnerModel& model, std::size_t i, int degree_)
      : x(model.grid().x(i)), degree(degree_) {
    const int k = model.order();
    const auto& a0 = model.alpha(i);
    const Series xs = Series::coordinate(x, degree + k + 1);
    V.push_back(0.5 * (xs * xs));
    for (int j = 1; j <= k; ++j) {
      const int dj = degree + k - j + 1;
      const Series rhs = 2.0 * (V[j - 1] - Series::constant(model.spec().energy(j), dj));
      Series a(dj);
      a[0] = a0[j - 1];
      for (int m = 0; m < dj; ++m) {
        cplx sq{};
        for (int l = 0; l <= m; ++l) sq += a[l] * a[m - l];
        a[m + 1] = (rhs[m] - sq) / static_cast<double>(m + 1);
      }
      V.push_back(V[j - 1] - a.derivative());
      alpha.push_back(std::move(a));
    }
  }
};

/// The Taylor series of a solution of -psi''/2 + V psi = E psi from
/// (psi, psi') at the expansion point.
inline Series solution_series(const Series& V, double E, cplx value, cplx slope, int degree) {
  if (V.degree() < degree - 2) throw InvalidArgument("solution_series: potential series too short");
  Series s(degree);
  s[0] = value;
  if (degree >= 1) s[1] = slope;
  for (int m = 0; m + 2 <= degree; ++m) {
    cplx acc = -E * s[m];
    for (int l = 0; l <= m; ++l) acc += V[l] * s[m - l];
    s[m + 2] = 2.0 * acc / (static_cast<double>(m + 2) * (m + 1));
  }
  return s;
}

/// An eigenfunction of H_k given by (psi, psi') at each grid point.
struct StateField {
  double energy = 0.0;
  std::string label;
  std::function<std::array<cplx, 2>(std::size_t i)> point;

  Series taylor(const ChainTaylor& ct, std::size_t i, int degree) const {
    const auto [v, d] = point(i);
    return solution_series(ct.V.back(), energy, v, d, degree);
  }
};

namespace detail {

/// (N/D, (N/D)') from wide Wronskian jets of numerator and denominator.
inline std::array<cplx, 2> ratio_jet(const BasicWronskianJet<wide_real>& num,
                                     const BasicWronskianJet<wide_real>& den) {
  const wide_cplx r = num.W / den.W;
  return {to_cplx(r), to_cplx((num.dW - r * den.dW) / den.W)};
}

}  // namespace detail

/// B_k^+ f as a field (Crum ratio).
inline StateField crum_field(const PartnerModel& model, H0Solution f) {
  const int k = model.order();
  StateField s;
  s.energy = f.energy;
  s.label = "B+" + f.label;
  s.point = [&model, k, f = std::move(f)](std::size_t i) {
    auto jets = model.chain(i, k + 2);
    const auto den = wronskian_derivatives<wide_real>(jets);
    jets.push_back(extend_jet(f.jet(model.grid().x(i)), f.energy, k + 2));
    return detail::ratio_jet(wronskian_derivatives<wide_real>(jets), den);
  };
  return s;
}

/// W(u_1..^u_j..u_k)/W(u_1..u_k), the state of H_k at eps_j lost by B_k^-.
/// j = k gives the extremal state at E1.
inline StateField missing_state_field(const PartnerModel& model, int j) {
  const int k = model.order();
  if (j < 1 || j > k) throw InvalidArgument("missing_state_field: index out of range");
  StateField s;
  s.energy = model.spec().energy(j);
  s.label = "missing_" + std::to_string(j);
  s.point = [&model, k, j](std::size_t i) {
    const auto jets = model.chain(i, k + 1);
    std::vector<WideJet> rest;
    for (int c = 0; c < k; ++c)
      if (c != j - 1) rest.push_back(jets[c]);
    return detail::ratio_jet(wronskian_derivatives<wide_real>(rest), wronskian_derivatives<wide_real>(jets));
  };
  return s;
}

/// Values of a field on the model grid, sup-normalized.
inline GridFunction sample_field(const PartnerModel& model, const StateField& s) {
  const Grid& grid = model.grid();
  std::vector<cplx> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = s.point(i)[0];
  GridFunction g(grid, std::move(v), s.label);
  return g.normalize_sup();
}

/// psi_E1, psi_E2, psi_E3, each sup-normalized and labelled.
inline std::array<GridFunction, 3> extremal_states(const PartnerModel& model) {
  const int k = model.order();
  if (k < 1) throw InvalidArgument("extremal_states: needs a transformation of order >= 1");
  const Grid& grid = model.grid();
  std::vector<cplx> e1(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.x(i);
    const auto jets = model.chain(i, k + 1);
    const wide_cplx wk = wronskian_jet(jets, x).W;
    const wide_cplx wk1 = wronskian_value<wide_real>(std::span<const WideJet>(jets).first(k - 1));
    e1[i] = to_cplx(wk1 / wk);
  }
  GridFunction psi1(grid, std::move(e1), "psi_E1");
  psi1.normalize_sup();
  GridFunction psi2 = crum_map(model, oscillator_solution(0));
  psi2.label = "psi_E2";
  const double eps1 = model.spec().eps1;
  GridFunction psi3 = detail::crum_image(model, eps1 + 1.0, "a+u1",
                                         [&](std::size_t i) { return raise(model.chain(i)[0], eps1); });
  psi3.label = "psi_E3";
  return {std::move(psi1), std::move(psi2), std::move(psi3)};
}

inline constexpr std::size_t kResidualTrim = 3;

/// sup |-psi''/2 + V_k psi - E psi| / max(1, sup|psi|) over the interior,
/// psi'' by 7-point central differences.
inline double hamiltonian_residual(const PartnerModel& model, const GridFunction& psi, double E) {
  if (psi.grid != model.grid()) throw InvalidArgument("hamiltonian_residual: grid mismatch");
  if (psi.size() < 15) throw InvalidArgument("hamiltonian_residual: grid too coarse (n < 15)");
  const double h = psi.grid.step();
  const std::size_t lo = kResidualTrim + psi.trim;
  const auto& v = model.potential().samples;
  double worst = 0.0;
  for (std::size_t i = lo; i + lo < psi.size(); ++i) {
    const cplx r = -0.5 * fd::d2_7(psi.samples, i, h) + (v[i] - E) * psi.samples[i];
    worst = std::max(worst, std::abs(r));
  }
  return worst / std::max(1.0, psi.sup_norm());
}

/// The complex E minimizing ||H_k psi - E psi|| over the interior.
inline cplx residual_optimal_energy(const PartnerModel& model, const GridFunction& psi) {
  const double h = psi.grid.step();
  const std::size_t lo = kResidualTrim + psi.trim;
  const auto& v = model.potential().samples;
  cplx num{};
  double den = 0.0;
  for (std::size_t i = lo; i + lo < psi.size(); ++i) {
    const cplx hpsi = -0.5 * fd::d2_7(psi.samples, i, h) + v[i] * psi.samples[i];
    num += std::conj(psi.samples[i]) * hpsi;
    den += std::norm(psi.samples[i]);
  }
  return num / den;
}

struct TailReport {
  double left_rate = 0.0;   // fitted coefficient c in ln|psi| ~ c x^2 on the left tail
  double right_rate = 0.0;  // same on the right tail
  bool square_integrable = false;
};

/// Fits ln|psi| = a + c x^2 on the outer 30% of each half of the grid.
/// Gaussian decay shows up as c near -1/2, Gaussian growth as c near +1/2.
inline TailReport classify_tails(const GridFunction& psi, double fraction = 0.3) {
  const Grid& g = psi.grid;
  auto fit = [&](double from, double to) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = psi.first(); i < psi.last(); ++i) {
      const double x = g.x(i);
      if (x < std::min(from, to) || x > std::max(from, to)) continue;
      const double a = std::abs(psi.samples[i]);
      if (!(a > 0.0)) continue;
      const double X = x * x, Y = std::log(a);
      sx += X, sy += Y, sxx += X * X, sxy += X * Y, ++n;
    }
    if (n < 3) throw InvalidArgument("classify_tails: too few tail samples");
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
  };
  TailReport t;
  t.right_rate = fit(g.xmax * (1.0 - fraction), g.xmax);
  t.left_rate = fit(g.xmin, g.xmin * (1.0 - fraction));
  t.square_integrable = t.left_rate < 0.0 && t.right_rate < 0.0;
  return t;
}

}  // namespace susypiv
