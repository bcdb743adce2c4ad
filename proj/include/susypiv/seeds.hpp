#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "susypiv/error.hpp"
#include "susypiv/jet.hpp"
#include "susypiv/special.hpp"

namespace susypiv {

/// Parameters of a k-th order transformation driven by the annihilation chain
/// of one complex seed u(x; eps1) = e^{-x^2/2}[M1 + x (lambda + i kappa) M2].
struct SeedSpec {
  double eps1 = 0.0;
  double lambda = 0.0;
  double kappa = 0.0;
  int k = 1;

  /// Factorization energy of the j-th chain element (1-based).
  double energy(int j) const { return eps1 - (j - 1); }
  cplx mixing() const { return {lambda, kappa}; }
};

inline void validate(const SeedSpec& s) {
  if (s.k < 1) throw InvalidArgument("seed spec: order k must be >= 1");
  if (!std::isfinite(s.eps1) || !std::isfinite(s.lambda) || !std::isfinite(s.kappa))
    throw InvalidArgument("seed spec: parameters must be finite");
}

enum class SeedKind { RealNodeless, RealRisky, Complex, EigenvalueDegenerate };

inline const char* to_string(SeedKind k) {
  switch (k) {
    case SeedKind::RealNodeless: return "RealNodeless";
    case SeedKind::RealRisky: return "RealRisky";
    case SeedKind::Complex: return "Complex";
    case SeedKind::EigenvalueDegenerate: return "EigenvalueDegenerate";
  }
  return "?";
}

struct SeedClassification {
  SeedKind kind = SeedKind::Complex;
  std::optional<int> j_index;  // eps1 = j + 1/2 when degenerate
  bool j_exceeds_k = false;
};

inline constexpr double kEigenvalueTolerance = 1e-12;

/// Degeneracy with an oscillator level takes precedence over the real/complex split.
inline SeedClassification classify_seed(const SeedSpec& s) {
  const double j = std::nearbyint(s.eps1 - 0.5);
  if (j >= 0.0 && std::abs(s.eps1 - (j + 0.5)) <= kEigenvalueTolerance) {
    const int ji = static_cast<int>(j);
    return {SeedKind::EigenvalueDegenerate, ji, ji > s.k};
  }
  if (s.kappa == 0.0)
    return {s.eps1 < 0.5 ? SeedKind::RealNodeless : SeedKind::RealRisky, std::nullopt, false};
  return {SeedKind::Complex, std::nullopt, false};
}

inline constexpr double kMaxAbsX = 10.0;

/// u(x; eps) and u'(x; eps) from the two Kummer branches, in the arithmetic of Real.
template <typename Real>
BasicJet<Real> seed_value_as(double x, double eps, double lambda, double kappa) {
  using std::exp;
  using C = std::complex<Real>;
  if (!(std::abs(x) <= kMaxAbsX)) throw InvalidArgument("seed_value: |x| must not exceed 10");
  if (!std::isfinite(eps) || !std::isfinite(lambda) || !std::isfinite(kappa))
    throw InvalidArgument("seed_value: parameters must be finite");
  const Real xr = x;
  const Real z = xr * xr;
  const Real a1 = (Real(1) - 2 * Real(eps)) / 4;
  const Real a2 = (Real(3) - 2 * Real(eps)) / 4;
  const Real half = Real(1) / 2, three_half = Real(3) / 2;
  const Real m1 = kummer_series<Real>(a1, half, z);
  const Real m2 = kummer_series<Real>(a2, three_half, z);
  const Real dm1 = a1 == 0 ? Real(0) : a1 / half * kummer_series<Real>(a1 + 1, half + 1, z);
  const Real dm2 = a2 == 0 ? Real(0) : a2 / three_half * kummer_series<Real>(a2 + 1, three_half + 1, z);
  const Real gauss = exp(-z / 2);
  const C c(lambda, kappa);

  const C bracket = m1 + xr * c * m2;
  // d/dx [M1(x^2) + x c M2(x^2)] = 2x M1' + c (M2 + 2x^2 M2')
  const C dbracket = 2 * xr * dm1 + c * (m2 + 2 * z * dm2);
  return BasicJet<Real>(x, gauss * bracket, gauss * (dbracket - xr * bracket));
}

inline ComplexJet seed_value(double x, double eps, double lambda, double kappa) {
  return seed_value_as<double>(x, eps, lambda, kappa);
}

inline constexpr double kChainDegeneracyRatio = 1e-12;

/// The annihilation chain u_{j+1} = a^- u_j at one point, each as (u, u').
///
/// A chain element whose value and slope both vanish relative to its
/// predecessor is identically zero (a solution of a second-order ODE cannot
/// have u = u' = 0 at a point otherwise), so the check is made pointwise.
template <typename Real>
std::vector<BasicJet<Real>> seed_chain_as(const SeedSpec& spec, double x) {
  using std::sqrt;
  using C = std::complex<Real>;
  validate(spec);
  std::vector<BasicJet<Real>> chain;
  chain.reserve(spec.k);
  chain.push_back(seed_value_as<Real>(x, spec.eps1, spec.lambda, spec.kappa));
  const Real inv_sqrt2 = 1 / sqrt(Real(2));
  const Real xr = x;
  for (int j = 1; j < spec.k; ++j) {
    const BasicJet<Real>& u = chain.back();
    const Real eps = spec.energy(j);
    const C u2 = (xr * xr - 2 * eps) * u.value();
    BasicJet<Real> next(x, (u.slope() + xr * u.value()) * inv_sqrt2,
                        (u2 + u.value() + xr * u.slope()) * inv_sqrt2);
    if (next.scale() <= Real(kChainDegeneracyRatio) * u.scale())
      throw DegenerateSeed("seed_chain: chain element " + std::to_string(j + 1) +
                           " vanishes identically (seed annihilated by a^-)");
    chain.push_back(std::move(next));
  }
  return chain;
}

inline std::vector<ComplexJet> seed_chain(const SeedSpec& spec, double x) {
  return seed_chain_as<double>(spec, x);
}

}  // namespace susypiv
