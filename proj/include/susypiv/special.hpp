#pragma once

// Confluent hypergeometric function and harmonic-oscillator eigenfunctions,
// restricted to the working range |x| <= 10 (z = x^2 <= 100).

#include <cmath>
#include <limits>
#include <numbers>
#include <type_traits>

#include "susypiv/error.hpp"
#include "susypiv/jet.hpp"

namespace susypiv {

/// Neumaier's variant of Kahan summation.
template <typename T>
class CompensatedSum {
 public:
  void add(T v) {
    using std::abs;
    const T t = sum_ + v;
    if (abs(sum_) >= abs(v))
      carry_ += (sum_ - t) + v;
    else
      carry_ += (v - t) + sum_;
    sum_ = t;
  }
  T value() const { return sum_ + carry_; }

 private:
  T sum_{};
  T carry_{};
};

struct KummerParams {
  double a = 0.0;
  double b = 1.0;
  double z = 0.0;
};

inline constexpr int kKummerTermCap = 1000;
inline constexpr double kKummerStopRatio = 1e-16;

namespace detail {

inline bool is_nonpositive_integer(double b) {
  return b <= 0.0 && std::nearbyint(b) == b;
}

}  // namespace detail

template <typename T>
constexpr T kummer_stop_ratio() {
  if constexpr (std::is_same_v<T, double>)
    return T(kKummerStopRatio);
  else
    return std::numeric_limits<T>::epsilon();
}

/// Taylor sum of M(a, b; z) in the arithmetic of T. Terminates when the last
/// three terms are each below the stop ratio of the running sum (1e-16 in
/// double, the unit roundoff otherwise).
template <typename T>
T kummer_series(T a, T b, T z) {
  using std::abs;
  CompensatedSum<T> sum;
  T term = 1;
  sum.add(term);
  int small_run = 0;
  const T stop = kummer_stop_ratio<T>();
  for (int n = 0; n < kKummerTermCap; ++n) {
    term *= (a + n) / (b + n) * z / (n + 1);
    sum.add(term);
    if (abs(term) <= stop * abs(sum.value())) {
      if (++small_run == 3) return sum.value();
    } else {
      small_run = 0;
    }
  }
  throw NonConvergence("kummer_m: series did not converge within the term cap");
}

inline void check_kummer_args(const KummerParams& p) {
  if (detail::is_nonpositive_integer(p.b))
    throw InvalidArgument("kummer_m: b must not be a non-positive integer");
  if (!std::isfinite(p.a) || !std::isfinite(p.b) || !std::isfinite(p.z) || p.z < 0.0)
    throw InvalidArgument("kummer_m: z must be finite and non-negative");
}

/// Kummer's function M(a, b; z) = 1F1(a; b; z) for real parameters and
/// 0 <= z <= 100, by compensated Taylor summation.
inline double kummer_m(const KummerParams& p) {
  check_kummer_args(p);
  return kummer_series<double>(p.a, p.b, p.z);
}

inline double kummer_m(double a, double b, double z) { return kummer_m({a, b, z}); }

/// dM/dz = (a/b) M(a+1, b+1; z).
inline double kummer_dm(double a, double b, double z) {
  if (a == 0.0) return 0.0;
  return a / b * kummer_m(a + 1.0, b + 1.0, z);
}

inline constexpr int kMaxOscillatorLevel = 60;

/// Normalized oscillator eigenfunction psi_n and its derivative at x.
///
/// Uses the normalized three-term recurrence
///   psi_{m+1} = sqrt(2/(m+1)) x psi_m - sqrt(m/(m+1)) psi_{m-1},
/// which carries the Hermite normalization as a running factor, and
/// psi_n' = sqrt(2n) psi_{n-1} - x psi_n.
inline ComplexJet oscillator_state(int n, double x) {
  if (n < 0 || n > kMaxOscillatorLevel)
    throw InvalidArgument("oscillator_state: level must lie in [0, 60]");
  const double psi0 = std::exp(-0.5 * x * x) / std::sqrt(std::sqrt(std::numbers::pi));
  double prev = 0.0;
  double cur = psi0;
  for (int m = 0; m < n; ++m) {
    const double next = std::sqrt(2.0 / (m + 1)) * x * cur - std::sqrt(double(m) / (m + 1)) * prev;
    prev = cur;
    cur = next;
  }
  const double slope = std::sqrt(2.0 * n) * prev - x * cur;
  return ComplexJet(x, cur, slope);
}

/// Energy of the n-th oscillator level.
inline constexpr double oscillator_energy(int n) { return n + 0.5; }

}  // namespace susypiv
