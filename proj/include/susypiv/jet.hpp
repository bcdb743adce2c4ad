#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <vector>

namespace susypiv {

using cplx = std::complex<double>;

/// A complex value and its first `order()` derivatives at the point `x`.
template <typename Real>
struct BasicJet {
  using value_type = std::complex<Real>;

  double x = 0.0;
  std::vector<value_type> d;  // d[n] = n-th derivative

  BasicJet() = default;
  BasicJet(double x_, std::vector<value_type> derivs) : x(x_), d(std::move(derivs)) {}
  BasicJet(double x_, value_type value, value_type slope) : x(x_), d{value, slope} {}

  int order() const noexcept { return static_cast<int>(d.size()) - 1; }
  const value_type& value() const { return d.at(0); }
  const value_type& slope() const { return d.at(1); }
  const value_type& operator[](std::size_t n) const { return d[n]; }
  value_type& operator[](std::size_t n) { return d[n]; }

  /// Largest modulus among the stored derivatives.
  Real scale() const {
    Real s = 0;
    for (const auto& v : d) s = std::max<Real>(s, std::abs(v));
    return s;
  }

  template <typename Other>
  BasicJet<Other> cast() const {
    BasicJet<Other> out;
    out.x = x;
    out.d.reserve(d.size());
    for (const auto& v : d)
      out.d.emplace_back(static_cast<Other>(v.real()), static_cast<Other>(v.imag()));
    return out;
  }
};

using ComplexJet = BasicJet<double>;

}  // namespace susypiv
