#pragma once

// Truncated Taylor series f(x0 + t) = sum_{m<=D} c_m t^m with complex
// coefficients. Differential operators with variable coefficients act on
// these exactly (each derivative drops one order), which lets ladder
// operators of order 2k+1 be applied without finite-difference noise.

#include <algorithm>
#include <span>
#include <vector>

#include "susypiv/error.hpp"
#include "susypiv/jet.hpp"

namespace susypiv {

class Series {
 public:
  Series() : c_(1, cplx{}) {}
  explicit Series(int degree) : c_(static_cast<std::size_t>(std::max(degree, 0)) + 1, cplx{}) {}

  static Series constant(cplx v, int degree) {
    Series s(degree);
    s.c_[0] = v;
    return s;
  }

  /// The coordinate x = x0 + t.
  static Series coordinate(double x0, int degree) {
    Series s(degree);
    s.c_[0] = x0;
    if (degree >= 1) s.c_[1] = 1.0;
    return s;
  }

  /// Series of f^{(offset)} from the derivative list d (d[n] = f^{(n)}(x0)).
  static Series from_derivatives(std::span<const cplx> d, int offset, int degree) {
    if (static_cast<int>(d.size()) < offset + degree + 1)
      throw InvalidArgument("series: derivative table too short");
    Series s(degree);
    double fact = 1.0;
    for (int m = 0; m <= degree; ++m) {
      if (m > 0) fact *= m;
      s.c_[m] = d[offset + m] / fact;
    }
    return s;
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  cplx value() const { return c_[0]; }
  const cplx& operator[](int m) const { return c_[m]; }
  cplx& operator[](int m) { return c_[m]; }

  Series truncated(int degree) const {
    Series s(std::min(degree, this->degree()));
    std::copy_n(c_.begin(), s.c_.size(), s.c_.begin());
    return s;
  }

  /// d/dt, losing the top order.
  Series derivative() const {
    if (degree() == 0) throw InvalidArgument("series: derivative of a degree-0 series is unknown");
    Series s(degree() - 1);
    for (int m = 1; m <= degree(); ++m) s.c_[m - 1] = c_[m] * static_cast<double>(m);
    return s;
  }

  Series& operator*=(cplx v) {
    for (auto& c : c_) c *= v;
    return *this;
  }

  friend Series operator+(const Series& a, const Series& b) {
    Series s(std::min(a.degree(), b.degree()));
    for (int m = 0; m <= s.degree(); ++m) s.c_[m] = a.c_[m] + b.c_[m];
    return s;
  }
  friend Series operator-(const Series& a, const Series& b) {
    Series s(std::min(a.degree(), b.degree()));
    for (int m = 0; m <= s.degree(); ++m) s.c_[m] = a.c_[m] - b.c_[m];
    return s;
  }
  friend Series operator*(const Series& a, const Series& b) {
    Series s(std::min(a.degree(), b.degree()));
    for (int m = 0; m <= s.degree(); ++m) {
      cplx acc{};
      for (int i = 0; i <= m; ++i) acc += a.c_[i] * b.c_[m - i];
      s.c_[m] = acc;
    }
    return s;
  }
  friend Series operator*(cplx v, Series a) { return a *= v; }
  friend Series operator*(Series a, cplx v) { return a *= v; }

  /// Requires b.value() != 0.
  friend Series operator/(const Series& a, const Series& b) {
    if (b.c_[0] == cplx{}) throw InvalidArgument("series: division by a series vanishing at t=0");
    Series q(std::min(a.degree(), b.degree()));
    for (int m = 0; m <= q.degree(); ++m) {
      cplx acc = a.c_[m];
      for (int i = 0; i < m; ++i) acc -= q.c_[i] * b.c_[m - i];
      q.c_[m] = acc / b.c_[0];
    }
    return q;
  }

  /// (ln f)' = f'/f.
  Series log_derivative() const { return derivative() / truncated(degree() - 1); }

 private:
  std::vector<cplx> c_;
};

}  // namespace susypiv
