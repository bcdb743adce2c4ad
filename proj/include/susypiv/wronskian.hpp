#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "susypiv/error.hpp"
#include "susypiv/jet.hpp"
#include "susypiv/precision.hpp"

namespace susypiv {

/// Extends (u, u', ...) of a solution of -u''/2 + x^2 u/2 = eps u to
/// `target_order` derivatives with the differentiated equation
///   u^{(n+2)} = (x^2 - 2 eps) u^{(n)} + 2 n x u^{(n-1)} + n (n-1) u^{(n-2)}.
template <typename Real>
BasicJet<Real> extend_jet(const BasicJet<Real>& jet, double eps, int target_order) {
  using C = std::complex<Real>;
  if (jet.order() < 1) throw InvalidArgument("extend_jet: need value and slope");
  BasicJet<Real> out = jet;
  if (target_order <= out.order()) return out;
  const Real x = jet.x;
  const Real q = x * x - 2 * Real(eps);
  out.d.resize(static_cast<std::size_t>(target_order) + 1);
  for (int n = jet.order() - 1; n + 2 <= target_order; ++n) {
    C v = q * out.d[n];
    if (n >= 1) v += Real(2 * n) * x * out.d[n - 1];
    if (n >= 2) v += Real(n) * Real(n - 1) * out.d[n - 2];
    out.d[n + 2] = v;
  }
  return out;
}

template <typename Real>
using BasicMatrix = std::vector<std::vector<std::complex<Real>>>;
using ComplexMatrix = BasicMatrix<double>;

/// Determinant by Gaussian elimination with partial pivoting.
template <typename Real>
std::complex<Real> determinant(BasicMatrix<Real> m) {
  using C = std::complex<Real>;
  using std::abs;
  const std::size_t n = m.size();
  C det = Real(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (abs(m[r][col]) > abs(m[piv][col])) piv = r;
    if (m[piv][col] == C{}) return C{};
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const C f = m[r][col] / m[col][col];
      for (std::size_t c = col + 1; c < n; ++c) m[r][c] -= f * m[col][c];
    }
  }
  return det;
}

/// Hadamard bound: product of the column norms, i.e. of the jet norms of the
/// functions. Singularity thresholds are measured against it so that the
/// e^{+-x^2/2} spread between columns does not masquerade as cancellation.
template <typename Real>
Real hadamard_scale(std::span<const BasicJet<Real>> jets, int rows) {
  using std::sqrt;
  Real s = 1;
  for (const auto& j : jets) {
    Real col = 0;
    for (int i = 0; i < rows; ++i) col += std::norm(j.d[i]);
    s *= sqrt(col);
  }
  return s;
}

template <typename Real>
struct BasicWronskianJet {
  using C = std::complex<Real>;
  C W{Real(1)};
  C dW{};
  C d2W{};
  C logd1{};  // (ln W)'
  C logd2{};  // (ln W)''
  Real scale = 1;

  /// |W| relative to the Hadamard bound.
  Real relative() const {
    using std::abs;
    return abs(W) / scale;
  }
};

using WronskianJet = BasicWronskianJet<double>;

/// Rounds the log-derivatives to double. W itself may lie outside the double
/// range relative to scale only in pathological cases, so it is kept as is.
template <typename Real>
WronskianJet narrow(const BasicWronskianJet<Real>& w) {
  WronskianJet out;
  out.W = to_cplx(w.W);
  out.dW = to_cplx(w.dW);
  out.d2W = to_cplx(w.d2W);
  out.logd1 = to_cplx(w.logd1);
  out.logd2 = to_cplx(w.logd2);
  out.scale = static_cast<double>(w.scale);
  return out;
}

inline constexpr double kSingularWronskianRatio = 1e-13;

namespace detail {

template <typename Real>
BasicMatrix<Real> wronskian_rows(std::span<const BasicJet<Real>> jets, std::span<const int> rows) {
  BasicMatrix<Real> m(rows.size(), std::vector<std::complex<Real>>(jets.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < jets.size(); ++j) m[i][j] = jets[j].d[rows[i]];
  return m;
}

}  // namespace detail

/// Plain W(f_1..f_m); jets need m-1 derivatives. No singularity check.
template <typename Real>
std::complex<Real> wronskian_value(std::span<const BasicJet<Real>> jets) {
  const std::size_t m = jets.size();
  BasicMatrix<Real> mat(m, std::vector<std::complex<Real>>(m));
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < m; ++c) mat[r][c] = jets[c].d[r];
  return determinant<Real>(std::move(mat));
}

template <typename Real>
std::complex<Real> wronskian_value(const std::vector<BasicJet<Real>>& jets) {
  return wronskian_value<Real>(std::span<const BasicJet<Real>>(jets));
}

/// W(u_1..u_k), W' and W'' by row replacement, plus the Hadamard scale,
/// without any singularity check. Jets must carry at least k+1 derivatives.
template <typename Real>
BasicWronskianJet<Real> wronskian_derivatives(std::span<const BasicJet<Real>> jets) {
  BasicWronskianJet<Real> w;
  const int k = static_cast<int>(jets.size());
  if (k == 0) return w;
  for (const auto& j : jets)
    if (j.order() < k + 1) throw InvalidArgument("wronskian_jet: jets must carry k+1 derivatives");

  std::vector<int> rows(k);
  for (int i = 0; i < k; ++i) rows[i] = i;
  w.W = determinant<Real>(detail::wronskian_rows<Real>(jets, rows));
  rows[k - 1] = k;
  w.dW = determinant<Real>(detail::wronskian_rows<Real>(jets, rows));
  rows[k - 1] = k + 1;
  w.d2W = determinant<Real>(detail::wronskian_rows<Real>(jets, rows));
  if (k >= 2) {
    rows[k - 2] = k - 1;
    rows[k - 1] = k;
    w.d2W += determinant<Real>(detail::wronskian_rows<Real>(jets, rows));
  }
  w.scale = hadamard_scale<Real>(jets, k);
  return w;
}

template <typename Real>
BasicWronskianJet<Real> wronskian_derivatives(const std::vector<BasicJet<Real>>& jets) {
  return wronskian_derivatives<Real>(std::span<const BasicJet<Real>>(jets));
}

/// W(u_1..u_k) with its first two derivatives and log-derivatives.
/// Throws SingularWronskian when |W| < 1e-13 * scale.
template <typename Real>
BasicWronskianJet<Real> wronskian_jet(std::span<const BasicJet<Real>> jets, double x) {
  BasicWronskianJet<Real> w = wronskian_derivatives<Real>(jets);
  if (jets.empty()) return w;
  if (!(w.relative() >= Real(kSingularWronskianRatio)))
    throw SingularWronskian(x, static_cast<int>(jets.size()));
  w.logd1 = w.dW / w.W;
  w.logd2 = w.d2W / w.W - w.logd1 * w.logd1;
  return w;
}

template <typename Real>
BasicWronskianJet<Real> wronskian_jet(const std::vector<BasicJet<Real>>& jets, double x) {
  return wronskian_jet<Real>(std::span<const BasicJet<Real>>(jets), x);
}

/// Convenience overload: extends order-1 seed jets with their energies first.
template <typename Real>
BasicWronskianJet<Real> wronskian_jet(const std::vector<BasicJet<Real>>& seeds,
                                      std::span<const double> energies, double x) {
  if (seeds.size() != energies.size()) throw InvalidArgument("wronskian_jet: length mismatch");
  std::vector<BasicJet<Real>> ext;
  ext.reserve(seeds.size());
  const int order = static_cast<int>(seeds.size()) + 1;
  for (std::size_t i = 0; i < seeds.size(); ++i) ext.push_back(extend_jet(seeds[i], energies[i], order));
  return wronskian_jet<Real>(ext, x);
}

}  // namespace susypiv
