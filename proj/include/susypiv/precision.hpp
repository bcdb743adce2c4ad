#pragma once

// Working precision of the Wronskian engine. Chain elements share the same
// e^{x^2/2} asymptotics, so their Wronskians fall many orders below the
// Hadamard bound away from the origin (about 1e-12 at |x| = 5 for four
// functions). Seeds and determinants are therefore evaluated in quad
// precision and only log-derivatives and ratios are rounded to double.

#include <complex>

#ifndef SUSYPIV_NO_FLOAT128
#include <boost/multiprecision/float128.hpp>
#endif

#include "susypiv/jet.hpp"

namespace susypiv {

#ifndef SUSYPIV_NO_FLOAT128
using wide_real = boost::multiprecision::float128;
#else
using wide_real = long double;
#endif

using wide_cplx = std::complex<wide_real>;
using WideJet = BasicJet<wide_real>;

template <typename Real>
inline cplx to_cplx(const std::complex<Real>& v) {
  return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

}  // namespace susypiv
