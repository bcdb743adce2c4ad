#include <cmath>

#include <gtest/gtest.h>

#include "susypiv/painleve.hpp"

using namespace susypiv;

namespace {

const Grid kFigGrid(-5, 5, 2001);

std::vector<cplx> sampled(const Grid& g, double slope) {
  std::vector<cplx> v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = slope * g.x(i);
  return v;
}

}  // namespace

TEST(PivParameters, FigureCaptionValues) {
  const auto l = piv_parameters(4.0, 0.5, 6.0, 1);
  EXPECT_EQ(l.a, -2.5);
  EXPECT_EQ(l.b, -60.5);
  const auto r = piv_parameters(5.0, 0.5, 6.0, 3);
  EXPECT_EQ(r.a, 9.0);
  EXPECT_EQ(r.b, -2.0);
  EXPECT_EQ(piv_parameters(energies({5.0, 1, 5, 2}), 1).b, -60.5);
}

TEST(PivParameters, CoincidentEnergiesGiveZeroB) { EXPECT_EQ(piv_parameters(3.0, 1.25, 1.25, 1).b, 0.0); }

TEST(PivParameters, RejectsUnknownFamily) {
  EXPECT_THROW(piv_parameters(1, 2, 3, 0), InvalidArgument);
  EXPECT_THROW(piv_parameters(1, 2, 3, 4), InvalidArgument);
}

TEST(PivResidual, ExactRationalSolutions) {
  const Grid g(-5, 5, 2001);
  EXPECT_LE(piv_residual(g, sampled(g, -2.0), {}, 0.0, -2.0).value, 1e-8);
  EXPECT_LE(piv_residual(g, sampled(g, -2.0 / 3.0), {}, 0.0, -2.0 / 9.0).value, 1e-8);
}

TEST(PivResidual, WrongParametersAreDetected) {
  const Grid g(-5, 5, 2001);
  EXPECT_GT(piv_residual(g, sampled(g, -2.0), {}, 0.5, -2.0).value, 1e-2);
}

TEST(PivResidual, TooFewAdmissiblePoints) {
  const Grid g(-5, 5, 201);
  std::vector<bool> masked(g.size(), false);
  for (std::size_t i = 0; i < 120; ++i) masked[i] = true;
  EXPECT_THROW(piv_residual(g, sampled(g, -2.0), masked, 0.0, -2.0), InvalidArgument);
}

TEST(PivSolution, GrowingGaussianIsDegenerate) {
  const auto m = partner_potential({-0.5, 0.0, 0.0, 1}, kFigGrid);
  try {
    piv_solution(m, 1);
    FAIL() << "expected DegenerateSeed";
  } catch (const DegenerateSeed& e) {
    EXPECT_NE(std::string(e.what()).find("degenerate: g identically zero"), std::string::npos);
  }
}

TEST(PivSolution, FigureLeftFamilyOne) {
  const auto s = piv_solution(partner_potential({5.0, 1.0, 5.0, 2}, kFigGrid), 1);
  EXPECT_EQ(s.params.a, -2.5);
  EXPECT_EQ(s.params.b, -60.5);
  EXPECT_LE(piv_residual(s).value, 1e-6);
}

TEST(PivSolution, FigureRightFamilyThree) {
  const auto s = piv_solution(partner_potential({5.0, 1.0, 1.0, 1}, kFigGrid), 3);
  EXPECT_EQ(s.params.a, 9.0);
  EXPECT_EQ(s.params.b, -2.0);
  EXPECT_LE(piv_residual(s).value, 1e-5);
}

TEST(PivSolution, RealNodelessSeed) {
  const auto s = piv_solution(partner_potential({0.25, 0.0, 0.0, 1}, kFigGrid), 1);
  EXPECT_EQ(s.params.a, 0.25);
  EXPECT_EQ(s.params.b, -1.125);
  EXPECT_LE(piv_residual(s, 0.25, -1.125).value, 1e-6);
  for (const auto& v : s.g) EXPECT_EQ(v.imag(), 0.0);
}

TEST(PivSolution, EndToEndMatrix) {
  for (int k : {1, 2, 3})
    for (double eps : {5.0, 3.8, 0.25})
      for (auto [lam, kap] : {std::pair{1.0, 5.0}, {1.0, 1.0}, {0.0, 1.0}}) {
        const SeedSpec spec{eps, lam, kap, k};
        const auto m = partner_potential(spec, kFigGrid);
        for (int f : {1, 2, 3}) {
          const auto s = piv_solution(m, f);
          const auto r = piv_residual(s);
          EXPECT_LE(r.value, 1e-5) << "k=" << k << " eps=" << eps << " lambda=" << lam << " kappa=" << kap
                                   << " family=" << f;
          EXPECT_GE(r.admissible, kFigGrid.size() * 9 / 10 - 6);
        }
      }
}

TEST(PivSolution, RealControlsAcrossOrders) {
  for (int k : {1, 2, 3}) {
    const auto m = partner_potential({0.25, 0.0, 0.0, k}, kFigGrid);
    for (int f : {1, 2, 3}) {
      const auto s = piv_solution(m, f);
      EXPECT_LE(piv_residual(s).value, 1e-5) << "k=" << k << " family=" << f;
      for (const auto& v : s.g) ASSERT_EQ(v.imag(), 0.0);
    }
  }
}

TEST(PivSolution, ReflectionSymmetryForImaginaryMixing) {
  for (int k : {1, 2, 3}) {
    const auto s = piv_solution(partner_potential({5.0, 0.0, 1.0, k}, kFigGrid), 1);
    const std::size_t n = s.g.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (s.masked[i] || s.masked[n - 1 - i]) continue;
      const cplx a = s.g[i], b = s.g[n - 1 - i];
      const double scale = std::max(1.0, std::abs(a));
      EXPECT_LE(std::abs(a.real() + b.real()), 1e-8 * scale) << k << " x=" << s.grid.x(i);
      EXPECT_LE(std::abs(a.imag() - b.imag()), 1e-8 * scale) << k << " x=" << s.grid.x(i);
    }
  }
}

TEST(PivSolution, PolesAreMaskedNotFabricated) {
  // The family-2 state of this configuration has zeros near the axis.
  const auto s = piv_solution(partner_potential({3.8, 1.0, 1.0, 3}, kFigGrid), 2);
  for (std::size_t i = 0; i < s.g.size(); ++i)
    if (!s.masked[i]) ASSERT_TRUE(std::isfinite(s.g[i].real()) && std::isfinite(s.g[i].imag()));
  EXPECT_GT(s.masked_count(), 0u);
  EXPECT_LE(s.masked_count(), kFigGrid.size() / 10);
}
