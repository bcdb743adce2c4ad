#include <cmath>

#include <gtest/gtest.h>

#include "susypiv/checks.hpp"
#include "susypiv/susy.hpp"

using namespace susypiv;

namespace {

const SeedSpec kFigLeft{5.0, 1.0, 5.0, 2};
const SeedSpec kFigRight{5.0, 1.0, 1.0, 1};

H0Solution first_seed(const SeedSpec& s) {
  return {[s](double x) { return seed_value_as<wide_real>(x, s.eps1, s.lambda, s.kappa); }, s.eps1, "u1"};
}

double sup_diff(const GridFunction& f, const std::function<cplx(double)>& g) {
  double d = 0;
  for (std::size_t i = 0; i < f.size(); ++i) d = std::max(d, std::abs(f.samples[i] - g(f.grid.x(i))));
  return d;
}

}  // namespace

TEST(Energies, PaperValues) {
  const auto a = energies({5.0, 1.0, 5.0, 2});
  EXPECT_EQ(a.E1, 4.0);
  EXPECT_EQ(a.E2, 0.5);
  EXPECT_EQ(a.E3, 6.0);
  const auto b = energies({5.0, 1.0, 1.0, 1});
  EXPECT_EQ(b.E1, 5.0);
  EXPECT_EQ(b.E3, 6.0);
}

TEST(PartnerPotential, GrowingGaussianSeed) {
  const auto m = partner_potential({-0.5, 0.0, 0.0, 1}, Grid(-5, 5, 201));
  EXPECT_LE(sup_diff(m.potential(), [](double x) { return cplx(x * x / 2 - 1); }), 1e-12);
}

TEST(PartnerPotential, DecayingGaussianSeed) {
  const auto m = partner_potential({0.5, 0.0, 0.0, 1}, Grid(-5, 5, 201));
  EXPECT_LE(sup_diff(m.potential(), [](double x) { return cplx(x * x / 2 + 1); }), 1e-12);
}

TEST(PartnerPotential, FigureLeftIsComplexAndFinite) {
  const auto m = partner_potential(kFigLeft, Grid(-5, 5, 2001));
  double im = 0;
  for (const auto& v : m.potential().samples) {
    ASSERT_TRUE(std::isfinite(v.real()) && std::isfinite(v.imag()));
    im = std::max(im, std::abs(v.imag()));
  }
  EXPECT_GT(im, 1e-3);
}

TEST(PartnerPotential, RealSeedWithNodeIsSingular) {
  // lambda = 1 puts a zero into the real seed at eps = 1/4.
  try {
    partner_potential({0.25, 1.0, 0.0, 1}, Grid(-5, 5, 2001));
    FAIL() << "expected SingularWronskian";
  } catch (const SingularWronskian& e) {
    EXPECT_NEAR(e.x(), -0.8875, 5e-3);
  }
}

TEST(PartnerPotential, RiskyRealSeedRefusedByDefault) {
  EXPECT_THROW(partner_potential({1.2, 0.0, 0.0, 1}, Grid(-5, 5, 201)), DegenerateSeed);
}

TEST(PartnerPotential, HermitianLimitIsReal) {
  for (int k : {1, 2, 3}) {
    const auto m = partner_potential({0.25, 0.0, 0.0, k}, Grid(-10, 10, 4001));
    for (const auto& v : m.potential().samples) EXPECT_EQ(v.imag(), 0.0);
  }
}

TEST(AlphaChain, GaussianSeeds) {
  for (double x : {-1.2, 0.4, 3.0}) {
    EXPECT_LE(std::abs(alpha_chain({0.5, 0.0, 0.0, 1}, x)[0] + x), 1e-14);
    EXPECT_LE(std::abs(alpha_chain({-0.5, 0.0, 0.0, 1}, x)[0] - x), 1e-14);
  }
}

TEST(AlphaChain, RiccatiAtFigureLeftPoint) {
  const double x = 0.9, h = 1e-4;
  auto a2 = [](double y) { return alpha_chain(kFigLeft, y)[1]; };
  const cplx d = (8.0 * (a2(x + h) - a2(x - h)) - (a2(x + 2 * h) - a2(x - 2 * h))) / (12 * h);
  const cplx V1 = 0.5 * x * x - chain_wronskians(kFigLeft, x)[1].logd2;
  const cplx a = a2(x);
  const cplx q = 2.0 * (V1 - 4.0);
  EXPECT_LE(std::abs(d + a * a - q) / (1 + std::norm(a) + std::abs(q)), 1e-6);
}

TEST(ChainChecks, RiccatiTelescopingSchrodinger) {
  for (auto s : {kFigLeft, kFigRight, SeedSpec{3.8, 1, 1, 3}, SeedSpec{0.25, 0, 1, 2}}) {
    const auto m = partner_potential(s, Grid(-5, 5, 2001));
    EXPECT_LE(riccati_residual(m), 1e-6) << s.eps1 << " k=" << s.k;
    EXPECT_LE(telescoping_residual(m), 1e-6) << s.eps1 << " k=" << s.k;
    EXPECT_LE(chain_schrodinger_residual(m), 1e-7) << s.eps1 << " k=" << s.k;
  }
}

TEST(CrumMap, SeedIsAnnihilated) {
  const auto m = partner_potential(kFigRight, Grid(-5, 5, 201));
  EXPECT_THROW(crum_map(m, first_seed(kFigRight)), AnnihilatedState);
}

TEST(CrumMap, GrowingGaussianMapsGroundState) {
  const auto m = partner_potential({-0.5, 0.0, 0.0, 1}, Grid(-5, 5, 401));
  const auto g = crum_map(m, oscillator_solution(0));
  const auto want = sample(m.grid(), [](double x) { return cplx(x * std::exp(-x * x / 2)); });
  EXPECT_LE(fit_proportional(g, want).relative_residual, 1e-12);
}

TEST(CrumMap, FirstOrderIntertwinerConvention) {
  // A_1^+ f = (-f' + alpha_1 f)/sqrt(2) = -W(u_1, f)/(sqrt(2) u_1).
  const auto m = partner_potential(kFigRight, Grid(-5, 5, 2001));
  const auto f = sample(m.grid(), [](double x) { return oscillator_state(2, x).value(); });
  const auto df = fd::derivative(f);
  std::vector<cplx> a(m.grid().size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = (-df.samples[i] + m.alpha(i)[0] * f.samples[i]) / std::sqrt(2.0);
  const GridFunction direct(m.grid(), a, "A+f", df.trim);
  auto w = sample(m.grid(), [&](double x) {
    const auto u = seed_value(x, kFigRight.eps1, kFigRight.lambda, kFigRight.kappa);
    const auto p = oscillator_state(2, x);
    return -(u.value() * p.slope() - u.slope() * p.value()) / (std::sqrt(2.0) * u.value());
  });
  w.trim = df.trim;
  const auto fit = fit_proportional(direct, w);
  EXPECT_LE(fit.relative_residual, 1e-8);
  EXPECT_LE(std::abs(fit.constant - 1.0), 1e-8);
  // The Crum image is the same function up to normalization.
  EXPECT_LE(fit_proportional(crum_map(m, oscillator_solution(2)), w).relative_residual, 1e-8);
}

TEST(CrumMap, MappedStateResidual) {
  const auto m = partner_potential(kFigLeft, Grid(-5, 5, 4001));
  EXPECT_LE(hamiltonian_residual(m, crum_map(m, oscillator_solution(3)), 3.5), 1e-6);
}

TEST(Extremal, GroundStateOfShiftedOscillator) {
  const auto m = partner_potential({-0.5, 0.0, 0.0, 1}, Grid(-5, 5, 401));
  const auto ex = extremal_states(m);
  const auto want = sample(m.grid(), [](double x) { return cplx(std::exp(-x * x / 2)); });
  EXPECT_LE(fit_proportional(ex[0], want).relative_residual, 1e-12);
  EXPECT_EQ(m.levels().E1, -0.5);
}

TEST(Extremal, ResidualsAtTheirEnergies) {
  for (auto s : {kFigLeft, kFigRight, SeedSpec{3.8, 1, 1, 3}, SeedSpec{0.25, 0, 0, 1}}) {
    const auto r = extremal_residuals(s, Grid(-5, 5, 2001));
    for (int q = 0; q < 3; ++q) EXPECT_LE(r[q], 1e-6) << s.eps1 << " k=" << s.k << " state " << q + 1;
  }
}

TEST(Extremal, WrongEnergyControl) {
  const auto m = partner_potential(kFigLeft, Grid(-5, 5, 2001));
  const auto ex = extremal_states(m);
  EXPECT_GE(hamiltonian_residual(m, ex[1], 1.5), 1e-2);
}

TEST(Extremal, TailClassification) {
  const auto m = partner_potential(kFigLeft, Grid(-10, 10, 4001));
  const auto ex = extremal_states(m);
  EXPECT_TRUE(classify_tails(ex[0]).square_integrable);
  EXPECT_TRUE(classify_tails(ex[1]).square_integrable);
  EXPECT_FALSE(classify_tails(ex[2]).square_integrable);
}

TEST(HamiltonianResidual, OscillatorEigenpairs) {
  const auto m = oscillator_model(Grid(-10, 10, 4001));
  for (int n = 0; n <= 8; ++n) {
    const auto psi = sample(m.grid(), [n](double x) { return oscillator_state(n, x).value(); });
    EXPECT_LE(hamiltonian_residual(m, psi, oscillator_energy(n)), 1e-7) << n;
  }
}

TEST(HamiltonianResidual, RejectsTinyGrids) {
  const auto m = oscillator_model(Grid(-1, 1, 10));
  const auto psi = sample(m.grid(), [](double x) { return cplx(std::exp(-x * x / 2)); });
  EXPECT_THROW(hamiltonian_residual(m, psi, 0.5), InvalidArgument);
}

TEST(EigenvalueReality, OptimalEnergyIsTheOscillatorLevel) {
  const auto m = partner_potential(kFigLeft, Grid(-5, 5, 4001));
  for (int l = 0; l <= 8; ++l) {
    const cplx E = residual_optimal_energy(m, crum_map(m, oscillator_solution(l)));
    EXPECT_NEAR(E.real(), oscillator_energy(l), 1e-4) << l;
    EXPECT_NEAR(E.imag(), 0.0, 1e-4) << l;
  }
}
