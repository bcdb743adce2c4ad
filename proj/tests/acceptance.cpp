// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "susypiv/susypiv.hpp"

using namespace susypiv;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const SeedSpec kFigLeft{5.0, 1.0, 5.0, 2};
const SeedSpec kFigRight{5.0, 1.0, 1.0, 1};
const Grid kFigGrid(-5, 5, 2001);

void parameter_reproduction() {
  const PivParams l = piv_parameters(energies(kFigLeft), 1);
  const PivParams r = piv_parameters(energies(kFigRight), 3);
  const bool pass = l.a == -2.5 && l.b == -60.5 && r.a == 9.0 && r.b == -2.0;
  report(1, pass, fmt("left (a,b)=(%g,%g) want (-5/2,-121/2); right (a,b)=(%g,%g) want (9,-2)", l.a, l.b, r.a, r.b));
}

void end_to_end_piv() {
  bool pass = true;
  std::string detail;
  for (auto [spec, family, name] : {std::tuple{kFigLeft, 1, "left"}, std::tuple{kFigRight, 3, "right"}}) {
    const auto t0 = Clock::now();
    const PivSolution sol = piv_solution(partner_potential(spec, kFigGrid), family);
    const PivResidual res = piv_residual(sol);
    const double secs = seconds_since(t0);
    const double unmasked = 1.0 - static_cast<double>(sol.masked_count()) / sol.grid.size();
    const double evaluated = static_cast<double>(res.admissible) / sol.grid.size();
    pass = pass && res.value <= 1e-5 && unmasked >= 0.9 && secs < 5.0;
    if (!detail.empty()) detail += "; ";
    detail += fmt("%s residual=%.3g (<=1e-5) unmasked=%.1f%% evaluated=%.1f%% time=%.2fs (<5s)", name, res.value,
                  100 * unmasked, 100 * evaluated, secs);
  }
  report(2, pass, detail);
}

void exact_solutions() {
  std::vector<cplx> g1(kFigGrid.size()), g3(kFigGrid.size());
  for (std::size_t i = 0; i < g1.size(); ++i) {
    g1[i] = -2.0 * kFigGrid.x(i);
    g3[i] = -2.0 / 3.0 * kFigGrid.x(i);
  }
  const double r1 = piv_residual(kFigGrid, g1, {}, 0.0, -2.0).value;
  const double r3 = piv_residual(kFigGrid, g3, {}, 0.0, -2.0 / 9.0).value;
  report(3, r1 <= 1e-8 && r3 <= 1e-8, fmt("g=-2x residual=%.3g, g=-2x/3 residual=%.3g (<=1e-8)", r1, r3));
}

void chain_suite() {
  std::vector<SeedSpec> matrix;
  for (int k : {1, 2, 3})
    for (double eps : {5.0, 3.8, 0.25})
      for (auto [lam, kap] : {std::pair{1.0, 5.0}, {1.0, 1.0}, {0.0, 1.0}}) matrix.push_back({eps, lam, kap, k});
  for (int k : {1, 2, 3}) matrix.push_back({0.25, 0.0, 0.0, k});

  const auto t0 = Clock::now();
  double schr = 0, ric = 0, wfd = 0;
  for (const auto& s : matrix) {
    const PartnerModel m = partner_potential(s, kFigGrid);
    schr = std::max(schr, chain_schrodinger_residual(m));
    ric = std::max(ric, riccati_residual(m));
    wfd = std::max(wfd, wronskian_fd_discrepancy(m));
  }
  const double secs = seconds_since(t0);
  report(4, schr <= 1e-7 && ric <= 1e-6 && wfd <= 1e-6 && secs < 30.0,
         fmt("%zu models: Schrodinger=%.3g (<=1e-7) Riccati=%.3g (<=1e-6) Wronskian FD=%.3g (<=1e-6) time=%.1fs (<30s)",
             matrix.size(), schr, ric, wfd, secs));
}

void spectrum_structure() {
  const auto t0 = Clock::now();
  const SpectrumReport a = spectrum_report(partner_potential(kFigLeft, kFigGrid), 10);
  const SpectrumReport b = spectrum_report(partner_potential({2.5, 1.0, 1.0, 1}, kFigGrid), 10);
  const double secs = seconds_since(t0);

  auto same = [](std::vector<double> v, std::vector<double> w) {
    std::sort(v.begin(), v.end());
    std::sort(w.begin(), w.end());
    return v == w;
  };
  auto infinite_from_half = [](const SpectrumReport& r) {
    for (std::size_t l = 0; l < r.infinite_ladder.size(); ++l)
      if (r.infinite_ladder[l] != l + 0.5) return false;
    return !r.infinite_ladder.empty();
  };
  double worst_fit = 0;
  for (const auto* r : {&a, &b})
    for (const auto& act : r->actions)
      if (act.verdict == Verdict::Proportional) worst_fit = std::max(worst_fit, act.fit_residual);

  const bool left_ok = a.verified && same(a.finite_ladder, {4, 5}) && infinite_from_half(a) &&
                       same(a.annihilated_down, {4, 0.5}) && same(a.annihilated_up, {5}) && a.one_way_links.empty();
  bool down_link = false, up_link = false;
  for (const auto& l : b.one_way_links) {
    down_link = down_link || (l.direction == Direction::Down && l.from == 3.5 && l.to == 2.5);
    up_link = up_link || (l.direction == Direction::Up && l.from == 1.5 && l.to == 2.5);
  }
  const bool degenerate_ok = b.verified && b.finite_ladder.empty() && infinite_from_half(b) &&
                             b.one_way_links.size() == 2 && down_link && up_link;
  report(5, left_ok && degenerate_ok && worst_fit <= 1e-4 && secs < 60.0,
         fmt("k=2 eps1=5: finite ladder {4,5}, down {4,1/2}, up {5} %s; k=1 eps1=5/2: isospectral, links "
             "E3->E2 down and E1->E2 up %s; worst fit=%.3g (<=1e-4) time=%.1fs (<60s)",
             left_ok ? "ok" : "MISMATCH", degenerate_ok ? "ok" : "MISMATCH", worst_fit, secs));
}

void eigenvalue_reality() {
  // h = 0.0025: see README, the 7-point residual needs this step to resolve
  // the potential's spikes near complex Wronskian zeros at the 1e-5 level.
  const Grid grid(-5, 5, 4001);
  const PartnerModel m = partner_potential(kFigLeft, grid);
  double worst = 0, weakest_control = 1e300;
  for (int l = 0; l <= 8; ++l) {
    const GridFunction psi = crum_map(m, oscillator_solution(l));
    const double E = oscillator_energy(l);
    worst = std::max(worst, hamiltonian_residual(m, psi, E));
    weakest_control = std::min({weakest_control, hamiltonian_residual(m, psi, E - 0.1), hamiltonian_residual(m, psi, E + 0.1)});
  }
  // Informational: the same sweep at the coarser default step h = 0.005.
  const PartnerModel coarse = partner_potential(kFigLeft, Grid(-10, 10, 4001));
  double coarse_worst = 0;
  for (int l = 0; l <= 8; ++l)
    coarse_worst = std::max(coarse_worst, hamiltonian_residual(coarse, crum_map(coarse, oscillator_solution(l)),
                                                               oscillator_energy(l)));
  report(6, worst <= 1e-5 && weakest_control > 1e-2,
         fmt("[-5,5] n=4001: max residual over l<=8 = %.3g (<=1e-5); min residual at E_l+-0.1 = %.3g (>1e-2) "
             "[at h=0.005 on [-10,10] n=4001 the max is %.3g]",
             worst, weakest_control, coarse_worst));
}

void hermitian_limit() {
  const PartnerModel m = partner_potential({0.25, 0.0, 0.0, 1}, Grid(-10, 10, 4001));
  std::size_t nonzero = 0;
  for (const auto& v : m.potential().samples) nonzero += v.imag() != 0.0;
  for (int f : {1, 2, 3})
    for (const auto& v : piv_solution(m, f).g) nonzero += v.imag() != 0.0;
  for (const auto& s : extremal_states(m))
    for (const auto& v : s.samples) nonzero += v.imag() != 0.0;
  for (int l = 0; l <= 8; ++l)
    for (const auto& v : crum_map(m, oscillator_solution(l)).samples) nonzero += v.imag() != 0.0;
  const PivSolution g = piv_solution(m, 1);
  const double res = piv_residual(g).value;
  report(7, nonzero == 0 && res <= 1e-6,
         fmt("kappa=0 eps1=1/4 k=1: %zu samples with nonzero imaginary part (V1, g families 1-3, extremal and mapped "
             "states); g residual against (a,b)=(%g,%g) = %.3g",
             nonzero, g.params.a, g.params.b, res));
}

template <typename F>
void guarded(int id, F f) {
  try {
    f();
  } catch (const std::exception& e) {
    report(id, false, std::string("exception: ") + e.what());
  }
}

}  // namespace

int main() {
  guarded(1, parameter_reproduction);
  guarded(2, end_to_end_piv);
  guarded(3, exact_solutions);
  guarded(4, chain_suite);
  guarded(5, spectrum_structure);
  guarded(6, eigenvalue_reality);
  guarded(7, hermitian_limit);
  std::printf("%d of 7 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
