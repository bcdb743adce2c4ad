#pragma once

// susypiv command-line front end. Kept as a header so the tests can drive
// run_cli() in-process.

#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "susypiv/susypiv.hpp"

namespace susypiv::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kSingular = 2,
  kDegenerate = 3,
  kUnverified = 4,
};

struct RunConfig {
  std::string command;
  int k = 2;
  double eps1 = 5.0;
  double lambda = 1.0;
  double kappa = 5.0;
  int family = 1;
  double xmin = -5.0;
  double xmax = 5.0;
  std::size_t n = 2001;
  int N = 10;
  std::string out;
  std::string format = "csv";
  std::string fixture;
  std::optional<double> a, b;

  SeedSpec spec() const { return {eps1, lambda, kappa, k}; }
  Grid grid() const { return Grid(xmin, xmax, n); }
};

namespace detail {

using nlohmann::json;

inline std::string num(double v) { return format_double(v); }

/// Number of contiguous runs of masked samples.
inline std::size_t pole_count(const std::vector<bool>& masked) {
  std::size_t runs = 0;
  for (std::size_t i = 0; i < masked.size(); ++i)
    if (masked[i] && (i == 0 || !masked[i - 1])) ++runs;
  return runs;
}

inline void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out.empty())
    out << text;
  else
    write_text(cfg.out, text);
}

inline json samples_json(const Grid& grid, const std::vector<cplx>& v, const std::vector<bool>* masked) {
  json xs = json::array(), re = json::array(), im = json::array();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (masked && (*masked)[i]) continue;
    xs.push_back(grid.x(i));
    re.push_back(v[i].real());
    im.push_back(v[i].imag());
  }
  return {{"x", xs}, {"re", re}, {"im", im}};
}

inline int cmd_generate(const RunConfig& cfg, std::ostream& out) {
  const PartnerModel model = partner_potential(cfg.spec(), cfg.grid());
  const PivSolution sol = piv_solution(model, cfg.family);
  out << "a=" << num(sol.params.a) << " b=" << num(sol.params.b) << " family=" << cfg.family
      << " poles=" << pole_count(sol.masked) << " masked=" << sol.masked_count() << '\n';
  const std::string path = cfg.out.empty() ? (cfg.format == "json" ? "g.json" : "g.csv") : cfg.out;
  if (cfg.format == "json") {
    json j = samples_json(sol.grid, sol.g, &sol.masked);
    j["a"] = sol.params.a;
    j["b"] = sol.params.b;
    j["family"] = cfg.family;
    json masked = json::array();
    for (std::size_t i = 0; i < sol.g.size(); ++i)
      if (sol.masked[i]) masked.push_back(sol.grid.x(i));
    j["masked_x"] = masked;
    write_text(path, j.dump(2) + '\n');
  } else {
    write_text(path, to_csv(sol));
    write_text(path + ".mask", mask_listing(sol));
  }
  return kOk;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  std::vector<CheckResult> checks;
  if (cfg.fixture == "linear") {
    const Grid grid = cfg.grid();
    std::vector<cplx> g(grid.size());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = -2.0 * grid.x(i);
    checks.push_back({"piv_residual", piv_residual(grid, g, {}, cfg.a.value_or(0.0), cfg.b.value_or(-2.0)).value, 1e-8});
  } else if (!cfg.fixture.empty()) {
    throw InvalidArgument("unknown fixture '" + cfg.fixture + "'");
  } else {
    const PartnerModel model = partner_potential(cfg.spec(), cfg.grid());
    const PivSolution sol = piv_solution(model, cfg.family);
    checks = verification_suite(model, sol, cfg.a.value_or(sol.params.a), cfg.b.value_or(sol.params.b));
  }
  json report = json::array();
  bool all = true;
  for (const auto& c : checks) {
    report.push_back({{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"pass", c.pass()}});
    all = all && c.pass();
  }
  emit(cfg, out, json{{"checks", report}, {"pass", all}}.dump(2) + '\n');
  return all ? kOk : kUnverified;
}

inline json spectrum_json(const SpectrumReport& r) {
  json links = json::array();
  for (const auto& l : r.one_way_links)
    links.push_back({{"from", l.from}, {"to", l.to}, {"direction", to_string(l.direction)}, {"fit_residual", l.fit_residual}});
  json actions = json::array();
  for (const auto& a : r.actions) {
    json j{{"source", a.source_energy},
           {"direction", to_string(a.direction)},
           {"verdict", to_string(a.verdict)},
           {"fit_residual", a.fit_residual},
           {"output_ratio", a.output_ratio},
           {"reduced", a.reduced}};
    j["target"] = a.target_energy ? json(*a.target_energy) : json(nullptr);
    actions.push_back(j);
  }
  json j{{"finite_ladder", r.finite_ladder},
         {"infinite_ladder", r.infinite_ladder},
         {"annihilated_down", r.annihilated_down},
         {"annihilated_up", r.annihilated_up},
         {"one_way_links", links},
         {"q_roots", r.q_roots},
         {"degenerate", r.degenerate},
         {"verified", r.verified},
         {"note", r.note},
         {"actions", actions}};
  j["degenerate_level"] = r.degenerate_level ? json(*r.degenerate_level) : json(nullptr);
  j["offending_energy"] = r.offending_energy ? json(*r.offending_energy) : json(nullptr);
  return j;
}

inline int cmd_spectrum(const RunConfig& cfg, std::ostream& out) {
  const PartnerModel model = partner_potential(cfg.spec(), cfg.grid());
  const SpectrumReport r = spectrum_report(model, cfg.N);
  emit(cfg, out, spectrum_json(r).dump(2) + '\n');
  return r.verified ? kOk : kUnverified;
}

inline int cmd_extremal(const RunConfig& cfg, std::ostream& out) {
  const PartnerModel model = partner_potential(cfg.spec(), cfg.grid());
  const auto states = extremal_states(model);
  const auto& lv = model.levels();
  const double E[3] = {lv.E1, lv.E2, lv.E3};
  if (cfg.format == "json") {
    json arr = json::array();
    for (int q = 0; q < 3; ++q) {
      json s = samples_json(model.grid(), states[q].samples, nullptr);
      const TailReport t = classify_tails(states[q]);
      s["energy"] = E[q];
      s["residual"] = hamiltonian_residual(model, states[q], E[q]);
      s["square_integrable"] = t.square_integrable;
      arr.push_back(s);
    }
    emit(cfg, out, json{{"states", arr}}.dump(2) + '\n');
    return kOk;
  }
  std::string text = "x,re_psi1,im_psi1,re_psi2,im_psi2,re_psi3,im_psi3\n";
  for (std::size_t i = 0; i < model.grid().size(); ++i) {
    text += num(model.grid().x(i));
    for (const auto& s : states) text += ',' + num(s.samples[i].real()) + ',' + num(s.samples[i].imag());
    text += '\n';
  }
  emit(cfg, out, text);
  return kOk;
}

inline void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--k", cfg.k, "transformation order")->check(CLI::PositiveNumber);
  sub->add_option("--eps1", cfg.eps1, "factorization energy of the first seed");
  sub->add_option("--lambda", cfg.lambda, "real part of the seed mixing constant");
  sub->add_option("--kappa", cfg.kappa, "imaginary part of the seed mixing constant");
  sub->add_option("--family", cfg.family, "PIV solution family")->check(CLI::Range(1, 3));
  sub->add_option("--xmin", cfg.xmin, "grid start");
  sub->add_option("--xmax", cfg.xmax, "grid end");
  sub->add_option("--n", cfg.n, "grid points")->check(CLI::Range(std::size_t{101}, std::size_t{1000001}));
  sub->add_option("--N", cfg.N, "ladder depth")->check(CLI::Range(1, kMaxLadderDepth));
  sub->add_option("--out", cfg.out, "output path");
  sub->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Complex SUSY partners of the oscillator and Painleve IV solutions"};
  app.require_subcommand(1);
  auto* gen = app.add_subcommand("generate", "write g(x) samples and print (a, b)");
  auto* ver = app.add_subcommand("verify", "run the residual property suite");
  auto* spc = app.add_subcommand("spectrum", "ladder-operator spectrum report as JSON");
  auto* ext = app.add_subcommand("extremal", "sample the three extremal states");
  for (auto* s : {gen, ver, spc, ext}) detail::add_common(s, cfg);
  ver->add_option("--fixture", cfg.fixture, "built-in fixture instead of a seed (linear: g=-2x)");
  ver->add_option("--a", cfg.a, "override the PIV parameter a");
  ver->add_option("--b", cfg.b, "override the PIV parameter b");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  if (!(cfg.xmin < cfg.xmax)) {
    err << "error: need xmin < xmax\n";
    return kUsage;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    if (cfg.command == "generate") return detail::cmd_generate(cfg, out);
    if (cfg.command == "verify") return detail::cmd_verify(cfg, out);
    if (cfg.command == "spectrum") return detail::cmd_spectrum(cfg, out);
    return detail::cmd_extremal(cfg, out);
  } catch (const SingularWronskian& e) {
    err << "error: " << e.what() << '\n';
    return kSingular;
  } catch (const ExtremalStateZero& e) {
    err << "error: " << e.what() << '\n';
    return kSingular;
  } catch (const DegenerateSeed& e) {
    err << "error: " << e.what() << '\n';
    return kDegenerate;
  } catch (const AnnihilatedState& e) {
    err << "error: " << e.what() << '\n';
    return kDegenerate;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace susypiv::cli
