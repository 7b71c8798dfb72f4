#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "hchaos/complexdyn.hpp"
#include "hchaos/io.hpp"
#include "hchaos/orbits.hpp"
#include "hchaos/perturb.hpp"
#include "hchaos/portrait.hpp"
#include "hchaos/scenarios.hpp"
#include "hchaos/symbolic.hpp"
#include "hchaos/tangle.hpp"

namespace fs = std::filesystem;
using namespace hchaos;
namespace sc = hchaos::scenarios;

namespace {

struct Common {
  std::optional<double> gamma, kparam;
  std::optional<std::size_t> iterations;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  bool assert_checks = false;

  sc::Params params() const { return {gamma, kparam, iterations, seed}; }
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--gamma", c.gamma, "stadium half edge length");
  app->add_option("--kparam", c.kparam, "standard map kick strength");
  app->add_option("--iterations", c.iterations, "iteration or bounce count");
  app->add_option("--seed", c.seed, "seed for stochastic ensembles");
  app->add_option("--out-dir", c.out_dir, "artifact directory");
  app->add_flag("--assert", c.assert_checks, "fail on golden-number mismatches");
}

void print_result(const sc::Result& r, bool asserted) {
  std::printf("%-18s %-5s %8.2fs  %zu artifact(s)\n", r.scenario.c_str(),
              r.passed() ? "ok" : (asserted ? "FAIL" : "diff"), r.seconds, r.artifacts.size());
  for (const auto& c : r.checks) {
    std::printf("    %-4s %-48s %.10g  [%s %.10g", c.pass ? "ok" : "FAIL", c.name.c_str(), c.value,
                c.note.c_str(), c.expected);
    if (c.tol > 0.0) std::printf(" +- %g", c.tol);
    std::printf("]\n");
  }
}

// Writes every result, then removes them all again if any asserted check failed.
int emit(const std::vector<std::pair<sc::Result, bool>>& results, const std::string& out_dir) {
  std::vector<fs::path> written;
  bool failed = false;
  try {
    for (const auto& [r, asserted] : results) {
      if (!r.artifacts.empty()) fs::create_directories(out_dir);
      for (const auto& a : r.artifacts) {
        const fs::path path = fs::path(out_dir) / a.file;
        io::write_file(path.string(), a.content);
        written.push_back(path);
      }
      print_result(r, asserted);
      failed = failed || (asserted && !r.passed());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    failed = true;
  }
  if (failed) {
    for (const auto& p : written) {
      std::error_code ec;
      fs::remove(p, ec);
    }
    return 1;
  }
  return 0;
}

struct Job {
  const sc::Scenario* scenario;
  sc::Params params;
  bool asserted;
};

std::vector<Job> jobs_from_file(const std::string& path, const Common& c) {
  const auto sections = io::parse_config(io::read_file(path));
  std::vector<Job> jobs;
  for (const auto& s : sections) {
    if (s.name != "scenario") {
      throw Error(ErrorKind::invalid_input,
                  "line " + std::to_string(s.line) + ": unknown section [" + s.name + "]");
    }
    s.require_known({"name", "gamma", "kparam", "iterations", "seed", "assert"});
    if (!s.has("name")) {
      throw Error(ErrorKind::invalid_input, "line " + std::to_string(s.line) + ": scenario needs a name");
    }
    const std::string name = s.get("name", "");
    const sc::Scenario* sc = sc::find(name);
    if (!sc) {
      throw Error(ErrorKind::invalid_input, "line " + std::to_string(s.entries.at("name").line) +
                                                ": unknown scenario '" + name + "'");
    }
    sc::Params p = c.params();
    if (s.has("gamma")) p.gamma = s.number("gamma", 1.0);
    if (s.has("kparam")) p.kparam = s.number("kparam", 1.0);
    if (s.has("iterations")) p.iterations = static_cast<std::size_t>(s.number("iterations", 0.0));
    if (s.has("seed")) p.seed = static_cast<std::uint64_t>(s.number("seed", 0.0));
    const std::string a = s.get("assert", "false");
    if (a != "true" && a != "false") {
      throw Error(ErrorKind::invalid_input,
                  "line " + std::to_string(s.entries.at("assert").line) + ": assert must be true or false");
    }
    jobs.push_back({sc, p, c.assert_checks || a == "true"});
  }
  return jobs;
}

std::string manifold_csv(const ManifoldSegment& u, const ManifoldSegment& s) {
  io::CsvWriter w({"branch", "q", "p", "parameter"});
  for (const auto* seg : {&u, &s}) {
    const char* tag = seg == &u ? "unstable" : "stable";
    for (std::size_t i = 0; i < seg->points.size(); ++i) {
      w.row({tag, io::num(seg->points[i].q), io::num(seg->points[i].p), io::num(seg->params[i])});
    }
  }
  return w.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hamiltonian chaos toolkit"};
  app.require_subcommand(1);
  Common c;

  auto* list = app.add_subcommand("list", "list built-in scenarios");

  auto* run = app.add_subcommand("run", "run a scenario file or named scenarios");
  std::string file;
  std::vector<std::string> names;
  run->add_option("file", file, "scenario file");
  run->add_option("--scenario", names, "catalog scenario to run (repeatable)");
  add_common(run, c);

  auto* sos = app.add_subcommand("sos", "surface of section");
  double q0 = 5.0, p0 = 0.04;
  sos->add_option("--q", q0, "stadium start q");
  sos->add_option("--p", p0, "stadium start p");
  add_common(sos, c);

  auto* orbits = app.add_subcommand("orbits", "stadium periodic-orbit census");
  std::size_t period = 4;
  orbits->add_option("--n", period, "period");
  add_common(orbits, c);

  auto* manifold = app.add_subcommand("manifold", "manifolds of the horizontal-bounce orbit");
  double budget = 6.0;
  manifold->add_option("--budget", budget, "arclength budget");
  add_common(manifold, c);

  auto* tangle = app.add_subcommand("tangle", "turnstile areas");
  add_common(tangle, c);

  auto* partition = app.add_subcommand("partition", "stadium itinerary partition");
  std::size_t depth = 3;
  partition->add_option("--n", depth, "itinerary depth");
  add_common(partition, c);

  auto* perturb = app.add_subcommand("perturb", "action diffusion under a stadium deformation");
  double eps = 0.01;
  perturb->add_option("--epsilon", eps, "deformation size");
  add_common(perturb, c);

  auto* complex = app.add_subcommand("complex", "Airy benchmark from complex trajectories");
  std::vector<double> qs{-5.0, 3.0};
  complex->add_option("--q", qs, "positions");
  add_common(complex, c);

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      std::cout << sc::catalog_text();
      return 0;
    }
    std::vector<std::pair<sc::Result, bool>> results;
    if (run->parsed()) {
      std::vector<Job> jobs;
      if (!file.empty()) jobs = jobs_from_file(file, c);
      for (const auto& n : names) {
        const sc::Scenario* s = sc::find(n);
        if (!s) throw Error(ErrorKind::invalid_input, "unknown scenario '" + n + "'");
        jobs.push_back({s, c.params(), c.assert_checks});
      }
      if (file.empty() && names.empty()) throw Error(ErrorKind::invalid_input, "nothing to run");
      for (const auto& j : jobs) results.emplace_back(sc::run(*j.scenario, j.params), j.asserted);
      return emit(results, c.out_dir);
    }
    if (sos->parsed()) {
      if (c.kparam) {
        const auto* s = sc::find("fig1-portraits");
        results.emplace_back(sc::run(*s, c.params()), c.assert_checks);
      } else {
        const double g = c.gamma.value_or(1.0);
        const auto seg = iterate(MapSystem::stadium(g), {q0, p0}, c.iterations.value_or(1000));
        sc::Result r{"sos", {}, {}, 0.0};
        io::CsvWriter w({"bounce", "q", "p"});
        io::Svg svg(0.0, Stadium(g).perimeter(), -1.0, 1.0);
        for (std::size_t k = 0; k < seg.points.size(); ++k) {
          w.row(std::vector<double>{static_cast<double>(k), seg.points[k].q, seg.points[k].p});
          svg.circle(seg.points[k].q, seg.points[k].p, 1.0, "black");
        }
        r.artifacts = {{"sos.csv", w.str()}, {"sos.svg", svg.str()}};
        results.emplace_back(r, c.assert_checks);
      }
    } else if (orbits->parsed()) {
      const MapSystem m = MapSystem::stadium(c.gamma.value_or(1.0));
      const auto census = find_periodic_orbits(m, period);
      sc::Result r{"orbits", {}, {}, 0.0};
      r.checks.push_back(sc::at_least("orbits found", static_cast<double>(census.orbits.size()), 1));
      r.artifacts.push_back({"orbits.csv", sc::detail::census_csv(m, {census})});
      std::printf("n=%zu orbits=%zu fixed points=%zu marginal excluded=%zu\n", period,
                  census.orbits.size(), census.fixed_point_count(), census.excluded_marginal);
      results.emplace_back(r, c.assert_checks);
    } else if (manifold->parsed()) {
      const MapSystem m = MapSystem::stadium(c.gamma.value_or(1.0));
      const PeriodicOrbit o = make_orbit(m, {0.0, 0.0}, 2);
      const ManifoldParam U(m, o.points[0], 2, Branch::unstable, -1, 1e-8);
      const ManifoldParam S(m, o.points[1], 2, Branch::stable, 1, 1e-8);
      const auto us = grow_manifold(U, budget), ss = grow_manifold(S, budget);
      sc::Result r{"manifold", {}, {}, 0.0};
      r.checks.push_back(sc::holds("unstable branch complete", us.complete));
      r.checks.push_back(sc::holds("stable branch complete", ss.complete));
      r.artifacts.push_back({"manifold.csv", manifold_csv(us, ss)});
      results.emplace_back(r, c.assert_checks);
    } else if (tangle->parsed()) {
      for (const char* n : {"sec3-areas", "sec3-circuit"}) {
        results.emplace_back(sc::run(*sc::find(n), c.params()), c.assert_checks);
      }
    } else if (partition->parsed()) {
      const double g = c.gamma.value_or(1.0);
      const auto part = stadium_partition(g, depth);
      sc::Result r{"partition", {}, {}, 0.0};
      io::CsvWriter w({"label", "pixels", "area_fraction", "q", "p"});
      for (const auto& cell : part.cells) {
        w.row({label_string(cell.label), std::to_string(cell.pixels), io::num(cell.area_fraction),
               io::num(cell.centroid.q), io::num(cell.centroid.p)});
      }
      r.artifacts.push_back({"partition.csv", w.str()});
      std::printf("gamma=%g n=%zu cells=%zu below floor=%zu\n", g, depth, part.count(), part.below_floor);
      results.emplace_back(r, c.assert_checks);
    } else if (perturb->parsed()) {
      DiffusionOptions opt;
      opt.seed = c.seed.value_or(12345);
      const auto d = action_diffusion(c.gamma.value_or(1.0), eps, opt);
      sc::Result r{"perturb", {}, {}, 0.0};
      r.checks.push_back(sc::at_least("linear growth R^2", d.fit.r2, 0.95));
      io::CsvWriter w({"t", "mean", "variance"});
      for (std::size_t k = 0; k < d.t.size(); ++k) w.row(std::vector<double>{d.t[k], d.mean[k], d.variance[k]});
      r.artifacts.push_back({"perturb.csv", w.str()});
      std::printf("epsilon=%g slope=%.6g K=%.6g +- %.3g\n", eps, d.fit.slope, d.K, d.K_ci);
      results.emplace_back(r, c.assert_checks);
    } else if (complex->parsed()) {
      sc::Result r{"complex", {}, {}, 0.0};
      io::CsvWriter w({"q", "wkb", "integral"});
      for (double q : qs) {
        const double wkb = airy_wkb(q).value, ref = airy_integral(q);
        r.checks.push_back(sc::near_rel("Ai(" + io::num(q) + ")", wkb, ref, 0.02));
        w.row(std::vector<double>{q, wkb, ref});
      }
      r.artifacts.push_back({"complex.csv", w.str()});
      results.emplace_back(r, c.assert_checks);
    }
    return emit(results, c.out_dir);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
