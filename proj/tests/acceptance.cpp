// Acceptance suite: one line per criterion, nonzero exit if any criterion fails.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "hchaos/complexdyn.hpp"
#include "hchaos/scenarios.hpp"
#include "oracles.hpp"

using namespace hchaos;
namespace sc = hchaos::scenarios;

namespace {

// Checks computed here from closed forms, added to the catalog scenario's own checks.
std::vector<sc::Check> oracle_checks(int criterion) {
  std::vector<sc::Check> out;
  switch (criterion) {
    case 3: {
      const double tr = oracle::two_mirror_trace(4.0, 1.0, 1.0);
      out.push_back(sc::near_abs("two-mirror trace formula", tr, 34.0, 1e-9));
      out.push_back(sc::near_abs("mu from the formula", std::acosh(0.5 * tr) / 2.0, 1.763, 1e-3));
      break;
    }
    case 5:
      // lengths 6 sqrt 3 and 4 + 4 sqrt 2 of the two period-4 partners
      out.push_back(sc::near_abs("closed-form n=4 pair", 6 * std::sqrt(3.0) - 4 - 4 * std::sqrt(2.0),
                                 0.735451, 1e-5));
      break;
    case 12:
      for (double q : {-5.0, 3.0}) {
        out.push_back(sc::near_rel("WKB vs Airy series at " + io::num(q), airy_wkb(q).value,
                                   oracle::airy_series(q), 0.02));
        out.push_back(sc::near_rel("library integral vs series at " + io::num(q), airy_integral(q),
                                   oracle::airy_series(q), 1e-8));
      }
      break;
    case 13: {
      const MapSystem m = MapSystem::quartic(1.0, 1.0);
      out.push_back(sc::near_rel("quartic period vs quadrature", quartic_period(m, 1.0),
                                 oracle::quartic_period_quadrature(1.0, 1.0, 1.0), 1e-8));
      break;
    }
    default:
      break;
  }
  return out;
}

}  // namespace

int main() {
  int failed = 0;
  for (int c = 1; c <= 14; ++c) {
    const sc::Scenario* s = nullptr;
    for (const auto& e : sc::catalog()) {
      if (e.criterion == c) s = &e;
    }
    if (!s) {
      std::printf("criterion %2d  %-18s FAIL  no scenario\n", c, "-");
      ++failed;
      continue;
    }
    sc::Result r;
    std::string error;
    try {
      r = sc::run(*s);
      for (auto& k : oracle_checks(c)) r.checks.push_back(std::move(k));
    } catch (const std::exception& e) {
      error = e.what();
    }
    const bool pass = error.empty() && r.passed();
    failed += !pass;
    std::printf("criterion %2d  %-18s %s  %7.2fs  %s\n", c, s->name.c_str(), pass ? "PASS" : "FAIL",
                r.seconds, s->expected.c_str());
    if (!error.empty()) std::printf("    error: %s\n", error.c_str());
    for (const auto& k : r.checks) {
      std::printf("    %-4s %-50s %.10g  [%s %.10g", k.pass ? "ok" : "FAIL", k.name.c_str(), k.value,
                  k.note.c_str(), k.expected);
      if (k.tol > 0.0) std::printf(" +- %g", k.tol);
      std::printf("]\n");
    }
    std::fflush(stdout);
  }
  std::printf("%d of 14 criteria passed\n", 14 - failed);
  return failed ? 1 : 0;
}
