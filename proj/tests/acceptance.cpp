// One line per acceptance criterion; exit status 0 iff all pass.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "pmt/format.hpp"
#include "pmt/neutral_series.hpp"
#include "pmt/phase.hpp"

using namespace pmt;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
    if (!ok) {
      pass = false;
      detail += " FAILED";
    }
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string range(double lo, double hi) { return "[" + fmt(lo) + ", " + fmt(hi) + "]"; }

EngineOptions serial() {
  EngineOptions o;
  o.threads = 1;
  return o;
}

const std::vector<std::string> kBenchSet{"const(0)", "const(0.3)", "logdf", "0.7*omega(0.5)",
                                         "0.7*omega(0.5)+0.2*logdf+const(0.1)"};

Outcome entropy() {
  Outcome o;
  const MapParams p(1.0);
  const auto b = pressure(Potential::constant(0.0), p, 1.0, 1e-3, serial());
  o.require(b.contains(std::log(2.0)), "P(0) " + range(b.lower(), b.upper()) + " contains log 2");
  o.require(b.width() <= 1e-3, "width " + fmt(b.width()) + " <= 1e-3");
  return o;
}

Outcome geometric() {
  Outcome o;
  const MapParams p(0.8);
  const auto half = pressure(0.5 * Potential::neg_log_df(), p, 0.8, 1e-3, serial());
  o.require(half.excess_positive() && half.lower() > 0.0,
            "P(-0.5 log Df) lower " + fmt(half.lower()) + " > 0");
  const auto one = pressure(Potential::neg_log_df(), p, 0.8, 1e-3, serial());
  o.require(one.upper() <= 0.02, "P(-log Df) upper " + fmt(one.upper()) + " <= 0.02");
  const auto big = pressure(1.5 * Potential::neg_log_df(), p, 0.8, 1e-3, serial());
  o.require(big.contains(0.0) && big.lower() >= -1e-9,
            "P(-1.5 log Df) " + range(big.lower(), big.upper()) + " contains 0, lower >= -1e-9");
  return o;
}

Outcome temperature() {
  Outcome o;
  for (const double a : {0.8, 1.0}) {
    const MapParams p(a);
    const auto b = ct_bracket(Potential::neg_log_df(), p, a, 0.05, 8.0, serial());
    o.require(!b.infinite && b.lo <= 1.0 && 1.0 <= b.hi,
              "alpha=" + fmt(a) + " ct(-log Df) " + range(b.lo, b.hi) + " contains 1");
    o.require(b.width() <= 0.1, "width " + fmt(b.width()) + " <= 0.1");
  }
  return o;
}

Outcome omega_dichotomy() {
  Outcome o;
  const MapParams h(0.5);
  const auto ct = ct_bracket(Potential::omega(1.0), h, 1.0, 0.05, 256.0, serial());
  o.require(ct.infinite, "alpha=0.5 ct(omega(1)) infinite at beta_max 256");
  for (const double beta : {0.5, 1.0, 2.0}) {
    const double bound = std::log1p(std::exp(-hook_zeta(h, beta, 1.0, 100000).upper));
    const auto b = pressure(beta * Potential::omega(1.0), h, 1.0, 1e-2, serial());
    o.require(b.lower() >= bound,
              "P(" + fmt(beta) + " omega(1)) lower " + fmt(b.lower()) + " >= " + fmt(bound));
  }
  const MapParams p(1.0);
  double certified = -1.0;
  for (double beta = 1.0; beta <= 64.0 && certified < 0.0; beta *= 2.0) {
    if (!(xi_series(p, beta, 0.5, 100000).upper < 1.0)) continue;
    if (classify(beta * Potential::omega(0.5), p, 0.5, 1e-3, serial()).label ==
        Verdict::StationaryCertified)
      certified = beta;
  }
  o.require(certified > 0.0, "alpha=1 first stationary beta = " + fmt(certified) + " <= 64");
  return o;
}

Outcome cross_engine() {
  Outcome o;
  int overlaps = 0, total = 0;
  for (const double a : {0.5, 1.0}) {
    const MapParams p(a);
    for (const auto& text : kBenchSet) {
      const Potential phi = parse_potential(text, p);
      const auto ind = pressure_induced(phi, p, 10000, serial());
      const auto cyl = pressure_cylinder(phi, p, 0.5, 18, serial());
      ++total;
      try {
        (void)intersect(ind, cyl);
        ++overlaps;
      } catch (const InconsistentBrackets& e) {
        o.require(false, e.what());
      }
    }
  }
  o.require(overlaps == total, std::to_string(overlaps) + "/" + std::to_string(total) + " overlap");
  return o;
}

Outcome periodic_averages() {
  Outcome o;
  double worst_gap = -kInf;
  for (const double a : {0.5, 1.0}) {
    const MapParams p(a);
    const auto orbits = periodic_orbits(p, 8);
    for (const auto& text : kBenchSet) {
      const Potential phi = parse_potential(text, p);
      const double lower = pressure(phi, p, 0.5, 1e-2, serial()).lower();
      for (const auto& orb : orbits) {
        const double gap = orb.average(phi, p) - lower;
        worst_gap = std::max(worst_gap, gap);
        if (gap > 1e-6)
          o.require(false, "alpha=" + fmt(a) + " " + text + " orbit " + orb.word);
      }
    }
  }
  o.require(worst_gap <= 1e-6, "max(average - P lower) = " + fmt(worst_gap) + " <= 1e-6");
  return o;
}

Outcome boundary() {
  Outcome o;
  const MapParams p(0.5);
  const auto b = boundary_tau(Potential::constant(0.0), p, 0.5, 0.02, serial());
  o.require(!b.infinite && std::isfinite(b.hi) && b.lo > 0.0 && b.width() <= 0.05,
            "tau_0 " + range(b.lo, b.hi) + " finite, lo > 0, width <= 0.05");
  std::vector<double> taus;
  for (int i = 0; i <= 12; ++i) taus.push_back(0.1 * i);
  const auto g = g_profile(Potential::constant(0.0), p, 0.5, taus, serial());
  bool mono = true;
  for (std::size_t i = 1; i < g.size(); ++i) mono = mono && g[i].g_lower <= g[i - 1].g_upper;
  o.require(mono, "g(tau) nonincreasing on 13 grid points");
  return o;
}

Outcome decay() {
  Outcome o;
  for (const double a : {0.5, 1.0}) {
    const MapParams p(a);
    const double geo = decay_fit(Potential::neg_log_df(), p, 100, 10000).delta_fit;
    o.require(std::abs(geo - (1 + 1 / a)) <= 0.2 * (1 + 1 / a),
              "alpha=" + fmt(a) + " -log Df: " + fmt(geo) + " vs " + fmt(1 + 1 / a));
    for (const double beta : {1.0, 2.0}) {
      const double d = decay_fit(beta * Potential::omega(a), p, 100, 10000).delta_fit;
      o.require(std::abs(d - beta / a) <= 0.2 * beta / a,
                fmt(beta) + " omega(" + fmt(a) + "): " + fmt(d) + " vs " + fmt(beta / a));
    }
  }
  return o;
}

Outcome neutral() {
  Outcome o;
  for (const double a : {0.5, 0.8, 1.0}) {
    const MapParams p(a);
    const NeutralOrbit x = neutral_orbit(p, 200000);
    const double v = 1e5 * std::pow(x[100000], a);
    const double w = 2e5 * std::pow(x[200000], a);
    o.require(std::abs(v - 1 / a) <= 0.05 / a && std::abs(w - v) < 0.01 * v,
              "alpha=" + fmt(a) + ": " + fmt(v) + " -> " + fmt(w) + " vs " + fmt(1 / a));
  }
  return o;
}

// Random combinations of atoms with coefficients in [-2, 2].
Outcome soundness() {
  Outcome o;
  std::mt19937_64 rng(20261014);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  std::uniform_int_distribution<int> pick(0, 3);
  const double alphas[] = {0.5, 0.8, 1.0};
  const double gammas[] = {0.3, 0.5, 0.8, 1.0};

  std::vector<EngineOptions> budgets(3, serial());
  budgets[0].induced_depth = 1000, budgets[0].induced_branching = 32, budgets[0].induced_refined = 4,
  budgets[0].cylinder_depth = 10;
  budgets[1].induced_depth = 3000, budgets[1].induced_branching = 48, budgets[1].induced_refined = 6,
  budgets[1].cylinder_depth = 12;
  budgets[2].induced_depth = 10000, budgets[2].cylinder_depth = 14;

  int conflicts = 0, scaled = 0, scale_fail = 0, shift_fail = 0;
  for (int i = 0; i < 200; ++i) {
    const MapParams p(alphas[pick(rng) % 3]);
    Potential phi = coef(rng) * Potential::omega(gammas[pick(rng)]);
    phi = phi + std::abs(coef(rng)) * Potential::neg_log_df();
    if (pick(rng) >= 2) phi = phi + coef(rng) * Potential::omega(gammas[pick(rng)]);
    phi = phi + Potential::constant(coef(rng));
    const double g = natural_exponent(phi, p);

    bool intermittent = false, stationary = false;
    for (const auto& b : budgets) {
      const Verdict v = classify(phi, p, g, 1e-3, b).label;
      intermittent = intermittent || v == Verdict::Intermittent;
      stationary = stationary || v == Verdict::StationaryCertified;
    }
    if (intermittent && stationary) {
      ++conflicts;
      o.require(false, "conflicting verdicts for " + to_string(phi));
    }

    const auto c1 = ct_bracket(phi, p, g, 0.1, 8.0, budgets[0]);
    const auto c2 = ct_bracket(2.0 * phi, p, g, 0.05, 4.0, budgets[0]);
    if (c1.infinite != c2.infinite) {
      ++scale_fail;
    } else if (!c1.infinite) {
      ++scaled;
      // [lo2, hi2] and [lo1/2, hi1/2] must overlap
      if (c2.lo > c1.hi / 2 + 1e-12 || c1.lo / 2 > c2.hi + 1e-12) ++scale_fail;
    }

    const double shift = coef(rng);
    const auto base = pressure_induced(phi, p, 1000, budgets[0]);
    const auto moved = pressure_induced(phi + Potential::constant(shift), p, 1000, budgets[0]);
    if (std::abs(moved.lower() - base.lower() - shift) > 1e-9 ||
        std::abs(moved.upper() - base.upper() - shift) > 1e-9)
      ++shift_fail;
  }
  o.require(conflicts == 0, "0 of 200 with conflicting certificates");
  o.require(scale_fail == 0, "ct(2 phi) = ct(phi)/2 on " + std::to_string(scaled) +
                                 " finite brackets, " + std::to_string(scale_fail) + " mismatches");
  o.require(shift_fail == 0, "constant shift to 1e-9, " + std::to_string(shift_fail) + " misses");
  return o;
}

Outcome ground_state() {
  Outcome o;
  const MapParams p(1.0);
  using S = GroundStateReport::Status;
  const auto bad =
      ground_state_check(parse_potential("-0.5*omega(0.5)+logdf", p), p, 8, 400);
  o.require(bad.status == S::Violated && !bad.witness.points.empty(),
            "tau=-0.5 Violated by period-" + std::to_string(bad.witness.period()) +
                " orbit, average " + fmt(bad.witness_average));
  o.require(ground_state_check(Potential::omega(0.5), p, 8, 400).status == S::ConsistentUpTo,
            "omega(0.5) consistent");
  o.require(ground_state_check(Potential::neg_log_df(), p, 8, 400).status == S::ConsistentUpTo,
            "-log Df consistent");
  return o;
}

Outcome determinism() {
  Outcome o;
  auto scan = [](const char* threads) {
    std::ostringstream out, err;
    const int code = cli::run({"scan", "--alpha", "1", "--gamma", "0.5", "--dir-u", "omega(0.5)",
                               "--dir-v", "logdf", "--u=-1:1:11", "--v", "0:2:11",
                               "--induced-depth", "1000", "--threads", threads},
                              out, err);
    return std::pair{code, out.str()};
  };
  const auto [c1, s1] = scan("1");
  const auto [c8, s8] = scan("8");
  o.require(c1 == 0 && c8 == 0, "exit codes " + std::to_string(c1) + ", " + std::to_string(c8));
  o.require(std::count(s1.begin(), s1.end(), '\n') == 122, "122 CSV lines");
  o.require(s1 == s8, "threads 1 and 8 byte-identical");
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double time_limit;  // seconds, 0 = none
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "entropy", 10, entropy},
      {2, "geometric potential", 60, geometric},
      {3, "temperature transition of -log Df", 120, temperature},
      {4, "omega dichotomy", 120, omega_dichotomy},
      {5, "cross-engine agreement", 0, cross_engine},
      {6, "periodic averages below pressure", 0, periodic_averages},
      {7, "boundary tracer", 0, boundary},
      {8, "decay diagnostics", 0, decay},
      {9, "neutral-orbit asymptotics", 0, neutral},
      {10, "certificate soundness suite", 0, soundness},
      {11, "ground-state witness", 0, ground_state},
      {12, "scan determinism", 0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit > 0) out.require(secs <= c.time_limit, "runtime <= " + fmt(c.time_limit) + " s");
    if (!out.pass) ++failed;
    std::printf("[%s] criterion %2d %s: %s (%.1f s)\n", out.pass ? "PASS" : "FAIL", c.id, c.name,
                out.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
