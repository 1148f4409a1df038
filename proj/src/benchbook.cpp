#include "pmt/benchbook.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <json.hpp>

#include "pmt/format.hpp"
#include "pmt/neutral_series.hpp"
#include "pmt/phase.hpp"

namespace pmt::bench {

namespace {

std::string interval(double lo, double hi) {
  return "[" + format_double(lo) + ", " + format_double(hi) + "]";
}

std::string interval(const PressureBracket& b) { return interval(b.lower(), b.upper()); }

std::string interval(const TransitionBracket& b) {
  return b.infinite ? "[" + format_double(b.lo) + ", inf]" : interval(b.lo, b.hi);
}

// Collects the checks of one scenario.
class Book {
 public:
  Book(std::string scenario, const BenchOptions& opts) : scenario_(std::move(scenario)) {
    engine_.threads = opts.threads;
  }

  void add(std::string check, std::string expected, std::string got, bool pass,
           std::string ref) {
    out_.push_back({scenario_, std::move(check), std::move(expected), std::move(got), pass,
                    std::move(ref)});
  }

  const EngineOptions& engine() const { return engine_; }
  std::vector<Check> take() { return std::move(out_); }

 private:
  std::string scenario_;
  EngineOptions engine_;
  std::vector<Check> out_;
};

Potential parse(const std::string& text, const MapParams& p) { return parse_potential(text, p); }

void entropy(Book& book) {
  const MapParams p(1.0);
  const PressureBracket b = pressure(parse("const(0)", p), p, 1.0, 1e-3, book.engine());
  book.add("P(0) contains log 2, width <= 1e-3", "log 2 = " + format_double(std::log(2.0)),
           interval(b), b.contains(std::log(2.0)) && b.width() <= 1e-3,
           "sup of the entropy over invariant measures is log 2");
}

void geometric(Book& book) {
  const MapParams p(0.8);
  const double g = 0.8;
  const auto half = pressure(parse("0.5*logdf", p), p, g, 1e-3, book.engine());
  book.add("alpha=0.8: P(-0.5 log Df) > 0", "lower > 0", interval(half),
           half.excess_positive() && half.lower() > 0.0,
           "P(-t log Df) > 0 for t < 1");
  const auto one = pressure(parse("logdf", p), p, g, 1e-3, book.engine());
  book.add("alpha=0.8: P(-log Df) <= 0.02", "upper <= 0.02", interval(one),
           one.upper() <= 0.02, "P(-t log Df) = 0 for t >= 1");
  const auto big = pressure(parse("1.5*logdf", p), p, g, 1e-3, book.engine());
  book.add("alpha=0.8: P(-1.5 log Df) contains 0", "0 in bracket, lower >= -1e-9",
           interval(big), big.contains(0.0) && big.lower() >= -1e-9,
           "P(-t log Df) = 0 for t >= 1");
}

void temperature(Book& book) {
  for (const double a : {0.8, 1.0}) {
    const MapParams p(a);
    const auto b = ct_bracket(parse("logdf", p), p, a, 0.05, 8.0, book.engine());
    book.add("alpha=" + format_double(a) + ": ct(-log Df) contains 1, width <= 0.1",
             "1 in bracket", interval(b),
             !b.infinite && b.lo <= 1.0 && 1.0 <= b.hi && b.width() <= 0.1,
             "ct(-log Df) = 1");
  }
}

void hook(Book& book) {
  {
    const MapParams p(0.5);
    for (const double beta : {0.5, 1.0, 2.0}) {
      const Potential phi = beta * Potential::omega(1.0);
      const auto z = hook_zeta(p, beta, 1.0, 100000);
      const double bound = std::log1p(std::exp(-z.upper));
      const auto b = pressure(phi, p, 1.0, 1e-3, book.engine());
      book.add("alpha=0.5: P(" + format_double(beta) + " omega(1)) >= log(1+exp(-zeta))",
               ">= " + format_double(bound), interval(b), b.lower() >= bound,
               "P(b omega_g) >= log(1 + exp(-b sum_j x_j^g)) for g > alpha");
    }
    const auto ct = ct_bracket(Potential::omega(1.0), p, 1.0, 0.05, 256.0, book.engine());
    book.add("alpha=0.5: ct(omega(1)) infinite at beta_max 256", "inf", interval(ct),
             ct.infinite, "no temperature transition for omega_g with g > alpha");
  }
  {
    const MapParams p(1.0);
    double found = -1.0;
    std::string got = "none";
    for (double beta = 1.0; beta <= 64.0; beta *= 2.0) {
      const auto xi = xi_series(p, beta, 0.5, 100000);
      if (!(xi.upper < 1.0)) continue;
      const auto v = classify(beta * Potential::omega(0.5), p, 0.5, 1e-3, book.engine());
      got = "beta=" + format_double(beta) + " xi<=" + format_double(xi.upper) + " " +
            to_string(v.label);
      if (v.label == Verdict::StationaryCertified) {
        found = beta;
        break;
      }
    }
    book.add("alpha=1: some beta <= 64 certifies b omega(0.5) stationary",
             "StationaryCertified", got, found > 0.0,
             "sum_j exp(-b sum_{i<=j} x_i^g) < 1 implies P(b omega_g) = 0");
  }
}

void non_temperature(Book& book) {
  const MapParams p(1.0);
  const auto neg = classify(parse("-0.5*omega(0.5)+2*logdf", p), p, 0.5, 1e-3, book.engine());
  book.add("tau=-0.5 is intermittent", "Intermittent", to_string(neg.label),
           neg.label == Verdict::Intermittent,
           "tau omega_g - b log Df is intermittent for tau < 0");
  const auto pos = classify(parse("0.5*omega(0.5)+2*logdf", p), p, 0.5, 1e-3, book.engine());
  book.add("tau=+0.5 is not intermittent", "not Intermittent", to_string(pos.label),
           pos.label != Verdict::Intermittent,
           "tau omega_g - b log Df is not intermittent for tau >= 0, b >= 1");
  const auto ct = ct_bracket(parse("2*logdf", p), p, 0.5, 0.05, 8.0, book.engine());
  book.add("ct(-2 log Df) contains 1/2", "0.5 in bracket", interval(ct),
           !ct.infinite && ct.lo <= 0.5 && 0.5 <= ct.hi, "ct(b phi) = ct(phi) / b");
}

void ground_state(Book& book) {
  const MapParams p(1.0);
  const auto bad = ground_state_check(parse("-0.5*omega(0.5)+logdf", p), p, 8, 400);
  const bool neutral_witness = bad.witness.word.size() >= 2 &&
                               bad.witness.word.back() == '1' &&
                               bad.witness.word.find('1') == bad.witness.word.size() - 1;
  book.add("tau=-0.5: periodic witness beats delta_0", "Violated",
           bad.status == GroundStateReport::Status::Violated
               ? "Violated by period " + std::to_string(bad.witness.period()) + ", average " +
                     format_double(bad.witness_average)
               : "ConsistentUpTo",
           bad.status == GroundStateReport::Status::Violated && neutral_witness,
           "some p_n in J_{n-1} has average above phi(0)");
  for (const std::string text : {"omega(0.5)", "logdf"}) {
    const auto r = ground_state_check(parse(text, p), p, 8, 400);
    book.add(text + ": no periodic orbit beats delta_0", "ConsistentUpTo",
             r.status == GroundStateReport::Status::Violated ? "Violated" : "ConsistentUpTo",
             r.status == GroundStateReport::Status::ConsistentUpTo,
             "phi <= phi(0) pointwise");
  }
}

const std::vector<std::string>& bench_set() {
  static const std::vector<std::string> set{"const(0)", "const(0.3)", "logdf", "0.7*omega(0.5)",
                                            "0.7*omega(0.5)+0.2*logdf+const(0.1)"};
  return set;
}

void periodic_averages(Book& book) {
  for (const double a : {0.5, 1.0}) {
    const MapParams p(a);
    const auto orbits = periodic_orbits(p, 8);
    for (const auto& text : bench_set()) {
      const Potential phi = parse(text, p);
      const auto b = pressure(phi, p, 0.5, 1e-2, book.engine());
      double worst = -kInf;
      std::string word;
      for (const auto& o : orbits) {
        const double avg = o.average(phi, p);
        if (avg > worst) {
          worst = avg;
          word = o.word;
        }
      }
      book.add("alpha=" + format_double(a) + ", " + text + ": periodic averages <= P",
               "<= " + format_double(b.lower()) + " + 1e-6",
               format_double(worst) + " (" + word + ")", worst <= b.lower() + 1e-6,
               "P(phi) > integral of phi against any periodic measure");
    }
  }
}

void cross_engine(Book& book) {
  for (const double a : {0.5, 1.0}) {
    const MapParams p(a);
    for (const auto& text : bench_set()) {
      const Potential phi = parse(text, p);
      const auto ind = pressure_induced(phi, p, book.engine().induced_depth, book.engine());
      const auto cyl = pressure_cylinder(phi, p, 0.5, 18, book.engine());
      std::string got = interval(ind) + " vs " + interval(cyl);
      bool ok = true;
      try {
        (void)intersect(ind, cyl);
      } catch (const InconsistentBrackets&) {
        ok = false;
      }
      book.add("alpha=" + format_double(a) + ", " + text + ": engines overlap", "overlap",
               got, ok, "both brackets contain P(phi)");
    }
  }
}

void boundary(Book& book) {
  const MapParams p(0.5);
  const Potential zero = parse("const(0)", p);
  const auto b = boundary_tau(zero, p, 0.5, 0.02, book.engine());
  book.add("tau_0 bracket of omega(0.5) from 0", "finite, lo > 0, width <= 0.05", interval(b),
           !b.infinite && b.lo > 0.0 && b.width() <= 0.05,
           "tau_0 > 0 since g(0) = log 2");
  std::vector<double> taus;
  for (int i = 0; i <= 12; ++i) taus.push_back(0.1 * i);
  const auto g = g_profile(zero, p, 0.5, taus, book.engine());
  bool mono = true;
  for (std::size_t i = 1; i < g.size(); ++i) mono = mono && g[i].g_lower <= g[i - 1].g_upper;
  book.add("g(tau) nonincreasing on [0, 1.2]", "nonincreasing within brackets",
           interval(g.front().g_lower, g.front().g_upper) + " ... " +
               interval(g.back().g_lower, g.back().g_upper),
           mono, "g(tau) = P(psi_tau) - psi_tau(0) is nonincreasing");
}

void decay(Book& book) {
  for (const double a : {0.5, 1.0}) {
    const MapParams p(a);
    const auto f = decay_fit(parse("logdf", p), p, 100, 10000);
    const double want = 1.0 + 1.0 / a;
    book.add("alpha=" + format_double(a) + ": decay of zeta_n for -log Df",
             format_double(want) + " +- 20%", format_double(f.delta_fit),
             std::abs(f.delta_fit - want) <= 0.2 * want, "Df^n(x_n) ~ n^{1+1/alpha}");
    for (const double beta : {1.0, 2.0}) {
      const auto h = decay_fit(beta * Potential::omega(a), p, 100, 10000);
      const double w = beta / a;
      book.add("alpha=" + format_double(a) + ": decay for " + format_double(beta) +
                   " omega(alpha)",
               format_double(w) + " +- 20%", format_double(h.delta_fit),
               std::abs(h.delta_fit - w) <= 0.2 * w, "S_n(omega_alpha)(x_n) ~ -log(n) / alpha");
    }
  }
}

void neutral(Book& book) {
  for (const double a : {0.5, 1.0}) {
    const MapParams p(a);
    const auto orbit = neutral_orbit(p, 200000);
    const double v1 = 1e5 * std::pow(orbit[100000], a);
    const double v2 = 2e5 * std::pow(orbit[200000], a);
    const double want = 1.0 / a;
    book.add("alpha=" + format_double(a) + ": n x_n^alpha at 1e5",
             format_double(want) + " +- 5%, drift < 1%",
             format_double(v1) + ", " + format_double(v2),
             std::abs(v1 - want) <= 0.05 * want && std::abs(v2 - v1) < 0.01 * v1,
             "n x_n^alpha -> 1/alpha");
  }
}

void dimension(Book& book) {
  const MapParams p(0.5);
  double prev_lo = 0.0, prev_hi = 0.0;
  bool mono = true;
  DimensionBracket last;
  for (const int n : {1, 2, 5, 10, 20, 40}) {
    last = hausdorff_subsystem(p, n, 1e-4, book.engine());
    if (n == 1)
      book.add("one branch has dimension 0", "[0, 0]", interval(last.lo, last.hi),
               last.lo == 0.0 && last.hi == 0.0, "a single fixed point has dimension 0");
    mono = mono && last.lo >= prev_lo - 1e-4 && last.hi >= prev_hi - 1e-4;
    prev_lo = last.lo;
    prev_hi = last.hi;
  }
  book.add("dimension brackets nondecreasing in n", "nondecreasing", mono ? "yes" : "no", mono,
           "K_n increase with n");
  book.add("alpha=0.5, n=40: dimension >= 0.9", ">= 0.9", interval(last.lo, last.hi),
           last.lo >= 0.9, "sup_n HD(K_n) = 1");
}

using Runner = std::function<void(Book&)>;

const std::vector<std::pair<std::string, Runner>>& registry() {
  static const std::vector<std::pair<std::string, Runner>> r{
      {"entropy", entropy},
      {"geometric", geometric},
      {"temperature", temperature},
      {"hook", hook},
      {"non-temperature-pt", non_temperature},
      {"ground-state-violation", ground_state},
      {"key-lemma", periodic_averages},
      {"cross-engine", cross_engine},
      {"boundary-tau", boundary},
      {"decay", decay},
      {"neutral-asymptotics", neutral},
      {"dimension", dimension},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, run] : registry()) n.push_back(name);
    return n;
  }();
  return names;
}

std::vector<Check> run_scenario(const std::string& name, const BenchOptions& opts) {
  for (const auto& [n, run] : registry()) {
    if (n != name) continue;
    Book book(name, opts);
    run(book);
    return book.take();
  }
  throw UnknownScenario("unknown scenario '" + name + "'");
}

std::vector<Check> run_all(const BenchOptions& opts) {
  std::vector<Check> all;
  for (const auto& name : scenario_names()) {
    auto part = run_scenario(name, opts);
    all.insert(all.end(), part.begin(), part.end());
  }
  return all;
}

bool all_passed(const std::vector<Check>& report) {
  return std::all_of(report.begin(), report.end(), [](const Check& c) { return c.pass; });
}

std::string to_json(const std::vector<Check>& report) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& c : report)
    arr.push_back({{"scenario", c.scenario},
                   {"check", c.check},
                   {"expected", c.expected},
                   {"got", c.got},
                   {"pass", c.pass},
                   {"paper_ref", c.paper_ref}});
  return arr.dump(2);
}

}  // namespace pmt::bench
