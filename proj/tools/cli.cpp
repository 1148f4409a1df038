#include "cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "pmt/benchbook.hpp"
#include "pmt/format.hpp"
#include "pmt/phase.hpp"

namespace pmt::cli {

namespace {

using Json = nlohmann::ordered_json;

// Flat JSON object -> config items; flags on the command line win.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override {
    return "{}";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw CLI::ConversionError("config file is not valid JSON: " + std::string(e.what()));
    }
    if (!j.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : j.items()) {
      CLI::ConfigItem item;
      item.name = key;
      if (value.is_string())
        item.inputs = {value.get<std::string>()};
      else if (value.is_number_float())
        item.inputs = {format_double(value.get<double>())};
      else
        item.inputs = {value.dump()};
      items.push_back(std::move(item));
    }
    return items;
  }
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Settings {
  double alpha = 0.0;
  std::optional<double> gamma;
  std::string potential;
  double tol = 1e-3;
  int nmax = 22;
  std::size_t induced_depth = 10000;
  double beta_max = 64.0;
  int period_max = 8;
  int neutral_depth = 200;
  unsigned threads = 1;
  std::string format;
  std::string out_path;
  std::string only;

  // decay / dimension / distortion
  int n_lo = 100;
  int n_hi = 10000;
  int branches = 40;
  int depth = 50;
  int samples = 16;

  // trace
  std::string project;

  // scan
  std::string base;
  std::string dir_u;
  std::string dir_v;
  std::string range_u = "0:1:1";
  std::string range_v = "0:1:1";
  bool timing = false;
  bool boundary = false;
  std::string plot_script;
};

// Output sink: JSON documents or CSV tables.
class Emitter {
 public:
  explicit Emitter(bool json) : json_(json) {}
  bool json() const { return json_; }

  static Json number(double v) {
    if (std::isfinite(v)) return v;
    return format_double(v);
  }

  static std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (const char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }

  // one-record output: ordered key/value pairs
  std::string record(const std::vector<std::pair<std::string, Json>>& fields) const {
    std::ostringstream s;
    if (json_) {
      Json o = Json::object();
      for (const auto& [k, v] : fields) o[k] = v;
      s << o.dump(2) << '\n';
    } else {
      for (std::size_t i = 0; i < fields.size(); ++i) s << (i ? "," : "") << fields[i].first;
      s << '\n';
      for (std::size_t i = 0; i < fields.size(); ++i) s << (i ? "," : "") << cell(fields[i].second);
      s << '\n';
    }
    return s.str();
  }

  static std::string cell(const Json& v) {
    if (v.is_string()) return csv_field(v.get<std::string>());
    if (v.is_number_float()) return format_double(v.get<double>());
    return v.dump();
  }

 private:
  bool json_;
};

MapParams make_params(const Settings& s) {
  if (!(s.alpha > 0.0)) throw UsageError("--alpha is required and must be positive");
  return MapParams(s.alpha);
}

Potential need_potential(const Settings& s, const MapParams& p) {
  if (s.potential.empty()) throw UsageError("--potential is required");
  return parse_potential(s.potential, p);
}

double gamma_for(const Settings& s, const Potential& phi, const MapParams& p) {
  return s.gamma ? *s.gamma : natural_exponent(phi, p);
}

EngineOptions engine(const Settings& s) {
  EngineOptions o;
  o.cylinder_depth = s.nmax;
  o.induced_depth = s.induced_depth;
  o.threads = s.threads;
  return o;
}

std::vector<std::pair<std::string, Json>> bracket_fields(const PressureBracket& b) {
  return {{"lower", Emitter::number(b.lower())},
          {"upper", Emitter::number(b.upper())},
          {"excess_lower", Emitter::number(b.excess_lower)},
          {"excess_upper", Emitter::number(b.excess_upper)},
          {"log_excess_lower", Emitter::number(b.log_excess_lower)},
          {"method", to_string(b.method)},
          {"n_used", b.n_used},
          {"certified", b.certified},
          {"stationary", b.stationary}};
}

void append(std::vector<std::pair<std::string, Json>>& a,
            const std::vector<std::pair<std::string, Json>>& b) {
  a.insert(a.end(), b.begin(), b.end());
}

std::vector<std::pair<std::string, Json>> transition_fields(const TransitionBracket& b) {
  return {{"lower", Emitter::number(b.lo)},
          {"upper", b.infinite ? Json("inf") : Emitter::number(b.hi)},
          {"infinite", b.infinite},
          {"stalled", b.stalled},
          {"probes", b.probes}};
}

int cmd_pressure(const Settings& s, const Emitter& em, std::ostream& out) {
  const MapParams p = make_params(s);
  const Potential phi = need_potential(s, p);
  const double g = gamma_for(s, phi, p);
  const PressureBracket b = pressure(phi, p, g, s.tol, engine(s));
  std::vector<std::pair<std::string, Json>> f{{"potential", to_string(phi)},
                                              {"alpha", s.alpha},
                                              {"gamma", g}};
  append(f, bracket_fields(b));
  out << em.record(f);
  return kExitOk;
}

int cmd_classify(const Settings& s, const Emitter& em, std::ostream& out) {
  const MapParams p = make_params(s);
  const Potential phi = need_potential(s, p);
  const double g = gamma_for(s, phi, p);
  const PhaseVerdict v = classify(phi, p, g, s.tol, engine(s));
  std::vector<std::pair<std::string, Json>> f{
      {"potential", to_string(phi)}, {"alpha", s.alpha}, {"gamma", g},
      {"verdict", to_string(v.label)}};
  append(f, bracket_fields(v.evidence));
  out << em.record(f);
  return v.label == Verdict::Undetermined ? kExitUndetermined : kExitOk;
}

int cmd_ct(const Settings& s, const Emitter& em, std::ostream& out) {
  const MapParams p = make_params(s);
  const Potential phi = need_potential(s, p);
  const double g = gamma_for(s, phi, p);
  const TransitionBracket b = ct_bracket(phi, p, g, s.tol, s.beta_max, engine(s));
  std::vector<std::pair<std::string, Json>> f{
      {"potential", to_string(phi)}, {"alpha", s.alpha}, {"gamma", g}};
  append(f, transition_fields(b));
  out << em.record(f);
  return b.stalled ? kExitUndetermined : kExitOk;
}

int cmd_trace(const Settings& s, const Emitter& em, std::ostream& out) {
  const MapParams p = make_params(s);
  Potential phi0 = need_potential(s, p);
  if (!s.gamma) throw UsageError("--gamma is required (exponent of the omega direction)");
  const double g = *s.gamma;
  std::vector<std::pair<std::string, Json>> f{{"alpha", s.alpha}, {"gamma", g}};
  if (!s.project.empty()) {
    const KernelProjection k = kernel_projection(phi0, p, g, periodic_orbit(p, s.project));
    phi0 = k.psi;
    f.push_back({"orbit", s.project});
    f.push_back({"t", k.t});
  }
  f.insert(f.begin(), {"potential", to_string(phi0)});
  const TransitionBracket b = boundary_tau(phi0, p, g, s.tol, engine(s));
  append(f, transition_fields(b));
  out << em.record(f);
  return b.stalled ? kExitUndetermined : kExitOk;
}

int cmd_decay(const Settings& s, const Emitter& em, std::ostream& out) {
  const MapParams p = make_params(s);
  const Potential phi = need_potential(s, p);
  const DecayFit d = decay_fit(phi, p, s.n_lo, s.n_hi);
  out << em.record({{"potential", to_string(phi)},
                    {"alpha", s.alpha},
                    {"n_lo", s.n_lo},
                    {"n_hi", s.n_hi},
                    {"c_fit", Emitter::number(d.c_fit)},
                    {"delta_fit", Emitter::number(d.delta_fit)},
                    {"residual", Emitter::number(d.residual)},
                    {"points", d.points}});
  return kExitOk;
}

int cmd_dimension(const Settings& s, const Emitter& em, std::ostream& out) {
  const MapParams p = make_params(s);
  const DimensionBracket d = hausdorff_subsystem(p, s.branches, s.tol, engine(s));
  out << em.record({{"alpha", s.alpha},
                    {"branches", d.branches},
                    {"lower", d.lo},
                    {"upper", d.hi},
                    {"state_depth", d.depth}});
  return kExitOk;
}

int cmd_distortion(const Settings& s, const Emitter& em, std::ostream& out) {
  const MapParams p = make_params(s);
  const DistortionConstants d = distortion_constants(p, s.depth, s.samples);
  std::vector<std::pair<std::string, Json>> f{{"alpha", s.alpha},
                                              {"depth", d.certified_depth},
                                              {"eps0", Emitter::number(d.eps0)},
                                              {"eps1", Emitter::number(d.eps1)},
                                              {"c1", Emitter::number(d.c1)},
                                              {"d", Emitter::number(d.d)},
                                              {"empirical", d.empirical}};
  if (!s.potential.empty()) {
    const Potential phi = parse_potential(s.potential, p);
    f.push_back({"potential", to_string(phi)});
    f.push_back({"z1_criterion", z1_criterion(phi, p, p.alpha(), s.neutral_depth, d)});
  }
  out << em.record(f);
  return kExitOk;
}

int cmd_ground_state(const Settings& s, const Emitter& em, std::ostream& out) {
  const MapParams p = make_params(s);
  const Potential phi = need_potential(s, p);
  const GroundStateReport r = ground_state_check(phi, p, s.period_max, s.neutral_depth);
  const bool violated = r.status == GroundStateReport::Status::Violated;
  out << em.record({{"potential", to_string(phi)},
                    {"alpha", s.alpha},
                    {"status", violated ? "Violated" : "ConsistentUpTo"},
                    {"witness", r.witness.word},
                    {"witness_period", r.witness.period()},
                    {"witness_average", Emitter::number(r.witness_average)},
                    {"margin", Emitter::number(r.margin)},
                    {"period_max", r.period_max},
                    {"neutral_depth", r.neutral_depth},
                    {"warnings", static_cast<int>(r.warnings.size())}});
  // only a violation is a certificate
  return violated ? kExitOk : kExitUndetermined;
}

struct Axis {
  double lo = 0.0;
  double hi = 0.0;
  int steps = 1;

  double at(int i) const { return steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1); }
};

Axis parse_axis(const std::string& text, const std::string& flag) {
  Axis a;
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> a.lo >> c1 >> a.hi >> c2 >> a.steps) || c1 != ':' || c2 != ':' || a.steps < 1 ||
      !in.eof())
    throw UsageError(flag + " expects min:max:steps with steps >= 1, got '" + text + "'");
  return a;
}

struct ScanRow {
  std::string verdict;
  double lower = 0.0;
  double upper = 0.0;
  double seconds = 0.0;
  std::string note;
};

const char* kPlotScript = R"(# phase-diagram slice from a pmtool scan CSV
import sys
import matplotlib.pyplot as plt
import pandas as pd

rows = pd.read_csv(sys.argv[1], comment="#").dropna(subset=["u", "v"])
colors = {"Intermittent": "tab:red", "StationaryCertified": "tab:blue", "Undetermined": "tab:gray"}
fig, ax = plt.subplots()
for verdict, group in rows.groupby("verdict"):
    ax.scatter(group["u"], group["v"], c=colors.get(verdict, "black"), label=verdict, s=18)
ax.set_xlabel("u")
ax.set_ylabel("v")
ax.legend()
fig.savefig(sys.argv[2] if len(sys.argv) > 2 else "scan.png", dpi=150)
)";

int cmd_scan(const Settings& s, const Emitter& em, std::ostream& out) {
  const MapParams p = make_params(s);
  if (s.dir_u.empty() || s.dir_v.empty()) throw UsageError("scan needs --dir-u and --dir-v");
  const Potential base = s.base.empty() ? Potential::constant(0.0) : parse_potential(s.base, p);
  const Potential du = parse_potential(s.dir_u, p);
  const Potential dv = parse_potential(s.dir_v, p);
  const Axis au = parse_axis(s.range_u, "--u");
  const Axis av = parse_axis(s.range_v, "--v");
  const double g = s.gamma ? *s.gamma : natural_exponent(base + du + dv, p);

  EngineOptions opts = engine(s);
  opts.threads = 1;  // parallelism is across grid points
  const std::size_t n = static_cast<std::size_t>(au.steps) * av.steps;
  std::vector<ScanRow> rows(n);
  parallel_for(n, s.threads, [&](std::size_t k) {
    const int iu = static_cast<int>(k / av.steps);
    const int iv = static_cast<int>(k % av.steps);
    const auto t0 = std::chrono::steady_clock::now();
    ScanRow& r = rows[k];
    try {
      const Potential phi = base + au.at(iu) * du + av.at(iv) * dv;
      const PhaseVerdict v = classify(phi, p, g, s.tol, opts);
      r.verdict = to_string(v.label);
      r.lower = v.evidence.lower();
      r.upper = v.evidence.upper();
    } catch (const std::exception& e) {
      r.verdict = "error";
      r.lower = r.upper = std::nan("");
      r.note = e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  });

  // tau_0 per column when the u direction is omega(gamma)
  struct Column {
    double v;
    TransitionBracket tau;
    std::string note;
  };
  std::vector<Column> columns;
  if (s.boundary) {
    if (du.kind() != Potential::Kind::Omega)
      throw UsageError("--boundary needs --dir-u to be omega(g)");
    columns.resize(av.steps);
    parallel_for(columns.size(), s.threads, [&](std::size_t iv) {
      Column& c = columns[iv];
      c.v = av.at(static_cast<int>(iv));
      try {
        c.tau = boundary_tau(base + c.v * dv, p, du.value(), s.tol, opts);
      } catch (const std::exception& e) {
        c.note = e.what();
      }
    });
  }

  if (em.json()) {
    Json doc = Json::object();
    Json pts = Json::array();
    for (std::size_t k = 0; k < n; ++k) {
      Json row = {{"u", au.at(static_cast<int>(k / av.steps))},
                  {"v", av.at(static_cast<int>(k % av.steps))},
                  {"verdict", rows[k].verdict},
                  {"P_lower", Emitter::number(rows[k].lower)},
                  {"P_upper", Emitter::number(rows[k].upper)}};
      if (s.timing) row["wall_time"] = rows[k].seconds;
      if (!rows[k].note.empty()) row["note"] = rows[k].note;
      pts.push_back(row);
    }
    doc["points"] = pts;
    if (s.boundary) {
      Json cols = Json::array();
      for (const auto& c : columns) {
        Json col{{"v", c.v}};
        for (const auto& [k, val] : transition_fields(c.tau)) col[k] = val;
        if (!c.note.empty()) col["note"] = c.note;
        cols.push_back(col);
      }
      doc["boundary"] = cols;
    }
    out << doc.dump(2) << '\n';
  } else {
    out << "u,v,verdict,P_lower,P_upper" << (s.timing ? ",wall_time" : "") << ",note\n";
    for (std::size_t k = 0; k < n; ++k) {
      out << format_double(au.at(static_cast<int>(k / av.steps))) << ','
          << format_double(av.at(static_cast<int>(k % av.steps))) << ',' << rows[k].verdict << ','
          << format_double(rows[k].lower) << ',' << format_double(rows[k].upper);
      if (s.timing) out << ',' << format_double(rows[k].seconds);
      out << ',' << Emitter::csv_field(rows[k].note) << '\n';
    }
    if (s.boundary) {
      out << "# boundary\nv,tau0_lower,tau0_upper,stalled,note\n";
      for (const auto& c : columns)
        out << format_double(c.v) << ',' << format_double(c.tau.lo) << ','
            << format_double(c.tau.hi) << ',' << (c.tau.stalled ? "true" : "false") << ','
            << Emitter::csv_field(c.note) << '\n';
    }
  }
  if (!s.plot_script.empty()) {
    std::ofstream script(s.plot_script);
    if (!script) throw UsageError("cannot write " + s.plot_script);
    script << kPlotScript;
  }
  return kExitOk;
}

int cmd_validate(const Settings& s, std::ostream& out) {
  bench::BenchOptions opts;
  opts.threads = 1;
  const auto report = s.only.empty() ? bench::run_all(opts) : bench::run_scenario(s.only, opts);
  out << bench::to_json(report) << '\n';
  return bench::all_passed(report) ? kExitOk : kExitFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"pressure and phase-transition toolkit for x(1 + x^alpha) mod 1", "pmtool"};
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON file with flag values (flags override)");
  app.require_subcommand(1);
  app.fallthrough();

  Settings s;
  app.add_option("--alpha", s.alpha, "map exponent alpha > 0");
  app.add_option("--gamma", s.gamma, "Hoelder exponent (default: the potential's natural one)");
  app.add_option("--potential", s.potential, "potential expression, e.g. 0.5*omega(1)+logdf");
  app.add_option("--tol", s.tol, "target bracket width");
  app.add_option("--nmax", s.nmax, "cylinder depth");
  app.add_option("--induced-depth", s.induced_depth, "return-time cutoff of the induced engine");
  app.add_option("--beta-max", s.beta_max, "cap of the temperature search");
  app.add_option("--period-max", s.period_max, "largest period for ground-state checks");
  app.add_option("--neutral-depth", s.neutral_depth, "neutral orbit depth");
  app.add_option("--threads", s.threads, "worker threads");
  app.add_option("--format", s.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", s.out_path, "write output to PATH");
  app.add_option("--only", s.only, "validate: run one scenario");
  app.add_option("--n-lo", s.n_lo, "decay: first n");
  app.add_option("--n-hi", s.n_hi, "decay: last n");
  app.add_option("--branches", s.branches, "dimension: number of return branches");
  app.add_option("--depth", s.depth, "distortion: depth N");
  app.add_option("--samples", s.samples, "distortion: samples per level");
  app.add_option("--project", s.project, "trace: project onto the kernel of this periodic orbit");
  app.add_option("--base", s.base, "scan: base potential");
  app.add_option("--dir-u", s.dir_u, "scan: direction of u");
  app.add_option("--dir-v", s.dir_v, "scan: direction of v");
  app.add_option("--u", s.range_u, "scan: u grid min:max:steps");
  app.add_option("--v", s.range_v, "scan: v grid min:max:steps");
  app.add_flag("--timing", s.timing, "scan: add wall_time (not reproducible)");
  app.add_flag("--boundary", s.boundary, "scan: append tau_0 per v column");
  app.add_option("--plot-script", s.plot_script, "scan: write a matplotlib script to PATH");

  const std::vector<std::pair<std::string, std::string>> commands{
      {"pressure", "certified pressure bracket"},
      {"classify", "intermittent / stationary verdict"},
      {"ct", "temperature transition parameter"},
      {"trace", "boundary parameter tau_0 along omega(gamma)"},
      {"decay", "power-law fit of the neutral weights"},
      {"dimension", "dimension of the finite return subsystem"},
      {"distortion", "empirical distortion constants"},
      {"ground-state", "periodic orbits that beat the fixed point 0"},
      {"scan", "phase-diagram grid"},
      {"validate", "run the benchbook"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  const bool json = s.format.empty() ? cmd != "scan" : s.format == "json";
  const Emitter em(json);
  std::ostringstream buf;
  int code = kExitOk;
  try {
    if (cmd == "pressure") code = cmd_pressure(s, em, buf);
    else if (cmd == "classify") code = cmd_classify(s, em, buf);
    else if (cmd == "ct") code = cmd_ct(s, em, buf);
    else if (cmd == "trace") code = cmd_trace(s, em, buf);
    else if (cmd == "decay") code = cmd_decay(s, em, buf);
    else if (cmd == "dimension") code = cmd_dimension(s, em, buf);
    else if (cmd == "distortion") code = cmd_distortion(s, em, buf);
    else if (cmd == "ground-state") code = cmd_ground_state(s, em, buf);
    else if (cmd == "scan") code = cmd_scan(s, em, buf);
    else code = cmd_validate(s, buf);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const BudgetError& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return kExitBudget;
  } catch (const bench::UnknownScenario& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {  // parse errors, exponent mismatches, domains
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }

  if (s.out_path.empty()) {
    out << buf.str();
  } else {
    std::ofstream f(s.out_path, std::ios::binary);
    if (!f) {
      err << "error: cannot write " << s.out_path << '\n';
      return kExitUsage;
    }
    f << buf.str();
  }
  return code;
}

}  // namespace pmt::cli
