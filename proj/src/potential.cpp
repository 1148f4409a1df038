#include "pmt/potential.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pmt/format.hpp"

namespace pmt {

// ---------------------------------------------------------------- tables

double TableData::eval(double x) const {
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  if (it == xs.begin()) return values.front();
  if (it == xs.end()) return values.back();
  const std::size_t i = static_cast<std::size_t>(it - xs.begin());
  const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return values[i - 1] + t * (values[i] - values[i - 1]);
}

double TableData::sup_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

std::shared_ptr<const TableData> make_table(std::vector<double> xs, std::vector<double> values,
                                            double gamma, double seminorm, std::string path) {
  if (xs.size() != values.size() || xs.size() < 2)
    throw std::invalid_argument("table: need at least two samples");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1])) throw std::invalid_argument("table: x must be strictly increasing");
  if (xs.front() > 0.0 || xs.back() < 1.0)
    throw std::invalid_argument("table: samples must cover [0,1]");
  for (double v : values)
    if (!std::isfinite(v)) throw std::invalid_argument("table: non-finite value");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("table: gamma must be in (0,1]");
  if (!(seminorm >= 0.0)) throw std::invalid_argument("table: seminorm must be >= 0");

  auto t = std::make_shared<TableData>();
  t->path = std::move(path);
  t->gamma = gamma;
  t->seminorm = seminorm;
  double s = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j)
      s = std::max(s, std::abs(values[j] - values[i]) / std::pow(xs[j] - xs[i], gamma));
  t->sampled_seminorm = s;
  if (s > seminorm * (1.0 + 1e-12) + 1e-14)
    throw std::invalid_argument("table: sampled seminorm " + format_double(s) +
                                " exceeds declared " + format_double(seminorm));
  t->xs = std::move(xs);
  t->values = std::move(values);
  return t;
}

std::shared_ptr<const TableData> load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("table: cannot open " + path);
  std::vector<double> xs, vs;
  double gamma = -1.0, seminorm = -1.0;
  bool header = false;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = line.substr(first + 1, eq - first - 1);
      key.erase(std::remove_if(key.begin(), key.end(), ::isspace), key.end());
      const double v = std::stod(line.substr(eq + 1));
      if (key == "gamma") gamma = v;
      if (key == "seminorm") seminorm = v;
      continue;
    }
    if (!header) {
      std::string h = line;
      h.erase(std::remove_if(h.begin(), h.end(), ::isspace), h.end());
      if (h != "x,value") throw std::invalid_argument("table: expected header x,value in " + path);
      header = true;
      continue;
    }
    auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("table: malformed row in " + path);
    xs.push_back(std::stod(line.substr(0, comma)));
    vs.push_back(std::stod(line.substr(comma + 1)));
  }
  if (!header) throw std::invalid_argument("table: missing header in " + path);
  if (gamma < 0.0 || seminorm < 0.0)
    throw std::invalid_argument("table: missing gamma/seminorm metadata in " + path);
  return make_table(std::move(xs), std::move(vs), gamma, seminorm, path);
}

// ---------------------------------------------------------------- tree

struct Potential::Node {
  Kind kind;
  double value = 0.0;
  std::vector<Potential> children;
  std::shared_ptr<const TableData> table;
};

Potential Potential::omega(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("omega: gamma must be positive");
  return Potential(std::make_shared<Node>(Node{Kind::Omega, gamma, {}, nullptr}));
}

Potential Potential::neg_log_df() {
  return Potential(std::make_shared<Node>(Node{Kind::NegLogDf, 0.0, {}, nullptr}));
}

Potential Potential::constant(double c) {
  if (!std::isfinite(c)) throw std::invalid_argument("const: value must be finite");
  return Potential(std::make_shared<Node>(Node{Kind::Const, c, {}, nullptr}));
}

Potential Potential::table(std::shared_ptr<const TableData> t) {
  if (!t) throw std::invalid_argument("table: null data");
  return Potential(std::make_shared<Node>(Node{Kind::Table, 0.0, {}, std::move(t)}));
}

Potential Potential::scale(double coefficient, Potential child) {
  if (!std::isfinite(coefficient)) throw std::invalid_argument("scale: coefficient must be finite");
  return Potential(
      std::make_shared<Node>(Node{Kind::Scale, coefficient, {std::move(child)}, nullptr}));
}

Potential Potential::sum(std::vector<Potential> terms) {
  if (terms.empty()) throw std::invalid_argument("sum: no terms");
  return Potential(std::make_shared<Node>(Node{Kind::Sum, 0.0, std::move(terms), nullptr}));
}

Potential::Kind Potential::kind() const { return node_->kind; }
double Potential::value() const { return node_->value; }
const std::vector<Potential>& Potential::children() const { return node_->children; }
const std::shared_ptr<const TableData>& Potential::table_ptr() const { return node_->table; }

bool operator==(const Potential& a, const Potential& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.value() != b.value()) return false;
  if (a.kind() == Potential::Kind::Table) {
    const auto& ta = *a.table_ptr();
    const auto& tb = *b.table_ptr();
    return ta.path == tb.path && ta.xs == tb.xs && ta.values == tb.values &&
           ta.gamma == tb.gamma && ta.seminorm == tb.seminorm;
  }
  return a.children() == b.children();
}

Potential operator+(const Potential& a, const Potential& b) {
  std::vector<Potential> terms;
  for (const Potential* p : {&a, &b}) {
    if (p->kind() == Potential::Kind::Sum)
      terms.insert(terms.end(), p->children().begin(), p->children().end());
    else
      terms.push_back(*p);
  }
  return Potential::sum(std::move(terms));
}

Potential operator*(double a, const Potential& p) { return Potential::scale(a, p); }

// ---------------------------------------------------------------- parser

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Potential parse() {
    Potential p = expr();
    skip();
    if (pos_ != s_.size()) throw ParseError("unexpected trailing input", pos_);
    return p;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  void expect(char c) {
    if (!peek(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  static Potential negate(const Potential& t) {
    if (t.kind() == Potential::Kind::Scale) return Potential::scale(-t.value(), t.children()[0]);
    return Potential::scale(-1.0, t);
  }

  Potential expr() {
    std::vector<Potential> terms{term()};
    while (true) {
      skip();
      if (pos_ >= s_.size()) break;
      const char op = s_[pos_];
      if (op != '+' && op != '-') break;
      ++pos_;
      Potential t = term();
      terms.push_back(op == '-' ? negate(t) : t);
    }
    if (terms.size() == 1) return terms.front();
    return Potential::sum(std::move(terms));
  }

  bool starts_number() {
    skip();
    if (pos_ >= s_.size()) return false;
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return true;
    if ((c == '-' || c == '+') && pos_ + 1 < s_.size()) {
      const char d = s_[pos_ + 1];
      return std::isdigit(static_cast<unsigned char>(d)) || d == '.';
    }
    return false;
  }

  double number() {
    skip();
    const std::size_t start = pos_;
    std::size_t p = pos_;
    if (p < s_.size() && s_[p] == '+') ++p;
    double v = 0.0;
    auto res = std::from_chars(s_.data() + p, s_.data() + s_.size(), v);
    if (res.ec != std::errc() || !std::isfinite(v)) throw ParseError("invalid number", start);
    pos_ = static_cast<std::size_t>(res.ptr - s_.data());
    return v;
  }

  Potential term() {
    skip();
    if (starts_number()) {
      const double c = number();
      expect('*');
      return Potential::scale(c, atom());
    }
    if (peek('-')) {
      ++pos_;
      return Potential::scale(-1.0, atom());
    }
    return atom();
  }

  Potential atom() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    const std::string_view name = s_.substr(start, pos_ - start);
    if (name.empty()) throw ParseError("expected an atom", start);
    if (name == "logdf") return Potential::neg_log_df();
    if (name == "omega") {
      expect('(');
      const std::size_t at = pos_;
      const double g = number();
      expect(')');
      if (!(g > 0.0)) throw ParseError("omega exponent out of range", at);
      return Potential::omega(g);
    }
    if (name == "const") {
      expect('(');
      const double c = number();
      expect(')');
      return Potential::constant(c);
    }
    if (name == "table") {
      expect('(');
      skip();
      const std::size_t open = pos_;
      const auto close = s_.find(')', pos_);
      if (close == std::string_view::npos) throw ParseError("unterminated table path", open);
      std::string path(s_.substr(open, close - open));
      while (!path.empty() && std::isspace(static_cast<unsigned char>(path.back()))) path.pop_back();
      pos_ = close + 1;
      if (path.empty()) throw ParseError("empty table path", open);
      return Potential::table(load_table(path));
    }
    throw ParseError("unknown atom '" + std::string(name) + "'", start);
  }
};

void print(const Potential& p, double coef, bool scaled, std::vector<std::string>& out) {
  using K = Potential::Kind;
  auto emit = [&](const std::string& atom) {
    out.push_back(scaled ? format_double(coef) + "*" + atom : atom);
  };
  switch (p.kind()) {
    case K::Omega: emit("omega(" + format_double(p.value()) + ")"); break;
    case K::NegLogDf: emit("logdf"); break;
    case K::Const: emit("const(" + format_double(p.value()) + ")"); break;
    case K::Table: emit("table(" + p.table_ptr()->path + ")"); break;
    case K::Scale: print(p.children()[0], coef * p.value(), true, out); break;
    case K::Sum:
      for (const auto& c : p.children()) print(c, coef, scaled, out);
      break;
  }
}

}  // namespace

Potential parse_potential(std::string_view text, const MapParams& params) {
  Potential p = Parser(text).parse();
  // reject expressions that do not evaluate finitely on the map's domain
  for (double x : {0.0, params.x1(), 1.0})
    if (!std::isfinite(eval_potential(p, params, x)))
      throw std::invalid_argument("potential does not evaluate to a finite value");
  return p;
}

std::string to_string(const Potential& phi) {
  std::vector<std::string> parts;
  print(phi, 1.0, false, parts);
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += " + ";
    s += parts[i];
  }
  return s;
}

// ---------------------------------------------------------------- evaluation

double eval_potential(const Potential& phi, const MapParams& params, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("eval_potential: argument outside [0,1]");
  using K = Potential::Kind;
  switch (phi.kind()) {
    case K::Omega: return -std::pow(x, phi.value());
    case K::NegLogDf: return -std::log1p((1.0 + params.alpha()) * std::pow(x, params.alpha()));
    case K::Const: return phi.value();
    case K::Table: return phi.table_ptr()->eval(x);
    case K::Scale: return phi.value() * eval_potential(phi.children()[0], params, x);
    case K::Sum: {
      double s = 0.0;
      for (const auto& c : phi.children()) s += eval_potential(c, params, x);
      return s;
    }
  }
  return 0.0;
}

double natural_exponent(const Potential& phi, const MapParams& params) {
  using K = Potential::Kind;
  switch (phi.kind()) {
    case K::Omega: return std::min(1.0, phi.value());
    case K::NegLogDf: return std::min(1.0, params.alpha());
    case K::Const: return 1.0;
    case K::Table: return phi.table_ptr()->gamma;
    case K::Scale: return natural_exponent(phi.children()[0], params);
    case K::Sum: {
      double g = 1.0;
      for (const auto& c : phi.children()) g = std::min(g, natural_exponent(c, params));
      return g;
    }
  }
  return 1.0;
}

HolderData holder_data(const Potential& phi, const MapParams& params, double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw ExponentMismatch("holder_data: exponent must lie in (0,1]");
  constexpr double slack = 1e-12;
  using K = Potential::Kind;
  HolderData h;
  h.gamma = gamma;
  switch (phi.kind()) {
    case K::Omega: {
      const double g = phi.value();
      if (gamma > std::min(1.0, g) + slack)
        throw ExponentMismatch("omega(" + format_double(g) + ") is not Hölder of exponent " +
                               format_double(gamma));
      h.seminorm = g <= 1.0 ? 1.0 : std::pow(g, gamma);
      h.sup_norm = 1.0;
      return h;
    }
    case K::NegLogDf: {
      const double a = params.alpha();
      if (gamma > std::min(1.0, a) + slack)
        throw ExponentMismatch("logdf is not Hölder of exponent " + format_double(gamma) +
                               " for alpha " + format_double(a));
      const double c = 1.0 + a;
      const double range = std::log(2.0 + a);
      if (a <= 1.0) {
        const double r = std::min(1.0, gamma / a);
        h.seminorm = std::pow(c, r) * std::pow(range, 1.0 - r);
      } else {
        // Lipschitz constant, attained where x^a = (a-1)/(a+1)
        const double xs = std::pow((a - 1.0) / (a + 1.0), 1.0 / a);
        const double lip = c * std::pow(xs, a - 1.0);
        h.seminorm = std::pow(lip, gamma) * std::pow(range, 1.0 - gamma);
      }
      h.sup_norm = range;
      return h;
    }
    case K::Const:
      h.sup_norm = std::abs(phi.value());
      return h;
    case K::Table: {
      const auto& t = *phi.table_ptr();
      if (gamma > t.gamma + slack)
        throw ExponentMismatch("table " + t.path + " declares exponent " + format_double(t.gamma));
      h.seminorm = t.seminorm;
      h.sup_norm = t.sup_abs();
      return h;
    }
    case K::Scale: {
      HolderData c = holder_data(phi.children()[0], params, gamma);
      const double a = std::abs(phi.value());
      c.seminorm *= a;
      c.sup_norm *= a;
      return c;
    }
    case K::Sum:
      for (const auto& c : phi.children()) {
        const HolderData d = holder_data(c, params, gamma);
        h.seminorm += d.seminorm;
        h.sup_norm += d.sup_norm;
        h.estimated = h.estimated || d.estimated;
      }
      return h;
  }
  return h;
}

double birkhoff(const Potential& phi, const MapParams& params, double x, int n) {
  if (n < 0) throw std::invalid_argument("birkhoff: n must be >= 0");
  double s = 0.0;
  for (int j = 0; j < n; ++j) {
    s += eval_potential(phi, params, x);
    x = eval(params, x);
  }
  return s;
}

std::vector<double> log_zeta_sequence(const Potential& phi, const MapParams& params,
                                      const NeutralOrbit& orbit) {
  const double phi0 = eval_potential(phi, params, 0.0);
  std::vector<double> out(orbit.depth() + 1, 0.0);
  double s = 0.0;
  for (std::size_t k = 1; k <= orbit.depth(); ++k) {
    s += eval_potential(phi, params, orbit[k]) - phi0;
    out[k] = s;
  }
  return out;
}

double log_zeta_n(const Potential& phi, const MapParams& params, int n) {
  if (n < 1) throw std::invalid_argument("zeta_n: n must be >= 1");
  return log_zeta_sequence(phi, params, neutral_orbit(params, static_cast<std::size_t>(n)))
      .back();
}

double zeta_n(const Potential& phi, const MapParams& params, int n) {
  return std::exp(log_zeta_n(phi, params, n));
}

}  // namespace pmt
