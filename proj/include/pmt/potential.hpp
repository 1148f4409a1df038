#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pmt/map_kernel.hpp"

namespace pmt {

// Piecewise-linear potential read from "x,value" CSV with declared Hölder data.
struct TableData {
  std::string path;
  std::vector<double> xs;
  std::vector<double> values;
  double gamma = 1.0;
  double seminorm = 0.0;
  double sampled_seminorm = 0.0;

  double eval(double x) const;
  double sup_abs() const;
};

std::shared_ptr<const TableData> make_table(std::vector<double> xs, std::vector<double> values,
                                            double gamma, double seminorm,
                                            std::string path = {});
std::shared_ptr<const TableData> load_table(const std::string& path);

class Potential {
 public:
  enum class Kind { Omega, NegLogDf, Const, Table, Scale, Sum };

  static Potential omega(double gamma);
  static Potential neg_log_df();
  static Potential constant(double c);
  static Potential table(std::shared_ptr<const TableData> t);
  static Potential scale(double coefficient, Potential child);
  static Potential sum(std::vector<Potential> terms);

  Kind kind() const;
  // gamma for Omega, c for Const, coefficient for Scale, 0 otherwise
  double value() const;
  const std::vector<Potential>& children() const;
  const std::shared_ptr<const TableData>& table_ptr() const;

  friend bool operator==(const Potential& a, const Potential& b);

 private:
  struct Node;
  explicit Potential(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

Potential operator+(const Potential& a, const Potential& b);
Potential operator*(double a, const Potential& p);

struct ParseError : std::invalid_argument {
  ParseError(const std::string& msg, std::size_t pos)
      : std::invalid_argument(msg + " at position " + std::to_string(pos)), position(pos) {}
  std::size_t position;
};

// Grammar: expr := term (('+'|'-') term)*; term := number '*' atom | atom;
// atom := omega(g) | logdf | const(c) | table(path).  logdf is -log Df.
Potential parse_potential(std::string_view text, const MapParams& params);
std::string to_string(const Potential& phi);

double eval_potential(const Potential& phi, const MapParams& params, double x);

struct HolderData {
  double gamma = 1.0;
  double seminorm = 0.0;
  double sup_norm = 0.0;
  bool estimated = false;  // true if any part relies on sampling only

  double norm() const { return sup_norm + seminorm; }
};

// Largest exponent at which every atom is Hölder (capped at 1).
double natural_exponent(const Potential& phi, const MapParams& params);

struct ExponentMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

HolderData holder_data(const Potential& phi, const MapParams& params, double gamma);

double birkhoff(const Potential& phi, const MapParams& params, double x, int n);

// log of exp(S_n(phi)(x_n) - n phi(0)) along the neutral orbit
double log_zeta_n(const Potential& phi, const MapParams& params, int n);
double zeta_n(const Potential& phi, const MapParams& params, int n);
// entries 1..N (index 0 is 0)
std::vector<double> log_zeta_sequence(const Potential& phi, const MapParams& params,
                                      const NeutralOrbit& orbit);

}  // namespace pmt
