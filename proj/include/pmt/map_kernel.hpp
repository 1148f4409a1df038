#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pmt {

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Raised when a return time exceeds the materialized partition depth.
struct CutoffError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kCylinderDepthLimit = 26;

// f(x) = x(1 + x^alpha) mod 1 on [0,1], discontinuous at x1.
class MapParams {
 public:
  explicit MapParams(double alpha);

  double alpha() const { return alpha_; }
  double x1() const { return x1_; }

 private:
  double alpha_;
  double x1_;
};

double branch_point(double alpha);

double eval(const MapParams& p, double x);
double deriv(const MapParams& p, double x);
double log_deriv(const MapParams& p, double x);

double inv_left(const MapParams& p, double y);
double inv_right(const MapParams& p, double y);

// Right inverse extended by continuity to y = 0 (value x1).  Used for
// closures of cylinders; the public inv_right rejects y = 0.
double inv_right_closure(const MapParams& p, double y);

// inverse for symbol 0 (left) or 1 (right, closure convention)
inline double inv_branch(const MapParams& p, int symbol, double y) {
  return symbol == 0 ? inv_left(p, y) : inv_right_closure(p, y);
}

struct NeutralOrbit {
  std::vector<double> points;  // x_0 = 1 > x_1 > ... > x_N

  std::size_t depth() const { return points.size() - 1; }
  double operator[](std::size_t j) const { return points[j]; }
};

NeutralOrbit neutral_orbit(const MapParams& p, std::size_t n);

// y_1 = 1 > y_2 > ... > y_{M+1}; I_j = (y_{j+1}, y_j] has return time j.
struct ReturnPartition {
  NeutralOrbit orbit;      // x_0 .. x_M
  std::vector<double> y;   // y[0] unused, y[j] for j = 1 .. M+1

  std::size_t depth() const { return y.size() - 2; }
  double left(std::size_t j) const { return y[j + 1]; }
  double right(std::size_t j) const { return y[j]; }
};

ReturnPartition return_partition(const MapParams& p, std::size_t m);

int return_time(const MapParams& p, const ReturnPartition& part, double x);
double first_return(const MapParams& p, const ReturnPartition& part, double x);

struct Cylinder {
  std::string itinerary;
  double a = 0.0;
  double b = 0.0;

  double length() const { return b - a; }
};

// Closure of the set of points with the given itinerary.
Cylinder cylinder_of(const MapParams& p, const std::string& itinerary);

std::vector<Cylinder> cylinders(const MapParams& p, int n,
                                int depth_limit = kCylinderDepthLimit);

std::vector<double> preimages(const MapParams& p, double x, int n,
                              int depth_limit = kCylinderDepthLimit);

}  // namespace pmt
