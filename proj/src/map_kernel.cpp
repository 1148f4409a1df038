#include "pmt/map_kernel.hpp"

#include <algorithm>
#include <cmath>

namespace pmt {

namespace {

// Solves x(1 + x^alpha) = t on [lo, hi] by Newton steps kept inside a
// shrinking bisection bracket.
double solve_h(double alpha, double t, double lo, double hi, double guess) {
  double x = std::clamp(guess, lo, hi);
  for (int it = 0; it < 200; ++it) {
    const double xa = std::pow(x, alpha);
    const double r = x * (1.0 + xa) - t;
    if (r == 0.0) return x;
    if (r > 0.0)
      hi = x;
    else
      lo = x;
    double nx = x - r / (1.0 + (1.0 + alpha) * xa);
    if (!(nx > lo && nx < hi)) nx = 0.5 * (lo + hi);
    const double step = std::abs(nx - x);
    x = nx;
    if (step <= 1e-16 * x || hi - lo <= 1e-16 * hi) break;
  }
  return x;
}

void check_unit(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0))
    throw DomainError(std::string(what) + ": argument outside [0,1]");
}

}  // namespace

double branch_point(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("alpha must be a positive finite number");
  return solve_h(alpha, 1.0, 0.5, 1.0, 0.62);
}

MapParams::MapParams(double alpha) : alpha_(alpha), x1_(branch_point(alpha)) {}

double eval(const MapParams& p, double x) {
  check_unit(x, "eval");
  const double v = x * (1.0 + std::pow(x, p.alpha()));
  // branch by position, so that x1 itself maps to 1 despite rounding
  return x <= p.x1() ? std::min(v, 1.0) : std::max(v - 1.0, 0.0);
}

double deriv(const MapParams& p, double x) {
  check_unit(x, "deriv");
  return 1.0 + (1.0 + p.alpha()) * std::pow(x, p.alpha());
}

double log_deriv(const MapParams& p, double x) {
  check_unit(x, "log_deriv");
  return std::log1p((1.0 + p.alpha()) * std::pow(x, p.alpha()));
}

double inv_left(const MapParams& p, double y) {
  check_unit(y, "inv_left");
  if (y == 0.0) return 0.0;
  if (y == 1.0) return p.x1();
  const double a = p.alpha();
  const double g = y / (1.0 + std::pow(y, a));
  const double guess = y / (1.0 + std::pow(g, a));
  return solve_h(a, y, 0.0, p.x1(), guess);
}

double inv_right_closure(const MapParams& p, double y) {
  check_unit(y, "inv_right");
  if (y == 0.0) return p.x1();
  if (y == 1.0) return 1.0;
  const double a = p.alpha();
  const double x1 = p.x1();
  const double guess = x1 + y / (1.0 + (1.0 + a) * std::pow(x1, a));
  return solve_h(a, 1.0 + y, x1, 1.0, guess);
}

double inv_right(const MapParams& p, double y) {
  if (y == 0.0) throw DomainError("inv_right: 0 has no preimage in (x1,1]");
  return inv_right_closure(p, y);
}

NeutralOrbit neutral_orbit(const MapParams& p, std::size_t n) {
  NeutralOrbit o;
  o.points.reserve(n + 1);
  o.points.push_back(1.0);
  for (std::size_t j = 0; j < n; ++j) o.points.push_back(inv_left(p, o.points.back()));
  return o;
}

ReturnPartition return_partition(const MapParams& p, std::size_t m) {
  if (m < 1) throw std::invalid_argument("return_partition: depth must be >= 1");
  ReturnPartition r;
  r.orbit = neutral_orbit(p, m);
  r.y.assign(m + 2, 0.0);
  for (std::size_t j = 1; j <= m + 1; ++j) r.y[j] = inv_right(p, r.orbit[j - 1]);
  return r;
}

int return_time(const MapParams& p, const ReturnPartition& part, double x) {
  if (!(x > p.x1() && x <= 1.0)) throw DomainError("return_time: x outside J_0");
  const std::size_t m = part.depth();
  if (x <= part.y[m + 1])
    throw CutoffError("return_time: return time exceeds partition depth " +
                      std::to_string(m));
  // y is descending on indices 1..m+1; find the j with y[j+1] < x <= y[j]
  std::size_t lo = 1, hi = m + 1;  // y[lo] >= x > y[hi]
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (part.y[mid] >= x)
      lo = mid;
    else
      hi = mid;
  }
  return static_cast<int>(lo);
}

double first_return(const MapParams& p, const ReturnPartition& part, double x) {
  const int m = return_time(p, part, x);
  for (int i = 0; i < m; ++i) x = eval(p, x);
  return x;
}

Cylinder cylinder_of(const MapParams& p, const std::string& itinerary) {
  double a = 0.0, b = 1.0;
  for (auto it = itinerary.rbegin(); it != itinerary.rend(); ++it) {
    if (*it != '0' && *it != '1') throw std::invalid_argument("itinerary must be binary");
    const int s = *it - '0';
    a = inv_branch(p, s, a);
    b = inv_branch(p, s, b);
  }
  return Cylinder{itinerary, a, b};
}

std::vector<Cylinder> cylinders(const MapParams& p, int n, int depth_limit) {
  if (n < 1) throw std::invalid_argument("cylinders: n must be >= 1");
  if (n > depth_limit) throw BudgetError("cylinders: depth limit exceeded");
  std::vector<Cylinder> level{Cylinder{"", 0.0, 1.0}};
  for (int k = 0; k < n; ++k) {
    std::vector<Cylinder> next;
    next.reserve(level.size() * 2);
    for (int s = 0; s < 2; ++s)
      for (const auto& c : level)
        next.push_back(Cylinder{static_cast<char>('0' + s) + c.itinerary,
                                inv_branch(p, s, c.a), inv_branch(p, s, c.b)});
    level = std::move(next);
  }
  std::sort(level.begin(), level.end(),
            [](const Cylinder& l, const Cylinder& r) { return l.itinerary < r.itinerary; });
  return level;
}

std::vector<double> preimages(const MapParams& p, double x, int n, int depth_limit) {
  if (!(x > 0.0 && x <= 1.0)) throw DomainError("preimages: x outside (0,1]");
  if (n < 1) throw std::invalid_argument("preimages: n must be >= 1");
  if (n > depth_limit) throw BudgetError("preimages: depth limit exceeded");
  std::vector<double> level{x};
  for (int k = 0; k < n; ++k) {
    std::vector<double> next;
    next.reserve(level.size() * 2);
    for (double z : level) {
      next.push_back(inv_left(p, z));
      if (z > 0.0) next.push_back(inv_right(p, z));
    }
    level = std::move(next);
  }
  std::sort(level.begin(), level.end());
  return level;
}

}  // namespace pmt
