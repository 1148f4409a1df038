#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pmt/phase.hpp"

namespace pmt {

namespace {

// composition of inverse branches along a word, also returning the orbit
double pull_back(const MapParams& params, const std::string& word, double x,
                 std::vector<double>* orbit) {
  const std::size_t n = word.size();
  if (orbit) orbit->assign(n, 0.0);
  for (std::size_t k = n; k-- > 0;) {
    x = inv_branch(params, word[k] == '1' ? 1 : 0, x);
    if (orbit) (*orbit)[k] = x;
  }
  return x;
}

bool is_orbit_representative(const std::string& w) {
  // primitive and lexicographically least among its rotations
  const std::size_t n = w.size();
  for (std::size_t r = 1; r < n; ++r) {
    const std::string rot = w.substr(r) + w.substr(0, r);
    if (rot <= w) return false;
  }
  return true;
}

}  // namespace

double PeriodicOrbit::average(const Potential& phi, const MapParams& params) const {
  double s = 0.0;
  for (const double x : points) s += eval_potential(phi, params, x);
  return s / static_cast<double>(points.size());
}

PeriodicOrbit periodic_orbit(const MapParams& params, const std::string& word) {
  if (word.empty() || word.find_first_not_of("01") != std::string::npos)
    throw std::invalid_argument("itinerary must be a nonempty word over {0,1}");
  // x - G(x) is nondecreasing with G the pulled-back branch composition
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (mid - pull_back(params, word, mid, nullptr) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  PeriodicOrbit o;
  o.word = word;
  pull_back(params, word, hi, &o.points);
  return o;
}

std::vector<PeriodicOrbit> periodic_orbits(const MapParams& params, int period_max) {
  if (period_max < 1) throw std::invalid_argument("period_max must be at least 1");
  std::vector<PeriodicOrbit> out;
  for (int n = 1; n <= period_max; ++n)
    for (unsigned long code = 0; code < (1ul << n); ++code) {
      std::string w(n, '0');
      for (int k = 0; k < n; ++k)
        if (code >> (n - 1 - k) & 1u) w[k] = '1';
      if (w == "0" || !is_orbit_representative(w)) continue;
      out.push_back(periodic_orbit(params, w));
    }
  return out;
}

PeriodicOrbit neutral_periodic_orbit(const MapParams& params, int n) {
  if (n < 1) throw std::invalid_argument("period must be at least 1");
  // u = p_n's last point solves u = g_1(g_0^{n-1}(u)) on J_0, a contraction;
  // Newton with the chain-rule derivative, kept inside [x1, 1]
  const double x1 = params.x1();
  auto g = [&](double u, double& du) {
    double x = u;
    du = 1.0;
    for (int k = 0; k < n - 1; ++k) {
      x = inv_left(params, x);
      du /= deriv(params, x);
    }
    x = inv_right_closure(params, x);
    du /= deriv(params, x);
    return x;
  };
  double lo = x1;
  double hi = 1.0;
  double u = 0.5 * (x1 + 1.0);
  for (int it = 0; it < 100; ++it) {
    double du;
    const double r = u - g(u, du);
    if (r < 0.0)
      lo = u;
    else
      hi = u;
    double next = u - r / (1.0 - du);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - u) <= 1e-16 * u) {
      u = next;
      break;
    }
    u = next;
  }
  PeriodicOrbit o;
  o.word = std::string(n - 1, '0') + "1";
  // points: p_n = g_0^{n-1}(u), ..., f^{n-1}(p_n) = u
  o.points.assign(n, 0.0);
  o.points[n - 1] = u;
  double x = u;
  for (int k = n - 2; k >= 0; --k) {
    x = inv_left(params, x);
    o.points[k] = x;
  }
  return o;
}

KernelProjection kernel_projection(const Potential& phi, const MapParams& params, double gamma,
                                   const PeriodicOrbit& orbit) {
  if (orbit.points.empty()) throw std::invalid_argument("empty orbit");
  if (std::all_of(orbit.points.begin(), orbit.points.end(), [](double x) { return x == 0.0; }))
    throw DomainError("kernel projection needs an orbit other than the fixed point 0");
  const Potential w = Potential::omega(gamma);
  auto ell = [&](const Potential& p) {
    return eval_potential(p, params, 0.0) - orbit.average(p, params);
  };
  const double t = ell(phi) / ell(w);
  KernelProjection k{t == 0.0 ? phi : phi + (-t) * w, t};
  return k;
}

GroundStateReport ground_state_check(const Potential& phi, const MapParams& params, int period_max,
                                     int neutral_depth, double tolerance) {
  if (period_max < 1) throw std::invalid_argument("period_max must be at least 1");
  GroundStateReport r;
  r.period_max = period_max;
  r.neutral_depth = neutral_depth;
  const double phi0 = eval_potential(phi, params, 0.0);
  double best = -kInf;
  auto consider = [&](PeriodicOrbit o) {
    const double a = o.average(phi, params);
    if (!std::isfinite(a)) {
      r.warnings.push_back("skipped orbit " + o.word + ": non-finite average");
      return;
    }
    if (a > best) {
      best = a;
      r.witness = std::move(o);
      r.witness_average = a;
    }
  };
  for (auto& o : periodic_orbits(params, period_max)) consider(std::move(o));
  for (int n = 2; n <= neutral_depth; ++n) consider(neutral_periodic_orbit(params, n));
  r.margin = phi0 - best;
  r.status = best > phi0 + tolerance ? GroundStateReport::Status::Violated
                                     : GroundStateReport::Status::ConsistentUpTo;
  return r;
}

}  // namespace pmt
