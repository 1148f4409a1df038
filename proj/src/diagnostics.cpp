#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pmt/numeric.hpp"
#include "pmt/phase.hpp"

namespace pmt {

DecayFit decay_fit(const Potential& phi, const MapParams& params, int n_lo, int n_hi) {
  if (n_lo < 1 || n_hi < 10 * n_lo)
    throw std::invalid_argument("decay fit range must span at least one decade");
  const NeutralOrbit orbit = neutral_orbit(params, static_cast<std::size_t>(n_hi));
  const std::vector<double> log_zeta = log_zeta_sequence(phi, params, orbit);

  // log-spaced sample of n so that every decade weighs the same
  std::vector<int> ns;
  const int samples = 200;
  for (int k = 0; k <= samples; ++k) {
    const double t = static_cast<double>(k) / samples;
    const int n = static_cast<int>(std::lround(n_lo * std::pow(double(n_hi) / n_lo, t)));
    if (ns.empty() || n > ns.back()) ns.push_back(n);
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const int n : ns) {
    const double x = std::log(double(n));
    const double y = log_zeta[n];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(ns.size());
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  const double icept = (sy - slope * sx) / m;
  double ss = 0.0;
  for (const int n : ns) {
    const double e = log_zeta[n] - (icept + slope * std::log(double(n)));
    ss += e * e;
  }
  return {std::exp(icept), -slope, std::sqrt(ss / m), static_cast<int>(ns.size())};
}

double distortion_sum(const MapParams& params, double eps1) {
  if (!(eps1 > 0.0)) return kInf;
  const double a = params.alpha();
  const int k_explicit = 10000;
  double s = 0.0;
  for (int k = 0; k < k_explicit; ++k) s += std::pow(1.0 + eps1 * k, -(1.0 + a));
  // sum over k >= K of a decreasing term <= integral from K - 1
  s += std::pow(1.0 + eps1 * (k_explicit - 1), -a) / (eps1 * a);
  return std::pow(1.0 - params.x1(), a) * s;
}

namespace {

double log_df_n(const MapParams& params, double x, int n) {
  double s = 0.0;
  for (int k = 0; k < n; ++k) {
    s += log_deriv(params, x);
    x = eval(params, x);
  }
  return s;
}

double eps_ratio(const MapParams& params, double log_dfn, int n) {
  const double a = params.alpha();
  return std::expm1(log_dfn * a / (a + 1.0)) / n;
}

}  // namespace

DistortionConstants distortion_constants(const MapParams& params, int n, int samples_per_level) {
  if (n < 10) throw std::invalid_argument("distortion depth must be at least 10");
  if (samples_per_level < 2) throw std::invalid_argument("need at least two samples per level");
  const NeutralOrbit orbit = neutral_orbit(params, static_cast<std::size_t>(n) + 1);
  auto grid = [&](double a, double b, int i) {
    return a + (b - a) * static_cast<double>(i) / (samples_per_level - 1);
  };

  // eps0 from the points of J_k, which take k steps to reach J_0
  double lo = kInf, hi = 0.0;
  for (int k = 1; k <= n; ++k)
    for (int i = 0; i < samples_per_level; ++i) {
      const double x = grid(orbit[k + 1], orbit[k], i);
      const double r = eps_ratio(params, log_df_n(params, x, k), k);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
  DistortionConstants d;
  d.eps0 = std::min(lo, 1.0 / hi);

  // eps1 and C1 over components of f^{-k}(J_0)
  double eps1 = kInf;
  double c1 = 1.0;
  auto component = [&](const std::string& w) {
    const int k = static_cast<int>(w.size());
    const Cylinder c = cylinder_of(params, w + "1");
    double mn = kInf, mx = -kInf;
    for (int i = 0; i < samples_per_level; ++i) {
      const double x = grid(c.a, c.b, i);
      const double l = log_df_n(params, x, k);
      mn = std::min(mn, l);
      mx = std::max(mx, l);
      eps1 = std::min(eps1, eps_ratio(params, l, k));
    }
    c1 = std::max(c1, std::exp(mx - mn));
  };
  for (int k = 1; k <= n; ++k) {
    if (k <= 10) {
      for (unsigned long code = 0; code < (1ul << k); ++code) {
        std::string w(k, '0');
        for (int j = 0; j < k; ++j)
          if (code >> (k - 1 - j) & 1u) w[j] = '1';
        component(w);
      }
    } else {
      component(std::string(k, '0'));
      component("1" + std::string(k - 1, '0'));
      component(std::string(k - 1, '0') + "1");
      component(std::string(k, '1'));
    }
  }
  d.eps1 = eps1;
  d.c1 = c1;
  d.d = distortion_sum(params, eps1);
  d.certified_depth = n;
  d.empirical = true;
  return d;
}

bool z1_criterion(const Potential& phi, const MapParams& params, double alpha_exponent, int n,
                  const DistortionConstants& dist) {
  if (n < 1) return false;
  const double semi = holder_data(phi, params, alpha_exponent).seminorm;
  const std::vector<double> lz = log_zeta_sequence(phi, params, neutral_orbit(params, n));
  LogSum s;
  for (int k = 1; k <= n; ++k) s.add(lz[k]);
  return s.value() > dist.d * semi;
}

}  // namespace pmt
