#include "pmt/neutral_series.hpp"

#include <cmath>
#include <stdexcept>

#include "pmt/numeric.hpp"

namespace pmt {

NeutralBounds::NeutralBounds(const MapParams& params, double x_m, std::size_t m)
    : alpha_(params.alpha()), u_m_(std::pow(x_m, -params.alpha())), m_(m) {
  slope_ = alpha_ * (1.0 - (1.0 + alpha_) / (2.0 * u_m_));
  if (!(slope_ > 0.0)) throw std::invalid_argument("NeutralBounds: orbit index too small");
}

double NeutralBounds::pow_upper(double k, double p) const {
  return std::pow(u_low(k), -p / alpha_);
}

double NeutralBounds::pow_lower(double k, double p) const {
  return std::pow(u_high(k), -p / alpha_);
}

double log_decay_integral(double lambda, double q, double v0, double alpha) {
  if (!(lambda > 0.0)) return kInf;
  if (std::abs(q - 1.0) < 1e-12) {
    const double c = lambda / alpha;
    if (c <= 1.0) return kInf;
    return std::log(v0) - std::log(alpha * (c - 1.0));
  }
  if (q > 1.0) return kInf;
  // substitute w = V^m; bound the upper incomplete gamma function
  // Gamma(a, X) <= X^{a-1} e^{-X} X / (X - a + 1) valid for X > a - 1
  const double m = 1.0 - q;
  const double a = 1.0 / m;
  const double kappa = lambda / (alpha * m);
  const double big_x = kappa * std::pow(v0, m);
  if (big_x <= a - 1.0) return kInf;
  return std::log(v0) - std::log(alpha * m * (big_x - a + 1.0));
}

SeriesBound xi_series(const MapParams& params, double beta, double gamma, std::size_t n) {
  if (!(beta > 0.0)) throw std::invalid_argument("xi_series: beta must be positive");
  const NeutralOrbit orbit = neutral_orbit(params, n);
  LogSum explicit_sum;
  double s = 0.0;
  for (std::size_t j = 1; j <= n; ++j) {
    s += std::pow(orbit[j], gamma);
    explicit_sum.add(-beta * s);
  }
  SeriesBound out;
  out.lower = std::exp(explicit_sum.value());
  const NeutralBounds nb(params, orbit[n], n);
  const double q = gamma / params.alpha();
  const double tail = log_decay_integral(beta, q, nb.u_m() + nb.alpha(), nb.alpha());
  out.upper = std::exp(log_add(explicit_sum.value(), -beta * s + tail));
  return out;
}

SeriesBound hook_zeta(const MapParams& params, double beta, double gamma, std::size_t n) {
  const NeutralOrbit orbit = neutral_orbit(params, n);
  double s = 0.0;
  for (std::size_t j = 0; j <= n; ++j) s += std::pow(orbit[j], gamma);
  const double q = gamma / params.alpha();
  if (q <= 1.0) return {kInf, kInf};
  const NeutralBounds nb(params, orbit[n], n);
  const double tail_hi = std::pow(nb.u_m(), 1.0 - q) / (nb.slope() * (q - 1.0));
  const double tail_lo = std::pow(nb.u_m() + nb.alpha(), 1.0 - q) / (nb.alpha() * (q - 1.0));
  return {beta * (s + tail_lo), beta * (s + tail_hi)};
}

}  // namespace pmt
