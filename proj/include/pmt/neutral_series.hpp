#pragma once

#include <cstddef>

#include "pmt/map_kernel.hpp"

namespace pmt {

// Two-sided bounds on the neutral orbit beyond a computed index m, from
// u_k = x_k^{-alpha}:  u_m + s (k - m) <= u_k <= u_m + alpha (k - m)
// with s = alpha (1 - (1 + alpha) / (2 u_m)).
class NeutralBounds {
 public:
  NeutralBounds(const MapParams& params, double x_m, std::size_t m);

  double u_low(double k) const { return u_m_ + slope_ * (k - static_cast<double>(m_)); }
  double u_high(double k) const { return u_m_ + alpha_ * (k - static_cast<double>(m_)); }
  // x_k^p bounds for k >= m
  double pow_upper(double k, double p) const;
  double pow_lower(double k, double p) const;

  double alpha() const { return alpha_; }
  double slope() const { return slope_; }
  double u_m() const { return u_m_; }
  std::size_t m() const { return m_; }

 private:
  double alpha_;
  double u_m_;
  double slope_;
  std::size_t m_;
};

// log of the integral of exp(-(lambda/alpha) (Phi(V(t)) - Phi(V(0)))) over
// t in [0, inf), V(t) = v0 + alpha t, Phi' = V^{-q}.  +inf when divergent.
double log_decay_integral(double lambda, double q, double v0, double alpha);

struct SeriesBound {
  double lower = 0.0;
  double upper = 0.0;
};

// sum_{j>=1} exp(-beta sum_{i=1}^j x_i^gamma), with a certified tail.
SeriesBound xi_series(const MapParams& params, double beta, double gamma, std::size_t n);

// beta * sum_{j>=0} x_j^gamma (x_0 = 1); infinite when gamma <= alpha.
SeriesBound hook_zeta(const MapParams& params, double beta, double gamma, std::size_t n);

}  // namespace pmt
