#include <cmath>
#include <stdexcept>

#include "pmt/phase.hpp"

namespace pmt {

namespace {

constexpr int kMaxProbes = 60;

// Shrinks [lo, hi] around the single sign change of a monotone family:
// Intermittent probes lie below the transition, StationaryCertified probes
// above it.  An undetermined probe splits the search into the two
// certification frontiers on either side of it.
template <class Probe>
void search(TransitionBracket& out, double tol, Probe&& verdict) {
  double u_lo = kInf;  // undetermined core [u_lo, u_hi], empty while u_lo > u_hi
  double u_hi = -kInf;
  while (out.hi - out.lo > tol && out.probes < kMaxProbes) {
    double x;
    if (u_lo > u_hi) {
      x = 0.5 * (out.lo + out.hi);
    } else if (u_lo - out.lo >= out.hi - u_hi) {
      x = 0.5 * (out.lo + u_lo);
    } else {
      x = 0.5 * (u_hi + out.hi);
    }
    if (x <= out.lo || x >= out.hi) break;
    ++out.probes;
    switch (verdict(x)) {
      case Verdict::Intermittent:
        out.lo = x;
        if (x >= u_hi) {
          u_lo = kInf;
          u_hi = -kInf;
        } else {
          u_lo = std::max(u_lo, x);
        }
        break;
      case Verdict::StationaryCertified:
        out.hi = x;
        if (x <= u_lo) {
          u_lo = kInf;
          u_hi = -kInf;
        } else {
          u_hi = std::min(u_hi, x);
        }
        break;
      case Verdict::Undetermined:
        u_lo = std::min(u_lo, x);
        u_hi = std::max(u_hi, x);
        break;
    }
    // stop once both frontiers touch the undetermined core
    if (u_lo <= u_hi && u_lo - out.lo <= tol / 2 && out.hi - u_hi <= tol / 2) break;
  }
  out.stalled = out.hi - out.lo > tol;
}

void check_tol(double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
}

}  // namespace

TransitionBracket ct_bracket(const Potential& phi, const MapParams& params, double gamma,
                             double tol, double beta_max, const EngineOptions& opts) {
  check_tol(tol);
  if (!(beta_max > 0.0)) throw std::invalid_argument("beta_max must be positive");
  (void)holder_data(phi, params, gamma);
  auto verdict = [&](double beta) {
    return classify(beta * phi, params, gamma, tol, opts).label;
  };
  TransitionBracket out;
  out.kind = TransitionBracket::Kind::TemperatureBetaStar;
  out.probes = 1;
  const Verdict top = verdict(beta_max);
  if (top == Verdict::Intermittent) {
    out.lo = beta_max;
    out.hi = kInf;
    out.infinite = true;
    return out;
  }
  out.lo = 0.0;
  out.hi = beta_max;
  if (top == Verdict::Undetermined) {
    // the transition may sit at or beyond the cap; find the intermittent frontier only
    out.stalled = true;
    double hi = beta_max;
    while (hi - out.lo > tol && out.probes < kMaxProbes) {
      const double x = 0.5 * (out.lo + hi);
      ++out.probes;
      if (verdict(x) == Verdict::Intermittent)
        out.lo = x;
      else
        hi = x;
    }
    return out;
  }
  search(out, tol, verdict);
  return out;
}

double stationary_coefficient(const MapParams& params, double gamma, const EngineOptions& opts) {
  const Potential w = Potential::omega(gamma);
  for (double beta = 1.0; beta <= 4096.0; beta *= 2.0)
    if (classify(beta * w, params, gamma, 1e-3, opts).label == Verdict::StationaryCertified)
      return beta;
  throw BudgetError("no certified stationary multiple of omega found up to 4096");
}

TransitionBracket boundary_tau(const Potential& phi0, const MapParams& params, double gamma,
                               double tol, const EngineOptions& opts) {
  check_tol(tol);
  if (gamma > std::min(params.alpha(), 1.0))
    throw ExponentMismatch("boundary tracing needs gamma <= min(alpha, 1)");
  const HolderData h0 = holder_data(phi0, params, gamma);
  const Potential w = Potential::omega(gamma);
  auto verdict = [&](double tau) {
    return classify(phi0 + tau * w, params, gamma, tol, opts).label;
  };

  TransitionBracket out;
  out.kind = TransitionBracket::Kind::BoundaryTau;
  // psi_{tau} <= beta0 omega + phi0(0) once tau >= beta0 + |phi0|_gamma
  out.hi = stationary_coefficient(params, gamma, opts) + h0.seminorm;
  out.probes = 1;
  const Verdict at_zero = verdict(0.0);
  if (at_zero == Verdict::Intermittent) {
    out.lo = 0.0;
  } else {
    // tau_0 <= 0 if certified stationary at 0; walk down until intermittent
    if (at_zero == Verdict::StationaryCertified) out.hi = std::min(out.hi, 0.0);
    double step = 1.0;
    for (;;) {
      if (step > 4096.0 || out.probes >= kMaxProbes) {
        out.lo = -kInf;
        out.stalled = true;
        return out;
      }
      ++out.probes;
      const Verdict v = verdict(-step);
      if (v == Verdict::Intermittent) break;
      if (v == Verdict::StationaryCertified) out.hi = std::min(out.hi, -step);
      step *= 2.0;
    }
    out.lo = -step;
  }
  search(out, tol, verdict);
  return out;
}

std::vector<GSample> g_profile(const Potential& phi0, const MapParams& params, double gamma,
                               const std::vector<double>& taus, const EngineOptions& opts) {
  (void)holder_data(phi0, params, gamma);
  const Potential w = Potential::omega(gamma);
  std::vector<GSample> out;
  for (const double tau : taus) {
    const PressureBracket b = pressure_induced(phi0 + tau * w, params, opts.induced_depth, opts);
    // omega(gamma) vanishes at 0, so psi_tau(0) = phi0(0) = floor
    out.push_back({tau, b.excess_lower, b.excess_upper});
  }
  return out;
}

}  // namespace pmt
