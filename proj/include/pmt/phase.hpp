#pragma once

#include <string>
#include <vector>

#include "pmt/map_kernel.hpp"
#include "pmt/potential.hpp"
#include "pmt/pressure.hpp"

namespace pmt {

// ---------------------------------------------------------------- verdicts

enum class Verdict { Intermittent, StationaryCertified, Undetermined };
std::string to_string(Verdict v);

struct PhaseVerdict {
  Verdict label = Verdict::Undetermined;
  PressureBracket evidence;
};

// Intermittent iff P(phi) - phi(0) > 0 is certified; StationaryCertified iff
// the return-map test certifies P(phi) = phi(0).
PhaseVerdict classify(const Potential& phi, const MapParams& params, double gamma, double tol,
                      const EngineOptions& opts = {});

// ---------------------------------------------------------------- transitions

struct TransitionBracket {
  enum class Kind { TemperatureBetaStar, BoundaryTau };
  Kind kind = Kind::TemperatureBetaStar;
  double lo = 0.0;
  double hi = kInf;
  bool infinite = false;  // no transition up to the search cap
  bool stalled = false;   // undetermined probes kept the width above tol
  int probes = 0;

  double width() const { return hi - lo; }
};

// Transition parameter beta* of beta -> beta phi: Intermittent below, not above.
TransitionBracket ct_bracket(const Potential& phi, const MapParams& params, double gamma,
                             double tol, double beta_max, const EngineOptions& opts = {});

// tau_0 of the family phi0 + tau omega(gamma).
TransitionBracket boundary_tau(const Potential& phi0, const MapParams& params, double gamma,
                               double tol, const EngineOptions& opts = {});

struct GSample {
  double tau;
  double g_lower;  // bracket of P(phi0 + tau omega) - (phi0(0) + 0)
  double g_upper;
};

// g(tau) = P(psi_tau) - psi_tau(0) on the given grid
std::vector<GSample> g_profile(const Potential& phi0, const MapParams& params, double gamma,
                               const std::vector<double>& taus, const EngineOptions& opts = {});

// Coefficient beta_0 with beta_0 omega(gamma) certified stationary, by doubling.
double stationary_coefficient(const MapParams& params, double gamma,
                              const EngineOptions& opts = {});

// ---------------------------------------------------------------- periodic orbits

struct PeriodicOrbit {
  std::string word;             // itinerary of points[0]
  std::vector<double> points;   // points[k] = f^k(points[0])

  std::size_t period() const { return points.size(); }
  double average(const Potential& phi, const MapParams& params) const;
};

PeriodicOrbit periodic_orbit(const MapParams& params, const std::string& word);
// one representative per orbit of period <= period_max (the fixed point 0 excluded)
std::vector<PeriodicOrbit> periodic_orbits(const MapParams& params, int period_max);
// the periodic point of period n in J_{n-1}, itinerary 0^{n-1} 1
PeriodicOrbit neutral_periodic_orbit(const MapParams& params, int n);

struct KernelProjection {
  Potential psi;
  double t = 0.0;
};

// psi = phi - t omega(gamma) with l(psi) = 0, l(phi) = phi(0) - integral against the orbit
KernelProjection kernel_projection(const Potential& phi, const MapParams& params, double gamma,
                                   const PeriodicOrbit& orbit);

// ---------------------------------------------------------------- ground states

struct GroundStateReport {
  enum class Status { Violated, ConsistentUpTo };
  Status status = Status::ConsistentUpTo;
  PeriodicOrbit witness;      // maximizing orbit found
  double witness_average = 0.0;
  double margin = 0.0;        // phi(0) - best competing average
  int period_max = 0;
  int neutral_depth = 0;
  std::vector<std::string> warnings;
};

GroundStateReport ground_state_check(const Potential& phi, const MapParams& params, int period_max,
                                     int neutral_depth, double tolerance = 1e-12);

// ---------------------------------------------------------------- diagnostics

struct DecayFit {
  double c_fit = 0.0;
  double delta_fit = 0.0;
  double residual = 0.0;
  int points = 0;
};

// least squares of log zeta_n against log C - delta log n for n in [n_lo, n_hi]
DecayFit decay_fit(const Potential& phi, const MapParams& params, int n_lo, int n_hi);

struct DistortionConstants {
  double eps0 = 0.0;
  double eps1 = 0.0;
  double c1 = 1.0;
  double d = 0.0;
  int certified_depth = 0;
  bool empirical = true;
};

DistortionConstants distortion_constants(const MapParams& params, int n, int samples_per_level);

// |J_0|^alpha sum_{k>=0} (1 + eps1 k)^{-(1+alpha)}, tail bounded by an integral
double distortion_sum(const MapParams& params, double eps1);

bool z1_criterion(const Potential& phi, const MapParams& params, double alpha_exponent, int n,
                  const DistortionConstants& dist);

struct DimensionBracket {
  double lo = 0.0;
  double hi = 1.0;
  int branches = 0;
  int depth = 0;
};

// Bowen root of the first-return subsystem on the branches I_1 .. I_n
DimensionBracket hausdorff_subsystem(const MapParams& params, int n, double tol,
                                     const EngineOptions& opts = {});

}  // namespace pmt
