#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "pmt/map_kernel.hpp"
#include "pmt/numeric.hpp"
#include "pmt/potential.hpp"

namespace pmt {

enum class Method { CylinderFekete, InducedRenewal, Combined };
std::string to_string(Method m);

// Certified interval for P(phi).  The excess P(phi) - phi(0) is kept
// separately because it can be far below the resolution of phi(0).
struct PressureBracket {
  double floor = 0.0;  // phi(0)
  double excess_lower = 0.0;
  double excess_upper = kInf;
  // natural log of a certified lower bound on the excess; finite exactly
  // when P(phi) > phi(0) is certified, even if the bound underflows
  double log_excess_lower = -kInf;
  Method method = Method::Combined;
  int n_used = 0;
  bool pruned = false;
  bool certified = true;
  bool stationary = false;  // P(phi) = phi(0) certified by the induced series test
  std::string notes;

  double lower() const { return floor + excess_lower; }
  double upper() const { return floor + excess_upper; }
  double width() const { return excess_upper - excess_lower; }
  bool excess_positive() const { return log_excess_lower > -kInf; }
  bool contains(double v, double tol = 0.0) const {
    return lower() - tol <= v && v <= upper() + tol;
  }
};

struct InconsistentBrackets : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EngineOptions {
  int cylinder_depth = 22;
  std::size_t induced_depth = 10000;
  int induced_branching = 64;  // return times with their own partition state (0: plain renewal series)
  int induced_refined = 8;     // return times whose states are split by the next return
  bool analytic_tail = true;
  bool verdict_only = false;   // induced engine: skip root brackets, keep the sign tests
  double prune_rel = 0.0;      // > 0 enables heuristic weight pruning
  unsigned threads = 0;        // 0: library default
};

// ---------------------------------------------------------------- cylinders

struct PartitionSums {
  double phi0 = 0.0;
  // index n = 1..depth; sums of exp(S_n(phi - phi(0)))
  std::vector<double> log_sup_excess;
  std::vector<double> log_inf_excess;
  bool pruned = false;

  int depth() const { return static_cast<int>(log_sup_excess.size()) - 1; }
  // log Z_n for phi itself
  double log_sup(int n) const { return log_sup_excess[n] + n * phi0; }
  double log_inf(int n) const { return log_inf_excess[n] + n * phi0; }
};

PartitionSums partition_sums(const Potential& phi, const MapParams& params, double gamma, int n,
                             const EngineOptions& opts = {});

PressureBracket pressure_cylinder(const Potential& phi, const MapParams& params, double gamma,
                                  int n_max, const EngineOptions& opts = {});

std::vector<std::pair<int, double>> pressure_preimage(const Potential& phi,
                                                      const MapParams& params, int n_max,
                                                      double base_x = 1.0,
                                                      const EngineOptions& opts = {});

// ---------------------------------------------------------------- induced

enum class TailPolicy { TruncateFlagged, AnalyticTail };

// Branch weights of the first return map: for j = 1..M, bounds on
// sup / inf over I_j of exp(S_j(phi) - j phi(0)), stored as logs.
struct InducedSeries {
  double phi0 = 0.0;
  std::vector<double> log_sup;  // index 0 unused
  std::vector<double> log_inf;
  TailPolicy tail_policy = TailPolicy::TruncateFlagged;
  std::string tail_description;

  std::size_t depth() const { return log_sup.size() - 1; }
  double weight_sup(std::size_t j) const;
  double weight_inf(std::size_t j) const;
};

InducedSeries induced_series(const Potential& phi, const MapParams& params, std::size_t m);

PressureBracket pressure_induced(const Potential& phi, const MapParams& params, std::size_t m,
                                 const EngineOptions& opts = {});

// ---------------------------------------------------------------- combined

PressureBracket pressure(const Potential& phi, const MapParams& params, double gamma, double tol,
                         const EngineOptions& opts = {});

// Intersection of two certified brackets; throws InconsistentBrackets if disjoint.
PressureBracket intersect(const PressureBracket& a, const PressureBracket& b);

}  // namespace pmt
