#include <algorithm>
#include <stdexcept>

#include "pmt/phase.hpp"

namespace pmt {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Intermittent: return "Intermittent";
    case Verdict::StationaryCertified: return "StationaryCertified";
    case Verdict::Undetermined: return "Undetermined";
  }
  return "?";
}

PhaseVerdict classify(const Potential& phi, const MapParams& params, double gamma, double tol,
                      const EngineOptions& opts) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  (void)holder_data(phi, params, gamma);

  PhaseVerdict v;
  const PressureBracket ind = pressure_induced(phi, params, opts.induced_depth, opts);
  if (ind.stationary && ind.excess_positive())
    throw InconsistentBrackets("stationary and intermittent certificates on one potential");
  v.evidence = ind;
  if (ind.stationary) {
    v.label = Verdict::StationaryCertified;
    return v;
  }
  if (ind.excess_positive()) {
    v.label = Verdict::Intermittent;
    return v;
  }
  // independent second opinion from the cylinder sums at a moderate depth
  const int depth = std::min(opts.cylinder_depth, 16);
  v.evidence = intersect(ind, pressure_cylinder(phi, params, gamma, depth, opts));
  v.label = v.evidence.excess_positive() ? Verdict::Intermittent : Verdict::Undetermined;
  return v;
}

}  // namespace pmt
