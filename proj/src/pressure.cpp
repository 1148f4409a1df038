#include "pmt/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pmt/format.hpp"

namespace pmt {

std::string to_string(Method m) {
  switch (m) {
    case Method::CylinderFekete: return "cylinder";
    case Method::InducedRenewal: return "induced";
    case Method::Combined: return "combined";
  }
  return "?";
}

PressureBracket intersect(const PressureBracket& a, const PressureBracket& b) {
  PressureBracket out = a;
  out.method = Method::Combined;
  out.floor = a.floor;
  // both floors come from the same phi(0); shift b onto a's floor if they differ
  const double shift = b.floor - a.floor;
  const double lo = std::max(a.excess_lower, b.excess_lower + shift);
  const double hi = std::min(a.excess_upper, b.excess_upper + shift);
  const double slack = 1e-12 * std::max(1.0, std::abs(hi));
  if (lo > hi + slack) {
    std::ostringstream msg;
    msg << "disjoint pressure brackets [" << format_double(a.lower()) << ", "
        << format_double(a.upper()) << "] (" << to_string(a.method) << ") and ["
        << format_double(b.lower()) << ", " << format_double(b.upper()) << "] ("
        << to_string(b.method) << ")";
    throw InconsistentBrackets(msg.str());
  }
  out.excess_lower = std::min(lo, hi);
  out.log_excess_lower = shift == 0.0 ? std::max(a.log_excess_lower, b.log_excess_lower)
                                      : (lo > 0.0 ? std::log(lo) : -kInf);
  out.excess_upper = hi;
  out.n_used = std::max(a.n_used, b.n_used);
  out.pruned = a.pruned || b.pruned;
  out.certified = a.certified && b.certified;
  out.stationary = a.stationary || b.stationary;
  out.notes = a.notes + "; " + b.notes;
  return out;
}

PressureBracket pressure(const Potential& phi, const MapParams& params, double gamma, double tol,
                         const EngineOptions& opts) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  (void)holder_data(phi, params, gamma);

  struct Stage {
    int depth;
    std::size_t induced;
  };
  const int n = opts.cylinder_depth;
  const std::size_t m = opts.induced_depth;
  const std::vector<Stage> stages{{std::min(n, 14), std::max<std::size_t>(m / 8, 64)},
                                  {std::min(n, 18), std::max<std::size_t>(m / 4, 64)},
                                  {std::min(n, 20), std::max<std::size_t>(m / 2, 64)},
                                  {n, std::max<std::size_t>(m, 64)}};
  PressureBracket best;
  bool have = false;
  for (const auto& s : stages) {
    const PressureBracket ind = pressure_induced(phi, params, s.induced, opts);
    best = have ? intersect(best, ind) : ind;
    have = true;
    if (best.width() <= tol) break;
    best = intersect(best, pressure_cylinder(phi, params, gamma, s.depth, opts));
    if (best.width() <= tol) break;
  }
  return best;
}

}  // namespace pmt
