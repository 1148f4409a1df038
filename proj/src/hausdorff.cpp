#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pmt/numeric.hpp"
#include "pmt/phase.hpp"

namespace pmt {

namespace {

// Induced system on J_0 with branches G_j : J_0 -> I_j, j = 1..n.  States are
// the depth-two cylinders G_a G_b (J_0); the weight of branch j on state (a, b)
// is |DF_j|^{-beta}, bounded at the state's endpoints because log DF_j is
// increasing along J_0.
class BranchSystem {
 public:
  BranchSystem(const MapParams& params, int n) : n_(n) {
    const std::size_t states = static_cast<std::size_t>(n) * n;
    lo_sum_.resize(states * n);
    hi_sum_.resize(states * n);
    for (int a = 1; a <= n; ++a)
      for (int b = 1; b <= n; ++b) {
        const double l = branch(params, a, branch(params, b, params.x1()).first).first;
        const double r = branch(params, a, branch(params, b, 1.0).first).first;
        for (int j = 1; j <= n; ++j) {
          lo_sum_[index(a, b, j)] = branch(params, j, l).second;
          hi_sum_[index(a, b, j)] = branch(params, j, r).second;
        }
      }
  }

  int states() const { return n_ * n_; }

  // Collatz-Wielandt bound on log rho of the |DF|^{-beta} matrix
  double log_radius(double beta, bool upper, std::vector<double>& v) const {
    const std::size_t s = states();
    const std::vector<double>& sums = upper ? lo_sum_ : hi_sum_;
    if (v.size() != s) v.assign(s, 1.0);
    std::vector<double> w(s);
    auto apply = [&](const std::vector<double>& in, std::vector<double>& out) {
      for (int a = 1; a <= n_; ++a)
        for (int b = 1; b <= n_; ++b) {
          double acc = 0.0;
          for (int j = 1; j <= n_; ++j)
            acc += std::exp(-beta * sums[index(a, b, j)]) * in[state(j, a)];
          out[state(a, b)] = acc;
        }
    };
    for (int it = 0; it < 60; ++it) {
      apply(v, w);
      const double mx = *std::max_element(w.begin(), w.end());
      for (std::size_t i = 0; i < s; ++i) v[i] = std::max(w[i] / mx, 1e-300);
    }
    apply(v, w);
    double r = upper ? 0.0 : kInf;
    for (std::size_t i = 0; i < s; ++i) {
      const double q = w[i] / v[i];
      r = upper ? std::max(r, q) : std::min(r, q);
    }
    const double margin = 1e-12 * static_cast<double>(n_);
    return std::log(r) + (upper ? margin : -margin);
  }

 private:
  // (G_j(e), sum of log Df along the j points of its orbit segment)
  static std::pair<double, double> branch(const MapParams& params, int j, double e) {
    double sum = 0.0;
    double x = e;
    for (int t = 1; t < j; ++t) {
      x = inv_left(params, x);
      sum += log_deriv(params, x);
    }
    x = inv_right_closure(params, x);
    sum += log_deriv(params, x);
    return {x, sum};
  }

  std::size_t state(int a, int b) const { return static_cast<std::size_t>(a - 1) * n_ + (b - 1); }
  std::size_t index(int a, int b, int j) const { return state(a, b) * n_ + (j - 1); }

  int n_;
  std::vector<double> lo_sum_;
  std::vector<double> hi_sum_;
};

}  // namespace

DimensionBracket hausdorff_subsystem(const MapParams& params, int n, double tol,
                                     const EngineOptions& /*opts*/) {
  if (n < 1) throw std::invalid_argument("need at least one branch");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  const double work = std::pow(static_cast<double>(n), 3);
  if (work > 3e7)
    throw BudgetError("branch system with " + std::to_string(n) + " branches exceeds the budget");

  const BranchSystem sys(params, n);
  DimensionBracket out;
  out.branches = n;
  out.depth = 2;

  // the radius bounds decrease in beta; the root lies in [0, 1]
  auto root = [&](bool upper) {
    std::vector<double> v;
    double lo = 0.0, hi = 1.0;
    // at beta = 0 every weight is 1 and the radius is exactly n
    if (upper && n == 1) return 0.0;
    if (upper && sys.log_radius(0.0, true, v) <= 0.0) return 0.0;
    if (!upper && sys.log_radius(1.0, false, v) >= 0.0) return 1.0;
    while (hi - lo > 0.25 * tol) {
      const double mid = 0.5 * (lo + hi);
      const double lr = sys.log_radius(mid, upper, v);
      if (upper ? lr <= 0.0 : lr < 0.0)
        hi = mid;
      else
        lo = mid;
    }
    return upper ? hi : lo;
  };
  out.hi = root(true);
  out.lo = root(false);
  return out;
}

}  // namespace pmt
