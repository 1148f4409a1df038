#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "pmt/format.hpp"
#include "pmt/linear_form.hpp"
#include "pmt/neutral_series.hpp"
#include "pmt/numeric.hpp"
#include "pmt/pressure.hpp"

namespace pmt {

namespace {

// log of r / (1 - r) for r = e^v, v < 0
double log_geometric(double v) { return v - std::log(-std::expm1(v)); }

struct Branches {
  std::vector<EndpointSums> sums;  // index j = 1..M
  std::vector<double> left;
  std::vector<double> right;
};

// Exact endpoint sums for the branches I_j, j <= M: the orbit of an endpoint
// runs down the neutral orbit, so the Birkhoff sums are prefix sums.
Branches level_one(const PartEvaluator& ev, const ReturnPartition& part) {
  const std::size_t m = part.depth();
  const auto& x = part.orbit.points;
  std::vector<Parts> prefix(m + 1);
  std::vector<double> slack_prefix(m + 1, 0.0);
  for (std::size_t k = 1; k <= m; ++k) {
    prefix[k] = prefix[k - 1] + ev(x[k]);
    slack_prefix[k] = slack_prefix[k - 1] + (k < m ? ev.slack_term(x[k] - x[k + 1]) : 0.0);
  }
  Branches b;
  b.sums.resize(m + 1);
  b.left.resize(m + 1);
  b.right.resize(m + 1);
  Parts prev_right = ev(part.y[1]);
  for (std::size_t j = 1; j <= m; ++j) {
    const Parts at_left = ev(part.left(j));
    b.left[j] = part.left(j);
    b.right[j] = part.right(j);
    b.sums[j].left = at_left + (prefix[j] - prefix[1]);
    b.sums[j].right = prev_right + prefix[j - 1];
    b.sums[j].slack =
        ev.slack_term(part.right(j) - part.left(j)) + (j > 1 ? slack_prefix[j - 1] : 0.0);
    prev_right = at_left;
  }
  return b;
}

// log of r / (1 - r) for r = e^{-p}, as an upper or lower bound that stays
// meaningful when p underflows next to 1
double log_geometric_p(double p, double log_p, bool upper) {
  if (p < 1e-6) return upper ? -log_p + p : -log_p - p;
  return log_geometric(-p);
}

// Increments of the Birkhoff sums on long branches.  A branch with return
// time M + T visits J_M, ..., J_{M+T-1} after the first M - 1 steps; the
// envelope of psi near 0 and the neutral orbit bounds control each visit.
class TailIncrements {
 public:
  TailIncrements(const PartEvaluator& ev, const NeutralBounds& nb, std::size_t m,
                 std::size_t t_max)
      : m_(m), t_max_(t_max) {
    const auto& env = ev.envelope();
    const double alpha = ev.params().alpha();
    auto up_at = [&](double k) {
      double u = 0.0;
      for (const auto& t : env)
        u += t.upper > 0.0 ? t.upper * nb.pow_upper(k, t.power)
                           : t.upper * nb.pow_lower(k + 1, t.power);
      return u;
    };
    auto lo_at = [&](double k) {
      double l = 0.0;
      for (const auto& t : env)
        l += t.lower > 0.0 ? t.lower * nb.pow_lower(k + 1, t.power)
                           : t.lower * nb.pow_upper(k, t.power);
      return l;
    };
    g_up_.assign(t_max + 1, 0.0);
    g_lo_.assign(t_max + 1, 0.0);
    for (std::size_t t = 1; t <= t_max; ++t) {
      const double k = static_cast<double>(m + t - 1);
      g_up_[t] = g_up_[t - 1] + up_at(k);
      g_lo_[t] = g_lo_[t - 1] + lo_at(k);
    }

    const double k0 = static_cast<double>(m + t_max);
    for (const auto& t : env)
      if (t.upper > 0.0) ubar_ += t.upper * nb.pow_upper(k0, t.power);

    // polynomial decay of the increments when the dominant term is negative
    if (!env.empty() && env.front().upper < 0.0) {
      const double q = env.front().power / alpha;
      const double rho = std::max(nb.u_high(k0 + 1) / nb.u_low(k0), alpha / nb.slope());
      double lambda = -env.front().upper;
      for (std::size_t i = 1; i < env.size(); ++i)
        if (env[i].upper > 0.0)
          lambda -= env[i].upper * std::pow(rho, q) *
                    std::pow(nb.u_low(k0), -(env[i].power / alpha - q));
      log_decay_ = log_decay_integral(lambda, q, nb.u_high(k0 + 1), alpha);
    }

    // the negative part of the increments is summable when every negative
    // lower term decays faster than 1/k
    lower_remainder_ = true;
    for (const auto& t : env) {
      if (t.lower >= 0.0) continue;
      const double q = t.power / alpha;
      if (q <= 1.0) {
        lower_remainder_ = false;
        break;
      }
      const double u0 = nb.u_low(k0);
      r_neg_ += -t.lower * (std::pow(u0, -q) + std::pow(u0, 1.0 - q) / (nb.slope() * (q - 1.0)));
    }
  }

  // bounds on log sum_{T>=1} exp(G(T) - p (M+T)), G the summed increments
  double log_sup(double p, double log_p) const {
    LogSum s;
    for (std::size_t t = 1; t <= t_max_; ++t) s.add(g_up_[t] - p * static_cast<double>(m_ + t));
    double factor = log_decay_;
    if (ubar_ == 0.0 && log_p > -kInf)
      factor = std::min(factor, log_geometric_p(p, log_p, true));
    else if (ubar_ - p < 0.0)
      factor = std::min(factor, log_geometric(ubar_ - p));
    if (factor == kInf) return kInf;
    s.add(g_up_[t_max_] - p * static_cast<double>(m_ + t_max_) + factor);
    return s.value();
  }

  double log_inf(double p, double log_p) const {
    LogSum s;
    for (std::size_t t = 1; t <= t_max_; ++t) s.add(g_lo_[t] - p * static_cast<double>(m_ + t));
    if (lower_remainder_) {
      if (log_p == -kInf) return kInf;
      s.add(g_lo_[t_max_] - r_neg_ - p * static_cast<double>(m_ + t_max_) +
            log_geometric_p(p, log_p, false));
    }
    return s.value();
  }

 private:
  std::size_t m_;
  std::size_t t_max_;
  std::vector<double> g_up_;
  std::vector<double> g_lo_;
  double ubar_ = 0.0;
  double log_decay_ = kInf;
  bool lower_remainder_ = false;
  double r_neg_ = 0.0;
};

// Transfer operator of the first return map restricted to functions that
// are constant on a finite partition of (x1, 1].  States are the branch
// intervals I_i (i <= K), the lump (x1, y_{K+1}] of all longer branches,
// and for i <= K2 the split of I_i by the next return.  For y in a state
// and each return time j, G_j(y) lands in one state, so the operator acts
// on such functions through a nonnegative matrix whose entries bracket the
// branch weights.  Collatz-Wielandt bounds on its Perron root then bracket
// exp(P_F(S psi - p tau)) from both sides.
class ReturnMatrix {
 public:
  ReturnMatrix(const PartEvaluator& ev, const ReturnPartition& part, int branching, int refined,
               bool with_tail)
      : ev_(ev), params_(ev.params()), m_(part.depth()), with_tail_(with_tail) {
    k_ = std::max(0, branching);
    k2_ = std::clamp(refined, 0, k_);
    mc_ = std::min<std::size_t>(m_ - 1, std::max<std::size_t>(2 * k_, 32));
    t_max_ = 3 * m_;
    const auto& x = part.orbit.points;
    const auto& y = part.y;
    const double x1 = params_.x1();

    // J_t sums for steps beyond the explicit chains
    std::vector<double> sup_j(m_, 0.0), inf_j(m_, 0.0);
    for (std::size_t t = 1; t < m_; ++t) {
      sup_j[t] = sup_j[t - 1] + ev.sup_on(x[t + 1], x[t]);
      inf_j[t] = inf_j[t - 1] + ev.inf_on(x[t + 1], x[t]);
    }
    c_sup_.assign(m_ + 1, -kInf);
    c_inf_.assign(m_ + 1, -kInf);
    for (std::size_t j = mc_ + 1; j <= m_; ++j) {
      c_sup_[j] = ev.sup_on(y[j + 1], y[j]) + sup_j[j - 1] - sup_j[mc_];
      c_inf_[j] = ev.inf_on(y[j + 1], y[j]) + inf_j[j - 1] - inf_j[mc_];
    }
    tail_shift_sup_ = ev.sup_on(x1, y[m_ + 1]) + sup_j[m_ - 1] - sup_j[mc_];
    tail_shift_inf_ = ev.inf_on(x1, y[m_ + 1]) + inf_j[m_ - 1] - inf_j[mc_];
    tail_ = std::make_unique<TailIncrements>(ev, NeutralBounds(params_, x[m_], m_), m_, t_max_);

    // states
    const int lump = k_ + 1;
    auto branch_interval = [&](int l) {
      return l == lump ? std::pair{x1, y[k_ + 1]} : std::pair{y[l + 1], y[l]};
    };
    auto g = [&](int i, double e) {
      for (int t = 1; t < i; ++t) e = inv_left(params_, e);
      return inv_right_closure(params_, e);
    };
    for (int i = 1; i <= k2_; ++i)
      for (int l = 1; l <= lump; ++l) {
        const auto [a, b] = branch_interval(l);
        states_.push_back({g(i, a), g(i, b), i});
      }
    for (int i = k2_ + 1; i <= k_; ++i) {
      const auto [a, b] = branch_interval(i);
      states_.push_back({a, b, i});
    }
    states_.push_back({x1, y[k_ + 1], lump});

    const std::size_t n = states_.size();
    targets_.resize(n * (k_ + 1));
    for (std::size_t s = 0; s < n; ++s)
      for (int j = 1; j <= lump; ++j) targets_[s * (k_ + 1) + j - 1] = target(states_[s], j);

    a_sup_.assign(n * mc_, 0.0);
    a_inf_.assign(n * mc_, 0.0);
    b_sup_.resize(n);
    b_inf_.resize(n);
    for (std::size_t s = 0; s < n; ++s) fill_state(s);
    h_sup_.assign(n, 1.0);
    h_inf_.assign(n, 1.0);
  }

  std::size_t size() const { return states_.size(); }

  // log of an upper (sup) or lower (inf) bound on the Perron root at
  // p = exp(log_p); log_p = -inf means p = 0
  double log_root(bool sup, double log_p) {
    const double p = std::exp(log_p);
    const std::size_t n = states_.size();
    const std::size_t cols = k_ + 1;

    // shared part of the lump column: branches beyond the explicit chains
    LogSum common;
    const auto& c = sup ? c_sup_ : c_inf_;
    for (std::size_t j = mc_ + 1; j <= m_; ++j) common.add(c[j] - p * static_cast<double>(j));
    const double tl = !with_tail_ ? -kInf : sup ? tail_->log_sup(p, log_p) : tail_->log_inf(p, log_p);
    if (tl == kInf && sup) return kInf;
    common.add((sup ? tail_shift_sup_ : tail_shift_inf_) + tl);
    const double lc = common.value();

    entries_.resize(n * cols);
    double top = -kInf;
    for (std::size_t s = 0; s < n; ++s) {
      const double* a = (sup ? a_sup_ : a_inf_).data() + s * mc_;
      for (int j = 1; j <= k_; ++j) entries_[s * cols + j - 1] = a[j - 1] - p * j;
      LogSum lump;
      for (std::size_t j = k_ + 1; j <= mc_; ++j) lump.add(a[j - 1] - p * static_cast<double>(j));
      lump.add((sup ? b_sup_ : b_inf_)[s] + lc);
      entries_[s * cols + k_] = lump.value();
      for (std::size_t q = 0; q < cols; ++q) top = std::max(top, entries_[s * cols + q]);
    }
    if (top == kInf) return kInf;
    if (top == -kInf) return -kInf;
    // scale into linear range; tiny sup entries are rounded up
    for (auto& e : entries_) {
      const double v = std::exp(e - top);
      e = sup ? std::max(v, 1e-300) : v;
    }

    std::vector<double>& h = sup ? h_sup_ : h_inf_;
    std::vector<double> w(n);
    auto apply = [&] {
      for (std::size_t s = 0; s < n; ++s) {
        double acc = 0.0;
        const double* row = entries_.data() + s * cols;
        const std::size_t* tg = targets_.data() + s * cols;
        for (std::size_t q = 0; q < cols; ++q) acc += row[q] * h[tg[q]];
        w[s] = acc;
      }
    };
    for (int it = 0; it < 40; ++it) {
      apply();
      const double mx = *std::max_element(w.begin(), w.end());
      if (!(mx > 0.0)) return sup ? kInf : -kInf;
      for (std::size_t s = 0; s < n; ++s) h[s] = std::max(w[s] / mx, sup ? 1e-250 : 0.0);
    }
    apply();
    double ratio = sup ? 0.0 : kInf;
    for (std::size_t s = 0; s < n; ++s) {
      if (sup) {
        ratio = std::max(ratio, w[s] / h[s]);
      } else if (h[s] > 0.0) {
        ratio = std::min(ratio, w[s] / h[s]);
      }
    }
    if (!sup && ratio == kInf) return -kInf;
    // a relative margin absorbs the rounding of the matrix-vector products
    const double margin = 1e-12 * static_cast<double>(cols);
    return top + std::log(ratio) + (sup ? margin : -margin);
  }

 private:
  struct State {
    double left;
    double right;
    int first;  // first return time of the state, k_ + 1 for the lump
  };

  std::size_t index_refined(int i, int l) const {
    return static_cast<std::size_t>(i - 1) * (k_ + 1) + (l - 1);
  }

  std::size_t target(const State& s, int j) const {
    if (j <= k2_) return index_refined(j, s.first);
    if (j <= k_) return static_cast<std::size_t>(k2_) * (k_ + 1) + (j - k2_ - 1);
    return states_.size() - 1;
  }

  void fill_state(std::size_t s) {
    const State& st = states_[s];
    std::vector<double> el(mc_ + 1), er(mc_ + 1);
    Parts ql, qr;
    double qs = 0.0;
    el[0] = st.left;
    er[0] = st.right;
    double* as = a_sup_.data() + s * mc_;
    double* ai = a_inf_.data() + s * mc_;
    for (std::size_t j = 1; j <= mc_; ++j) {
      // branch j: G_j(e) = inv_right(e_{j-1}); the chain holds e_1 .. e_{j-1}
      const double gl = inv_right_closure(params_, el[j - 1]);
      const double gr = inv_right_closure(params_, er[j - 1]);
      const EndpointSums sums{ql + ev_(gl), qr + ev_(gr), qs + ev_.slack_term(gr - gl)};
      as[j - 1] = ev_.sup_bound(sums);
      ai[j - 1] = ev_.inf_bound(sums);
      el[j] = inv_left(params_, el[j - 1]);
      er[j] = inv_left(params_, er[j - 1]);
      ql += ev_(el[j]);
      qr += ev_(er[j]);
      qs += ev_.slack_term(er[j] - el[j]);
    }
    const EndpointSums chain{ql, qr, qs};
    b_sup_[s] = ev_.sup_bound(chain);
    b_inf_[s] = ev_.inf_bound(chain);
  }

  const PartEvaluator& ev_;
  const MapParams& params_;
  std::size_t m_;
  bool with_tail_;
  int k_ = 0;
  int k2_ = 0;
  std::size_t mc_ = 0;
  std::size_t t_max_ = 0;
  std::vector<double> c_sup_, c_inf_;
  double tail_shift_sup_ = 0.0;
  double tail_shift_inf_ = 0.0;
  std::unique_ptr<TailIncrements> tail_;
  std::vector<State> states_;
  std::vector<std::size_t> targets_;
  std::vector<double> a_sup_, a_inf_;
  std::vector<double> b_sup_, b_inf_;
  std::vector<double> entries_;
  std::vector<double> h_sup_, h_inf_;
};

// Bracket [exp(lo), exp(hi)] of the root in p of a decreasing certificate
// c(log p): c(lo) >= 0 held at lo, c(hi) < 0 held at hi.  Bisection runs on
// log p so that roots far below the double range are still certified.
struct Root {
  double log_lo = -kInf;
  double log_hi = kInf;
  bool negative_at_zero = false;
};

constexpr double kLogFloor = -1e6;
constexpr double kLogCeil = 9.0;  // p = e^9, far above any excess of interest

template <class F>
Root find_root(F&& cert, bool check_zero) {
  Root r;
  if (check_zero && cert(-kInf) < 0.0) {
    r.negative_at_zero = true;
    r.log_hi = -kInf;
    return r;
  }
  double hi = 0.0;
  while (!(cert(hi) < 0.0)) {
    hi += 1.0;
    if (hi > kLogCeil) {
      r.log_lo = kLogCeil;
      return r;
    }
  }
  double lo = kLogFloor;
  if (cert(lo) < 0.0) {
    r.log_hi = lo;
    return r;
  }
  while (hi - lo > 1e-9 * std::max(1.0, std::abs(hi))) {
    const double mid = 0.5 * (lo + hi);
    if (cert(mid) < 0.0)
      hi = mid;
    else
      lo = mid;
  }
  r.log_lo = lo;
  r.log_hi = hi;
  return r;
}

}  // namespace

double InducedSeries::weight_sup(std::size_t j) const { return std::exp(log_sup.at(j)); }
double InducedSeries::weight_inf(std::size_t j) const { return std::exp(log_inf.at(j)); }

InducedSeries induced_series(const Potential& phi, const MapParams& params, std::size_t m) {
  if (m < 2) throw std::invalid_argument("induced depth must be at least 2");
  const PartEvaluator ev(flatten(phi), params);
  const ReturnPartition part = return_partition(params, m);
  const Branches b = level_one(ev, part);
  InducedSeries s;
  s.phi0 = ev.phi0();
  s.log_sup.assign(m + 1, -kInf);
  s.log_inf.assign(m + 1, -kInf);
  for (std::size_t j = 1; j <= m; ++j) {
    s.log_sup[j] = ev.sup_bound(b.sums[j]);
    s.log_inf[j] = ev.inf_bound(b.sums[j]);
  }
  s.tail_policy = TailPolicy::AnalyticTail;
  s.tail_description = "power envelope of psi near 0 beyond return time " + std::to_string(m);
  return s;
}

PressureBracket pressure_induced(const Potential& phi, const MapParams& params, std::size_t m,
                                 const EngineOptions& opts) {
  if (m < 64) throw std::invalid_argument("induced depth must be at least 64");
  const PartEvaluator ev(flatten(phi), params);
  const ReturnPartition part = return_partition(params, m);
  const int k = std::min<int>(opts.induced_branching, static_cast<int>(m / 4));
  ReturnMatrix mat(ev, part, k, opts.induced_refined, opts.analytic_tail);

  PressureBracket out;
  out.method = Method::InducedRenewal;
  out.floor = ev.phi0();
  out.n_used = static_cast<int>(m);
  out.certified = opts.analytic_tail;

  if (opts.verdict_only) {
    // the two sign tests only: the sup root at p = 0 and the inf root at the
    // smallest p considered, where the lower certificate is strongest
    out.stationary = mat.log_root(true, -kInf) < 0.0;
    out.excess_upper = out.stationary ? 0.0 : kInf;
    if (!out.stationary && mat.log_root(false, kLogFloor) >= 0.0) {
      out.log_excess_lower = kLogFloor;
      out.excess_lower = 0.0;
    }
    out.notes = "sign tests only";
    return out;
  }
  const Root up = find_root([&](double lp) { return mat.log_root(true, lp); }, true);
  out.stationary = up.negative_at_zero;
  if (up.negative_at_zero)
    out.excess_upper = 0.0;
  else
    out.excess_upper = std::max(std::exp(up.log_hi), std::numeric_limits<double>::denorm_min());
  if (!up.negative_at_zero) {
    const Root lo = find_root([&](double lp) { return mat.log_root(false, lp); }, false);
    out.log_excess_lower = lo.log_lo;
    out.excess_lower = std::exp(lo.log_lo);
  }
  std::ostringstream notes;
  notes << "return map to time " << m << " on " << mat.size() << " partition states";
  out.notes = notes.str();
  return out;
}

}  // namespace pmt
