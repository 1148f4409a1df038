#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "pmt/linear_form.hpp"
#include "pmt/numeric.hpp"
#include "pmt/pressure.hpp"

namespace pmt {

namespace {

struct Node {
  double a;
  double b;
  EndpointSums sums;
};

// Per-level accumulators for one subtree.
struct LevelSums {
  std::vector<LogSum> sup;
  std::vector<LogSum> inf;
  bool pruned = false;

  explicit LevelSums(int n) : sup(n + 1), inf(n + 1) {}

  void merge(const LevelSums& o) {
    for (std::size_t k = 0; k < sup.size(); ++k) {
      sup[k].merge(o.sup[k]);
      inf[k].merge(o.inf[k]);
    }
    pruned = pruned || o.pruned;
  }
};

class CylinderWalker {
 public:
  CylinderWalker(const PartEvaluator& ev, int depth, double prune_rel)
      : ev_(ev), params_(ev.params()), depth_(depth), prune_log_(std::log(prune_rel)) {}

  Node child(const Node& parent, int symbol) const {
    Node c;
    c.a = inv_branch(params_, symbol, parent.a);
    c.b = inv_branch(params_, symbol, parent.b);
    c.sums.left = parent.sums.left + ev_(c.a);
    c.sums.right = parent.sums.right + ev_(c.b);
    c.sums.slack = parent.sums.slack + ev_.slack_term(c.b - c.a);
    return c;
  }

  void record(const Node& n, int level, LevelSums& out) const {
    out.sup[level].add(ev_.sup_bound(n.sums));
    out.inf[level].add(ev_.inf_bound(n.sums));
  }

  void walk(const Node& n, int level, LevelSums& out) const {
    for (int s = 0; s < 2; ++s) {
      const Node c = child(n, s);
      record(c, level + 1, out);
      if (level + 1 < depth_) {
        // heuristic: drop subtrees whose weight is negligible against the level total
        if (prune_log_ > -kInf && level + 1 > 4) {
          const double w = ev_.sup_bound(c.sums) + (depth_ - level - 1) * kLog2Plus;
          if (w < out.sup[level + 1].value() + prune_log_) {
            out.pruned = true;
            continue;
          }
        }
        walk(c, level + 1, out);
      }
    }
  }

 private:
  static constexpr double kLog2Plus = 0.6931471805599453;
  const PartEvaluator& ev_;
  const MapParams& params_;
  int depth_;
  double prune_log_;
};

void check_depth(int n) {
  if (n < 1) throw std::invalid_argument("cylinder depth must be at least 1");
  if (n > kCylinderDepthLimit)
    throw BudgetError("cylinder depth " + std::to_string(n) + " exceeds the limit " +
                      std::to_string(kCylinderDepthLimit));
}

}  // namespace

PartitionSums partition_sums(const Potential& phi, const MapParams& params, double gamma, int n,
                             const EngineOptions& opts) {
  check_depth(n);
  (void)holder_data(phi, params, gamma);  // validates the exponent
  const PartEvaluator ev(flatten(phi), params);
  const CylinderWalker walker(ev, n, opts.prune_rel > 0.0 ? opts.prune_rel : 0.0);

  // Expand the first levels serially, then hand out the subtrees.  The
  // merge runs in subtree index order so the result ignores the thread count.
  const int split = std::min(n, 10);
  LevelSums total(n);
  std::vector<Node> frontier{Node{0.0, 1.0, {}}};
  for (int level = 0; level < split; ++level) {
    std::vector<Node> next;
    next.reserve(frontier.size() * 2);
    for (const auto& f : frontier)
      for (int s = 0; s < 2; ++s) {
        next.push_back(walker.child(f, s));
        walker.record(next.back(), level + 1, total);
      }
    frontier = std::move(next);
  }
  if (split < n) {
    std::vector<LevelSums> parts(frontier.size(), LevelSums(n));
    const unsigned threads = opts.threads ? opts.threads : default_threads();
    parallel_for(frontier.size(), threads,
                 [&](std::size_t i) { walker.walk(frontier[i], split, parts[i]); });
    for (const auto& p : parts) total.merge(p);
  }

  PartitionSums out;
  out.phi0 = ev.phi0();
  out.log_sup_excess.assign(n + 1, 0.0);
  out.log_inf_excess.assign(n + 1, 0.0);
  for (int k = 1; k <= n; ++k) {
    out.log_sup_excess[k] = total.sup[k].value();
    out.log_inf_excess[k] = total.inf[k].value();
  }
  out.pruned = total.pruned;
  return out;
}

PressureBracket pressure_cylinder(const Potential& phi, const MapParams& params, double gamma,
                                  int n_max, const EngineOptions& opts) {
  const PartitionSums z = partition_sums(phi, params, gamma, n_max, opts);
  PressureBracket b;
  b.method = Method::CylinderFekete;
  b.floor = z.phi0;
  b.n_used = n_max;
  b.pruned = z.pruned;
  b.certified = !z.pruned;
  // Z_n^sup is submultiplicative and Z_n^inf supermultiplicative, so every
  // level gives a bound; keep the best ones.  P >= phi(0) always.
  double up = kInf;
  double lo = 0.0;
  for (int k = 1; k <= n_max; ++k) {
    up = std::min(up, z.log_sup_excess[k] / k);
    lo = std::max(lo, z.log_inf_excess[k] / k);
  }
  b.excess_upper = up;
  b.excess_lower = lo;
  b.log_excess_lower = lo > 0.0 ? std::log(lo) : -kInf;
  std::ostringstream notes;
  notes << "cylinder partition sums to depth " << n_max;
  if (z.pruned) notes << ", pruned";
  b.notes = notes.str();
  return b;
}

std::vector<std::pair<int, double>> pressure_preimage(const Potential& phi,
                                                      const MapParams& params, int n_max,
                                                      double base_x, const EngineOptions& opts) {
  check_depth(n_max);
  if (!(base_x > 0.0 && base_x <= 1.0))
    throw DomainError("preimage base point must lie in (0,1]");
  const PartEvaluator ev(flatten(phi), params);

  struct Point {
    double x;
    double sum;
  };
  // same serial split / ordered merge as the cylinder walk
  const int split = std::min(n_max, 10);
  std::vector<LogSum> level(n_max + 1);
  std::vector<Point> frontier{{base_x, 0.0}};
  auto children = [&](const Point& p, auto&& emit) {
    for (int s = 0; s < 2; ++s) {
      const double y = s == 0 ? inv_left(params, p.x) : inv_right(params, p.x);
      emit(Point{y, p.sum + ev.psi(y)});
    }
  };
  for (int k = 0; k < split; ++k) {
    std::vector<Point> next;
    for (const auto& p : frontier)
      children(p, [&](Point c) {
        level[k + 1].add(c.sum);
        next.push_back(c);
      });
    frontier = std::move(next);
  }
  if (split < n_max) {
    std::vector<std::vector<LogSum>> parts(frontier.size(), std::vector<LogSum>(n_max + 1));
    const unsigned threads = opts.threads ? opts.threads : default_threads();
    parallel_for(frontier.size(), threads, [&](std::size_t i) {
      auto& acc = parts[i];
      auto rec = [&](auto&& self, const Point& p, int k) -> void {
        children(p, [&](Point c) {
          acc[k + 1].add(c.sum);
          if (k + 1 < n_max) self(self, c, k + 1);
        });
      };
      rec(rec, frontier[i], split);
    });
    for (const auto& p : parts)
      for (int k = 0; k <= n_max; ++k) level[k].merge(p[k]);
  }
  std::vector<std::pair<int, double>> out;
  for (int k = 1; k <= n_max; ++k) out.emplace_back(k, level[k].value() / k + ev.phi0());
  return out;
}

}  // namespace pmt
