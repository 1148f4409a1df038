#pragma once

#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

namespace pmt {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Running log(sum exp(v_i)).  Order of additions fixes the rounding, so
// callers that need reproducibility add in a fixed order.
class LogSum {
 public:
  void add(double v) {
    if (v == -kInf) return;
    if (v <= m_) {
      s_ += std::exp(v - m_);
    } else {
      s_ = s_ * std::exp(m_ - v) + 1.0;
      m_ = v;
    }
  }

  void merge(const LogSum& o) {
    if (o.m_ == -kInf) return;
    if (o.m_ <= m_) {
      s_ += o.s_ * std::exp(o.m_ - m_);
    } else {
      s_ = s_ * std::exp(m_ - o.m_) + o.s_;
      m_ = o.m_;
    }
  }

  double value() const { return m_ == -kInf ? -kInf : m_ + std::log(s_); }
  bool empty() const { return m_ == -kInf; }

 private:
  double m_ = -kInf;
  double s_ = 0.0;
};

inline double log_add(double a, double b) {
  LogSum s;
  s.add(a);
  s.add(b);
  return s.value();
}

unsigned default_threads();
void set_default_threads(unsigned n);

// Runs f(i) for i in [0, n) on up to `threads` workers.  Work items must
// write to disjoint outputs; the caller merges them in index order.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& f) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(threads, n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        f(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace pmt
