#include "pmt/numeric.hpp"

#include <cstdlib>

namespace pmt {

namespace {
std::atomic<unsigned> g_threads{0};
}

unsigned default_threads() {
  const unsigned n = g_threads.load();
  if (n > 0) return n;
  if (const char* env = std::getenv("PMT_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

void set_default_threads(unsigned n) { g_threads = n; }

}  // namespace pmt
