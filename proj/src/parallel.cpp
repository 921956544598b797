#include "renorm/parallel.hpp"

namespace renorm {

namespace {
std::atomic<unsigned>& workers() {
  static std::atomic<unsigned> w{default_workers()};
  return w;
}
}  // namespace

void set_worker_count(unsigned n) { workers() = std::max(1u, n); }
unsigned worker_count() { return workers(); }

}  // namespace renorm
