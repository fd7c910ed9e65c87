#include "adiclab/parallel.hpp"

namespace adiclab {

namespace {
std::atomic<unsigned> g_workers{1};
}

void set_worker_count(unsigned jobs) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  g_workers.store(jobs);
}

unsigned worker_count() { return g_workers.load(); }

}  // namespace adiclab
