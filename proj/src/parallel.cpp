#include <cfcm/parallel.hpp>

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace cfcm {

namespace {
constexpr std::size_t kMinChunk = 4096;
}

std::size_t thread_budget() {
  std::size_t n = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CFCM_THREADS")) {
    try {
      const long cap = std::stol(env);
      if (cap >= 1) n = std::min<std::size_t>(n, static_cast<std::size_t>(cap));
    } catch (...) {
      // Unparseable values leave the default in place.
    }
  }
  return n;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body) {
  const std::size_t workers = std::min(thread_budget(), count / kMinChunk);
  if (workers <= 1) {
    if (count > 0) body(0, count);
    return;
  }
  const std::size_t chunk = (count + workers - 1) / workers;
  std::vector<std::jthread> pool;
  for (std::size_t begin = chunk; begin < count; begin += chunk)
    pool.emplace_back([&body, begin, end = std::min(count, begin + chunk)] { body(begin, end); });
  body(0, std::min(count, chunk));
}

}  // namespace cfcm
