#include "nys/common.hpp"

#include <atomic>
#include <cinttypes>
#include <cstdio>
#include <mutex>
#include <thread>

namespace nys {

std::string format_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_num(Index v) {
  return std::to_string(static_cast<long long>(v));
}

std::string format_num(uint64_t v) {
  return std::to_string(v);
}

namespace {

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace

uint64_t derive_seed(uint64_t seed, std::string_view purpose) {
  return splitmix64(seed ^ fnv1a64(purpose));
}

uint64_t derive_seed(uint64_t seed, uint64_t index) {
  return splitmix64(splitmix64(seed) ^ (index + 0x51ed270b7a1fca9dull));
}

void run_tasks(Index count, Index jobs, const std::function<void(Index)>& fn) {
  if (count <= 0) return;
  if (jobs <= 1 || count == 1) {
    for (Index i = 0; i < count; ++i) fn(i);
    return;
  }
  jobs = std::min(jobs, count);
  std::atomic<Index> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (;;) {
      const Index i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(jobs));
  for (Index j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace nys
