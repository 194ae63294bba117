#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nys {

using Index = Eigen::Index;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Points are stored as matrix rows; row-major so each point is contiguous
// and can be handed out as a reference without copying.
using PointMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstPointRef = Eigen::Ref<const Eigen::RowVectorXd>;

// Error categories. The CLI maps these onto its exit codes; library code
// throws std::invalid_argument for violated operation preconditions.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnsupportedKernelError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Formats with 17 significant digits so a scan of the text reproduces the
// exact double.
std::string format_num(double v);
std::string format_num(Index v);
std::string format_num(uint64_t v);

// Deterministic RNG used for every random quantity in the project.
//
// Engine: std::mt19937_64, whose output sequence is fixed by the C++
// standard, seeded directly. Each helper consumes a fixed number of engine
// draws (uniform, bernoulli and pick_index one; gaussian two; zero-noise
// sampling none), so consumers can reason about stream positions.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t raw() { return engine_(); }

  // Uniform on [0,1) with 53 random bits.
  double uniform01() { return static_cast<double>(raw() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // Box-Muller; two engine draws per sample, no cached state.
  double gaussian(double mu, double sigma) {
    double u1 = uniform01();
    double u2 = uniform01();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return mu + sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  bool bernoulli(double p) { return uniform01() < p; }

  // Uniform index in [0, n). Exactly one engine draw; the modulo bias is
  // below n * 2^-64, far beneath anything the uniformity checks resolve.
  Index pick_index(Index n) {
    return static_cast<Index>(raw() % static_cast<uint64_t>(n));
  }

 private:
  std::mt19937_64 engine_;
};

// Stream splitting: hash (seed, purpose) into a fresh seed so adding a new
// consumer never shifts the draws of an existing one.
uint64_t derive_seed(uint64_t seed, std::string_view purpose);
uint64_t derive_seed(uint64_t seed, uint64_t index);

// Runs fn(0..count-1) on up to `jobs` worker threads. Tasks must be
// independent; the first exception thrown by any task is rethrown to the
// caller after all workers stop.
void run_tasks(Index count, Index jobs, const std::function<void(Index)>& fn);

}  // namespace nys
