#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>

#include "nys/common.hpp"
#include "nys/dataset.hpp"

namespace nys {

enum class NoiseKind { Bernoulli, Uniform, Gaussian, Zero };

// An i.i.d. noise law. Zero is the dedicated noise-free kind used for
// diagnostics (a degenerate Uniform(a,a) is rejected instead).
struct NoiseSpec {
  NoiseKind kind{NoiseKind::Uniform};
  double p{0.5};           // Bernoulli
  double a{-1.0}, b{1.0};  // Uniform
  double mu{0.0}, sigma{1.0};

  static NoiseSpec bernoulli(double p);
  static NoiseSpec uniform(double a, double b);
  static NoiseSpec gaussian(double mu, double sigma);
  static NoiseSpec zero();

  void validate() const;
  double sample(Rng& rng) const;
  std::string describe() const;
};

// Ordered real-valued observations with a uniform time index.
struct Series {
  std::vector<double> values;
  std::string origin;  // "synthetic(...)" or "file(path)"

  Index size() const { return static_cast<Index>(values.size()); }
};

// A synthetic series together with the realized noise draws, one per
// emitted value. Exposing the noise is what makes denoised test targets
// (target minus the noise that produced it) possible.
struct GeneratedSeries {
  Series series;
  std::vector<double> noise;
  std::string mechanism;
};

// One step of a nonparametric autoregression: given the lag window
// (most recent first), the exogenous window (may be empty) and the noise
// draw for this step, produce the next value. Mechanisms with additive
// noise return f0(lags) + eps; mechanisms like the Bernoulli chain fold
// eps into the map itself.
struct NarMap {
  std::string name;
  Index min_dim{1};
  std::function<double(std::span<const double> lags, std::span<const double> exo, double eps)> step;
};

// Registry shipping the built-in maps: "m1" (half-sine plus noise), "m2"
// (Bernoulli halving chain) and "zero" (pure noise). Unknown ids raise
// std::invalid_argument.
const NarMap& nar_map(std::string_view id);
std::vector<std::string> nar_map_names();

// General driver. x_init holds the d initial states, most recent first;
// exo (when given) must provide at least burn_in + n values. The first
// burn_in steps are discarded.
GeneratedSeries gen_nar(const NarMap& map, Index d, const NoiseSpec& noise, const Series* exo,
                        Index n, std::span<const double> x_init, uint64_t seed,
                        Index burn_in = 0);

// x_t = 0.5 sin(x_{t-1}) + eps_t.
GeneratedSeries gen_m1(Index n, const NoiseSpec& noise, double x0, uint64_t seed,
                       Index burn_in = 0);

// x_t = (x_{t-1} + eps_t)/2 with eps Bernoulli(1/2); requires x0 in [0,1],
// which the recursion then never leaves.
GeneratedSeries gen_m2(Index n, double x0, uint64_t seed, Index burn_in = 0);

std::vector<double> sample_noise(const NoiseSpec& spec, Index n, uint64_t seed);

struct EmbedResult {
  EmbeddedDataset data;
  // Realized noise aligned with targets: noise[i] entered targets[i].
  std::vector<double> noise;
};

// Delay embedding with memory d: pair i has inputs (x_{t-1}, ..., x_{t-d})
// and target x_t for t = d .. len-1, giving len - d pairs.
EmbeddedDataset embed(const Series& s, Index d);
EmbedResult embed(const GeneratedSeries& g, Index d);

// Autocorrelation, biased normalization (total-variance denominator), so
// every value lies in [-1, 1] and acf[0] = 1. Returns max_lag + 1 values.
std::vector<double> acf(const Series& s, Index max_lag);

}  // namespace nys
