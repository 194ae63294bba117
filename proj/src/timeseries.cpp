#include "nys/timeseries.hpp"

#include <cmath>
#include <map>

namespace nys {

NoiseSpec NoiseSpec::bernoulli(double p) {
  NoiseSpec s;
  s.kind = NoiseKind::Bernoulli;
  s.p = p;
  s.validate();
  return s;
}

NoiseSpec NoiseSpec::uniform(double a, double b) {
  NoiseSpec s;
  s.kind = NoiseKind::Uniform;
  s.a = a;
  s.b = b;
  s.validate();
  return s;
}

NoiseSpec NoiseSpec::gaussian(double mu, double sigma) {
  NoiseSpec s;
  s.kind = NoiseKind::Gaussian;
  s.mu = mu;
  s.sigma = sigma;
  s.validate();
  return s;
}

NoiseSpec NoiseSpec::zero() {
  NoiseSpec s;
  s.kind = NoiseKind::Zero;
  return s;
}

void NoiseSpec::validate() const {
  switch (kind) {
    case NoiseKind::Bernoulli:
      if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("bernoulli noise requires p in [0,1], got " + format_num(p));
      }
      break;
    case NoiseKind::Uniform:
      if (!(a < b)) {
        throw std::invalid_argument("uniform noise requires a < b, got a=" + format_num(a) +
                                    " b=" + format_num(b) + " (use the zero kind for no noise)");
      }
      break;
    case NoiseKind::Gaussian:
      if (!(sigma > 0.0)) {
        throw std::invalid_argument("gaussian noise requires sigma > 0, got " +
                                    format_num(sigma));
      }
      break;
    case NoiseKind::Zero:
      break;
  }
}

double NoiseSpec::sample(Rng& rng) const {
  switch (kind) {
    case NoiseKind::Bernoulli: return rng.bernoulli(p) ? 1.0 : 0.0;
    case NoiseKind::Uniform: return rng.uniform(a, b);
    case NoiseKind::Gaussian: return rng.gaussian(mu, sigma);
    case NoiseKind::Zero: return 0.0;
  }
  throw std::invalid_argument("unknown noise kind");
}

std::string NoiseSpec::describe() const {
  switch (kind) {
    case NoiseKind::Bernoulli: return "bernoulli(" + format_num(p) + ")";
    case NoiseKind::Uniform: return "uniform(" + format_num(a) + "," + format_num(b) + ")";
    case NoiseKind::Gaussian: return "gaussian(" + format_num(mu) + "," + format_num(sigma) + ")";
    case NoiseKind::Zero: return "zero";
  }
  return "?";
}

namespace {

const std::map<std::string, NarMap, std::less<>>& registry() {
  static const std::map<std::string, NarMap, std::less<>> maps = {
      {"m1",
       {"m1", 1,
        [](std::span<const double> lags, std::span<const double>, double eps) {
          return 0.5 * std::sin(lags[0]) + eps;
        }}},
      {"m2",
       {"m2", 1,
        [](std::span<const double> lags, std::span<const double>, double eps) {
          return 0.5 * (lags[0] + eps);
        }}},
      {"zero",
       {"zero", 1,
        [](std::span<const double>, std::span<const double>, double eps) { return eps; }}},
  };
  return maps;
}

}  // namespace

const NarMap& nar_map(std::string_view id) {
  const auto& maps = registry();
  auto it = maps.find(id);
  if (it == maps.end()) {
    std::string known;
    for (const auto& [k, v] : maps) {
      if (!known.empty()) known += ", ";
      known += k;
    }
    throw std::invalid_argument("unknown map id '" + std::string(id) + "' (registered: " +
                                known + ")");
  }
  return it->second;
}

std::vector<std::string> nar_map_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : registry()) out.push_back(k);
  return out;
}

GeneratedSeries gen_nar(const NarMap& map, Index d, const NoiseSpec& noise, const Series* exo,
                        Index n, std::span<const double> x_init, uint64_t seed, Index burn_in) {
  if (n < 1) throw std::invalid_argument("gen_nar: n must be >= 1, got " + format_num(n));
  if (d < map.min_dim) {
    throw std::invalid_argument("gen_nar: map '" + map.name + "' needs memory >= " +
                                format_num(map.min_dim));
  }
  if (static_cast<Index>(x_init.size()) != d) {
    throw std::invalid_argument("gen_nar: x_init must hold exactly d=" + format_num(d) +
                                " values, got " + format_num(static_cast<Index>(x_init.size())));
  }
  if (burn_in < 0) throw std::invalid_argument("gen_nar: burn_in must be >= 0");
  if (exo != nullptr && exo->size() < burn_in + n) {
    throw std::invalid_argument("gen_nar: exogenous series too short (" + format_num(exo->size()) +
                                " < " + format_num(burn_in + n) + ")");
  }
  noise.validate();

  Rng rng(seed);
  std::vector<double> lags(x_init.begin(), x_init.end());  // most recent first
  GeneratedSeries out;
  out.mechanism = map.name;
  out.series.origin = "synthetic(" + map.name + ",noise=" + noise.describe() + ",seed=" +
                      format_num(seed) + ")";
  out.series.values.reserve(static_cast<size_t>(n));
  out.noise.reserve(static_cast<size_t>(n));

  for (Index t = 0; t < burn_in + n; ++t) {
    const double eps = noise.sample(rng);
    double exo_val = 0.0;
    std::span<const double> exo_window;
    if (exo != nullptr) {
      exo_val = exo->values[static_cast<size_t>(t)];
      exo_window = std::span<const double>(&exo_val, 1);
    }
    const double x = map.step(lags, exo_window, eps);
    if (!std::isfinite(x)) {
      throw NumericalError("gen_nar: map '" + map.name + "' produced a non-finite value at step " +
                           format_num(t));
    }
    for (Index k = d - 1; k > 0; --k) lags[static_cast<size_t>(k)] = lags[static_cast<size_t>(k - 1)];
    lags[0] = x;
    if (t >= burn_in) {
      out.series.values.push_back(x);
      out.noise.push_back(eps);
    }
  }
  return out;
}

GeneratedSeries gen_m1(Index n, const NoiseSpec& noise, double x0, uint64_t seed, Index burn_in) {
  const double init[1] = {x0};
  return gen_nar(nar_map("m1"), 1, noise, nullptr, n, init, seed, burn_in);
}

GeneratedSeries gen_m2(Index n, double x0, uint64_t seed, Index burn_in) {
  if (!(x0 >= 0.0 && x0 <= 1.0)) {
    throw std::invalid_argument("gen_m2: x0 must lie in [0,1], got " + format_num(x0));
  }
  const double init[1] = {x0};
  return gen_nar(nar_map("m2"), 1, NoiseSpec::bernoulli(0.5), nullptr, n, init, seed, burn_in);
}

std::vector<double> sample_noise(const NoiseSpec& spec, Index n, uint64_t seed) {
  spec.validate();
  if (n < 0) throw std::invalid_argument("sample_noise: n must be >= 0");
  Rng rng(seed);
  std::vector<double> out(static_cast<size_t>(n));
  for (auto& v : out) v = spec.sample(rng);
  return out;
}

EmbeddedDataset embed(const Series& s, Index d) {
  if (d < 1) throw std::invalid_argument("embed: memory d must be >= 1, got " + format_num(d));
  const Index len = s.size();
  if (len < d + 1) {
    throw std::invalid_argument("embed: series of length " + format_num(len) +
                                " too short for memory d=" + format_num(d) +
                                " (need at least d+1 values)");
  }
  const Index pairs = len - d;
  EmbeddedDataset out;
  out.inputs.resize(pairs, d);
  out.targets.resize(pairs);
  for (Index i = 0; i < pairs; ++i) {
    const Index t = d + i;
    for (Index j = 0; j < d; ++j) {
      out.inputs(i, j) = s.values[static_cast<size_t>(t - 1 - j)];
    }
    out.targets(i) = s.values[static_cast<size_t>(t)];
  }
  out.validate();
  return out;
}

EmbedResult embed(const GeneratedSeries& g, Index d) {
  EmbedResult out;
  out.data = embed(g.series, d);
  if (g.noise.size() == g.series.values.size()) {
    const Index pairs = out.data.n();
    out.noise.resize(static_cast<size_t>(pairs));
    for (Index i = 0; i < pairs; ++i) {
      out.noise[static_cast<size_t>(i)] = g.noise[static_cast<size_t>(d + i)];
    }
  }
  return out;
}

std::vector<double> acf(const Series& s, Index max_lag) {
  if (max_lag < 1) {
    throw std::invalid_argument("acf: max_lag must be >= 1, got " + format_num(max_lag));
  }
  const Index len = s.size();
  if (len <= max_lag) {
    throw std::invalid_argument("acf: series length " + format_num(len) +
                                " must exceed max_lag " + format_num(max_lag));
  }
  double mean = 0.0;
  for (double v : s.values) mean += v;
  mean /= static_cast<double>(len);
  double var = 0.0;
  for (double v : s.values) var += (v - mean) * (v - mean);
  if (var <= 0.0) {
    throw DataError("acf: series has zero variance");
  }
  std::vector<double> out(static_cast<size_t>(max_lag + 1));
  for (Index k = 0; k <= max_lag; ++k) {
    double acc = 0.0;
    for (Index t = 0; t + k < len; ++t) {
      acc += (s.values[static_cast<size_t>(t)] - mean) *
             (s.values[static_cast<size_t>(t + k)] - mean);
    }
    out[static_cast<size_t>(k)] = acc / var;
  }
  return out;
}

}  // namespace nys
