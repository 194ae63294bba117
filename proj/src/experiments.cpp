#include "nys/experiments.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>

namespace nys {

double rmse(std::span<const double> pred, std::span<const double> truth) {
  if (pred.size() != truth.size() || pred.empty()) {
    throw std::invalid_argument("rmse: inputs must be nonempty and of equal length (" +
                                format_num(static_cast<Index>(pred.size())) + " vs " +
                                format_num(static_cast<Index>(truth.size())) + ")");
  }
  double acc = 0.0;
  for (size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - truth[i];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(pred.size()));
}

double rmse(const Vec& pred, const Vec& truth) {
  return rmse(std::span<const double>(pred.data(), static_cast<size_t>(pred.size())),
              std::span<const double>(truth.data(), static_cast<size_t>(truth.size())));
}

namespace {

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Vec score_targets(const EmbeddedDataset& test, std::span<const double> test_noise,
                  TargetMode target) {
  Vec out = test.targets;
  if (target == TargetMode::Denoised) {
    if (static_cast<Index>(test_noise.size()) != test.n()) {
      throw std::invalid_argument(
          "denoised evaluation requires the realized test noise (have " +
          format_num(static_cast<Index>(test_noise.size())) + " values for " +
          format_num(test.n()) + " test points)");
    }
    for (Index i = 0; i < out.size(); ++i) out(i) -= test_noise[static_cast<size_t>(i)];
  }
  return out;
}

}  // namespace

OneStepResult one_step_eval(const EmbeddedDataset& train, const EmbeddedDataset& test,
                            std::span<const double> test_noise, const KernelSpec& kernel,
                            double lambda, const SubsampleSpec& spec,
                            const EvalProtocol& protocol, uint64_t seed) {
  train.validate();
  test.validate();
  if (train.dim() != test.dim()) {
    throw std::invalid_argument("one_step_eval: train and test dimensions differ");
  }
  if (protocol.n_train != train.n() || protocol.n_test != test.n()) {
    throw std::invalid_argument("one_step_eval: protocol sizes (" + format_num(protocol.n_train) +
                                "," + format_num(protocol.n_test) +
                                ") do not match the datasets (" + format_num(train.n()) + "," +
                                format_num(test.n()) + ")");
  }
  const Vec targets = score_targets(test, test_noise, protocol.target);

  OneStepResult out;
  out.predictions.resize(test.n());

  if (protocol.refit == RefitMode::Once) {
    Rng rng(derive_seed(seed, "subsample"));
    const IndexSet idx = resolve(spec, train.n(), rng);
    const NystromModel model = fit_nystrom(train, kernel, lambda, idx, -1.0, seed);
    out.predictions = predict_batch(model, test.inputs);
  } else {
    // Grow the training set by the revealed test pairs, noisy targets
    // included, refitting before each prediction.
    const Index total = train.n() + test.n();
    PointMat grown_inputs(total, train.dim());
    Vec grown_targets(total);
    grown_inputs.topRows(train.n()) = train.inputs;
    grown_targets.head(train.n()) = train.targets;
    for (Index k = 0; k < test.n(); ++k) {
      const Index n_k = train.n() + k;
      EmbeddedDataset grown;
      grown.inputs = grown_inputs.topRows(n_k);
      grown.targets = grown_targets.head(n_k);
      const uint64_t step_seed = derive_seed(derive_seed(seed, "step"), static_cast<uint64_t>(k));
      Rng rng(step_seed);
      const IndexSet idx = resolve(spec, n_k, rng);
      const NystromModel model = fit_nystrom(grown, kernel, lambda, idx, -1.0, step_seed);
      out.predictions(k) = predict(model, test.inputs.row(k));
      grown_inputs.row(n_k) = test.inputs.row(k);
      grown_targets(n_k) = test.targets(k);
    }
  }
  out.rmse = rmse(out.predictions, targets);
  return out;
}

CvResult cross_validate(const EmbeddedDataset& train, const KernelSpec& kernel,
                        std::span<const double> lambda_grid, const SubsampleSpec& spec,
                        double holdout_fraction, uint64_t seed) {
  train.validate();
  if (lambda_grid.empty()) {
    throw std::invalid_argument("cross_validate: lambda grid must be nonempty");
  }
  if (!(holdout_fraction > 0.0 && holdout_fraction <= 0.5)) {
    throw std::invalid_argument("cross_validate: holdout fraction must lie in (0, 0.5], got " +
                                format_num(holdout_fraction));
  }
  const Index n = train.n();
  const Index n_tail = std::max<Index>(1, static_cast<Index>(std::floor(
                                              static_cast<double>(n) * holdout_fraction)));
  const Index n_head = n - n_tail;
  if (n_head < 1) {
    throw std::invalid_argument("cross_validate: dataset too small to split (n=" +
                                format_num(n) + ")");
  }

  CvResult out;
  out.head_size = n_head;
  {
    std::set<double> dedup(lambda_grid.begin(), lambda_grid.end());
    out.grid.assign(dedup.begin(), dedup.end());
  }

  const EmbeddedDataset head = train.slice(0, n_head);
  const EmbeddedDataset tail = train.slice(n_head, n_tail);

  Rng rng(derive_seed(seed, "cv-subsample"));
  const IndexSet idx = resolve(spec, n_head, rng);

  out.scores.reserve(out.grid.size());
  double best_score = std::numeric_limits<double>::infinity();
  // Ascending grid with <= keeps the larger lambda on ties.
  for (double lambda : out.grid) {
    const NystromModel model = fit_nystrom(head, kernel, lambda, idx, -1.0, seed);
    const double score = rmse(predict_batch(model, tail.inputs), tail.targets);
    out.scores.push_back(score);
    if (score <= best_score) {
      best_score = score;
      out.best_lambda = lambda;
    }
  }
  return out;
}

GeneratedSeries generate_series(const MechanismConfig& mech, Index length, uint64_t seed) {
  const NarMap& map = nar_map(mech.map_id);
  std::vector<double> init(static_cast<size_t>(mech.d));
  Rng init_rng(derive_seed(seed, "x0"));
  for (auto& v : init) v = mech.x0.has_value() ? *mech.x0 : init_rng.uniform01();
  return gen_nar(map, mech.d, mech.noise, nullptr, length, init, derive_seed(seed, "series"),
                 mech.burn_in);
}

TrialData make_trial(const MechanismConfig& mech, Index n_train, Index n_test, uint64_t seed) {
  if (n_train < 1 || n_test < 0) {
    throw std::invalid_argument("make_trial: need n_train >= 1 and n_test >= 0");
  }
  const GeneratedSeries g = generate_series(mech, n_train + n_test + mech.d, seed);
  const EmbedResult emb = embed(g, mech.d);
  TrialData out;
  out.train = emb.data.slice(0, n_train);
  if (n_test > 0) {
    out.test = emb.data.slice(n_train, n_test);
    out.test_noise.assign(emb.noise.begin() + n_train, emb.noise.begin() + n_train + n_test);
  }
  return out;
}

namespace {

struct SweepTaskResult {
  double rmse{0.0};
  double lambda{0.0};
  double runtime_s{0.0};
};

// Shared per-trial pipeline: data from the rep-keyed seed, lambda fixed or
// cross-validated on the training head, then a one-step evaluation under
// the sweep protocol.
SweepTaskResult run_trial(const MechanismConfig& mech, const KernelSpec& kernel, Index n,
                          const SubsampleSpec& spec, const LambdaSelection& lambda_sel,
                          const SweepSettings& settings, uint64_t data_seed, uint64_t task_seed) {
  const auto t0 = std::chrono::steady_clock::now();
  const TrialData trial = make_trial(mech, n, settings.n_test, data_seed);

  double lambda;
  if (lambda_sel.is_fixed()) {
    lambda = lambda_sel.grid[0];
  } else {
    lambda = cross_validate(trial.train, kernel, lambda_sel.grid, spec,
                            lambda_sel.holdout_fraction, derive_seed(task_seed, "cv"))
                 .best_lambda;
  }

  EvalProtocol protocol;
  protocol.n_train = n;
  protocol.n_test = settings.n_test;
  protocol.refit = settings.refit;
  protocol.target = settings.target;
  const OneStepResult eval = one_step_eval(trial.train, trial.test, trial.test_noise, kernel,
                                           lambda, spec, protocol, derive_seed(task_seed, "eval"));
  return {eval.rmse, lambda, elapsed_s(t0)};
}

// The row seed is keyed by repetition only, so trials on different axis
// points share their generated series (paired comparisons); everything a
// trial needs derives from (row seed, label), both of which land in the
// output row.
uint64_t rep_seed_for(uint64_t master_seed, Index rep) {
  return derive_seed(derive_seed(master_seed, "rep"), static_cast<uint64_t>(rep));
}

uint64_t data_seed_for(uint64_t rep_seed) { return derive_seed(rep_seed, "data"); }

uint64_t task_seed_for(uint64_t rep_seed, const std::string& label) {
  return derive_seed(rep_seed, "point:" + label);
}

struct PointPlan {
  std::string label;
  double axis{0.0};
  Index n{0};
  SubsampleSpec spec;
};

// Runs reps trials per planned point, in parallel when asked, gathering
// rows in (point, rep) order regardless of completion order.
SweepResult run_sweep(const MechanismConfig& mech, const KernelSpec& kernel,
                      std::span<const PointPlan> plan, const LambdaSelection& lambda_sel,
                      const SweepSettings& settings, uint64_t master_seed) {
  if (settings.reps < 1) {
    throw std::invalid_argument("sweep: reps must be >= 1, got " + format_num(settings.reps));
  }
  const Index n_points = static_cast<Index>(plan.size());
  const Index total = n_points * settings.reps;
  std::vector<TrialRow> rows(static_cast<size_t>(total));

  run_tasks(total, settings.jobs, [&](Index task) {
    const Index point = task / settings.reps;
    const Index rep = task % settings.reps;
    const PointPlan& p = plan[static_cast<size_t>(point)];
    const uint64_t rep_seed = rep_seed_for(master_seed, rep);
    const SweepTaskResult r = run_trial(mech, kernel, p.n, p.spec, lambda_sel, settings,
                                        data_seed_for(rep_seed), task_seed_for(rep_seed, p.label));
    TrialRow& row = rows[static_cast<size_t>(task)];
    row.label = p.label;
    row.n = p.n;
    row.m = p.spec.m;
    row.lambda = r.lambda;
    row.seed = rep_seed;
    row.rmse = r.rmse;
    row.runtime_s = r.runtime_s;
  });

  SweepResult out;
  out.rows = std::move(rows);
  out.points.reserve(static_cast<size_t>(n_points));
  for (Index p = 0; p < n_points; ++p) {
    double mean = 0.0, rt = 0.0;
    for (Index r = 0; r < settings.reps; ++r) {
      const TrialRow& row = out.rows[static_cast<size_t>(p * settings.reps + r)];
      mean += row.rmse;
      rt += row.runtime_s;
    }
    mean /= static_cast<double>(settings.reps);
    rt /= static_cast<double>(settings.reps);
    double sq = 0.0;
    for (Index r = 0; r < settings.reps; ++r) {
      const double d = out.rows[static_cast<size_t>(p * settings.reps + r)].rmse - mean;
      sq += d * d;
    }
    const double sd =
        settings.reps > 1 ? std::sqrt(sq / static_cast<double>(settings.reps - 1)) : 0.0;
    out.points.push_back({plan[static_cast<size_t>(p)].label,
                          plan[static_cast<size_t>(p)].axis, mean, sd, rt});
  }
  return out;
}

}  // namespace

SweepResult ratio_sweep(const MechanismConfig& mech, const KernelSpec& kernel, Index n,
                        std::span<const double> ratios, const LambdaSelection& lambda_sel,
                        const SweepSettings& settings, uint64_t master_seed) {
  if (ratios.empty()) throw std::invalid_argument("ratio_sweep: no ratios given");
  std::vector<PointPlan> plan;
  plan.reserve(ratios.size());
  for (double ratio : ratios) {
    if (!(ratio > 0.0 && ratio <= 1.0)) {
      throw std::invalid_argument("ratio_sweep: ratios must lie in (0, 1], got " +
                                  format_num(ratio));
    }
    const Index m = std::max<Index>(1, static_cast<Index>(std::floor(ratio * static_cast<double>(n))));
    PointPlan p;
    p.label = format_num(ratio);
    p.axis = ratio;
    p.n = n;
    p.spec = SubsampleSpec::random_start(m);
    plan.push_back(std::move(p));
  }
  return run_sweep(mech, kernel, plan, lambda_sel, settings, master_seed);
}

SweepResult scaling_sweep(const MechanismConfig& mech, const KernelSpec& kernel,
                          std::span<const Index> ns, double ratio,
                          const LambdaSelection& lambda_sel, const SweepSettings& settings,
                          uint64_t master_seed) {
  if (ns.empty()) throw std::invalid_argument("scaling_sweep: no sample sizes given");
  if (!(ratio > 0.0 && ratio <= 1.0)) {
    throw std::invalid_argument("scaling_sweep: ratio must lie in (0, 1], got " +
                                format_num(ratio));
  }
  for (size_t i = 1; i < ns.size(); ++i) {
    if (ns[i] <= ns[i - 1]) {
      throw std::invalid_argument("scaling_sweep: sample sizes must be strictly increasing");
    }
  }
  std::vector<PointPlan> plan;
  plan.reserve(ns.size());
  for (Index n : ns) {
    const Index m = std::max<Index>(1, static_cast<Index>(std::floor(ratio * static_cast<double>(n))));
    PointPlan p;
    p.label = format_num(n);
    p.axis = static_cast<double>(n);
    p.n = n;
    p.spec = SubsampleSpec::random_start(m);
    plan.push_back(std::move(p));
  }
  SweepResult out = run_sweep(mech, kernel, plan, lambda_sel, settings, master_seed);

  if (out.points.size() >= 2) {
    // Least-squares slope of log(mean RMSE) against log(n).
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double k = static_cast<double>(out.points.size());
    for (const SweepPoint& p : out.points) {
      const double x = std::log(p.axis);
      const double y = std::log(std::max(p.rmse_mean, 1e-300));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    out.loglog_slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  }
  return out;
}

SweepResult placement_study(const MechanismConfig& mech, const KernelSpec& kernel, Index n,
                            Index m, std::span<const std::string> positions,
                            std::span<const Index> gaps, const LambdaSelection& lambda_sel,
                            const SweepSettings& settings, uint64_t master_seed) {
  if (positions.empty() && gaps.empty()) {
    throw std::invalid_argument("placement_study: no strategies given");
  }
  std::vector<PointPlan> plan;
  double axis = 0.0;
  for (const std::string& pos : positions) {
    PointPlan p;
    p.spec = SubsampleSpec::positional(m, pos);
    p.label = std::string(1, static_cast<char>(std::toupper(pos[0]))) + pos.substr(1);
    p.axis = axis++;
    p.n = n;
    plan.push_back(std::move(p));
  }
  for (Index gap : gaps) {
    PointPlan p;
    p.spec = SubsampleSpec::strided(m, 0, gap);
    if ((m - 1) * (gap + 1) > n - 1) {
      throw std::invalid_argument("placement_study: strategy Intv." + format_num(gap) +
                                  " spans beyond n=" + format_num(n) + " with m=" +
                                  format_num(m));
    }
    p.label = "Intv." + format_num(gap);
    p.axis = axis++;
    p.n = n;
    plan.push_back(std::move(p));
  }
  return run_sweep(mech, kernel, plan, lambda_sel, settings, master_seed);
}

std::vector<double> krr_baseline(const MechanismConfig& mech, const KernelSpec& kernel, Index n,
                                 double lambda, const SweepSettings& settings,
                                 uint64_t master_seed) {
  std::vector<double> out(static_cast<size_t>(settings.reps));
  run_tasks(settings.reps, settings.jobs, [&](Index rep) {
    const TrialData trial =
        make_trial(mech, n, settings.n_test, data_seed_for(rep_seed_for(master_seed, rep)));
    const NystromModel model = fit_krr(trial.train, kernel, lambda);
    const Vec targets = score_targets(trial.test, trial.test_noise, settings.target);
    out[static_cast<size_t>(rep)] = rmse(predict_batch(model, trial.test.inputs), targets);
  });
  return out;
}

double rerun_trial_rmse(const MechanismConfig& mech, const KernelSpec& kernel, Index n,
                        const SubsampleSpec& spec, const std::string& label, double lambda,
                        const SweepSettings& settings, uint64_t row_seed) {
  return run_trial(mech, kernel, n, spec, LambdaSelection::fixed(lambda), settings,
                   data_seed_for(row_seed), task_seed_for(row_seed, label))
      .rmse;
}

namespace {

std::vector<double> arm_points(const ArmConfig& arm, Index n, uint64_t seed) {
  if (arm.generation == ArmGeneration::Series) {
    return generate_series(arm.mech, n, seed).series.values;
  }
  // One map application per point on i.i.d. U(0,1) inputs.
  const NarMap& map = nar_map(arm.mech.map_id);
  Rng rng(derive_seed(seed, "iid"));
  std::vector<double> out(static_cast<size_t>(n));
  std::vector<double> lags(static_cast<size_t>(arm.mech.d));
  for (auto& x : out) {
    for (auto& v : lags) v = rng.uniform01();
    const double eps = arm.mech.noise.sample(rng);
    x = map.step(lags, {}, eps);
  }
  return out;
}

}  // namespace

std::vector<SpectrumPairResult> spectrum_compare(const KernelSpec& kernel, Index n, Index top_k,
                                                 const ArmConfig& dependent_arm,
                                                 const ArmConfig& iid_arm, double threshold_rel,
                                                 std::span<const uint64_t> seeds) {
  if (top_k < 1 || top_k > n) {
    throw std::invalid_argument("spectrum_compare: need 1 <= top_k <= n");
  }
  if (!(threshold_rel > 0.0)) {
    throw std::invalid_argument("spectrum_compare: threshold must be positive");
  }
  if (seeds.empty()) throw std::invalid_argument("spectrum_compare: no seeds given");

  auto arm_spectrum = [&](const ArmConfig& arm, uint64_t seed) {
    const std::vector<double> pts = arm_points(arm, n, seed);
    PointMat x(n, 1);
    for (Index i = 0; i < n; ++i) x(i, 0) = pts[static_cast<size_t>(i)];
    return sym_eig(SymMatrix(gram(kernel, x, x))).spectrum;
  };

  std::vector<SpectrumPairResult> out;
  out.reserve(seeds.size());
  for (uint64_t seed : seeds) {
    // Per-seed pairing: both arms consume the same seed.
    const Spectrum dep = arm_spectrum(dependent_arm, seed);
    const Spectrum iid = arm_spectrum(iid_arm, seed);
    SpectrumPairResult r;
    r.seed = seed;
    r.top_dependent.assign(dep.eigenvalues.begin(), dep.eigenvalues.begin() + top_k);
    r.top_iid.assign(iid.eigenvalues.begin(), iid.eigenvalues.begin() + top_k);
    r.eff_rank_dependent = effective_rank(dep, threshold_rel * dep.eigenvalues.front());
    r.eff_rank_iid = effective_rank(iid, threshold_rel * iid.eigenvalues.front());
    out.push_back(std::move(r));
  }
  return out;
}

NoiseReport noise_report(const NystromModel& model, const EmbeddedDataset& heldout,
                         std::span<const double> true_noise, Index bin_count) {
  if (bin_count < 2) {
    throw std::invalid_argument("noise_report: bin_count must be >= 2, got " +
                                format_num(bin_count));
  }
  heldout.validate();
  const Vec res = residuals(model, heldout);
  const Index n = res.size();

  NoiseReport out;
  out.residuals.assign(res.data(), res.data() + n);
  out.mean = res.mean();
  out.variance = (res.array() - out.mean).square().sum() / static_cast<double>(n);

  double lo = res.minCoeff();
  double hi = res.maxCoeff();
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double width = (hi - lo) / static_cast<double>(bin_count);
  out.bin_edges.resize(static_cast<size_t>(bin_count + 1));
  for (Index b = 0; b <= bin_count; ++b) {
    out.bin_edges[static_cast<size_t>(b)] = lo + width * static_cast<double>(b);
  }
  out.counts.assign(static_cast<size_t>(bin_count), 0);
  for (Index i = 0; i < n; ++i) {
    Index b = static_cast<Index>(std::floor((res(i) - lo) / width));
    b = std::clamp<Index>(b, 0, bin_count - 1);
    ++out.counts[static_cast<size_t>(b)];
  }

  if (!true_noise.empty()) {
    NoiseReport::Reference ref;
    double mean = 0.0;
    for (double v : true_noise) mean += v;
    mean /= static_cast<double>(true_noise.size());
    double var = 0.0;
    for (double v : true_noise) var += (v - mean) * (v - mean);
    var /= static_cast<double>(true_noise.size());
    ref.mean = mean;
    ref.variance = var;

    std::vector<double> sr(out.residuals);
    std::vector<double> sn(true_noise.begin(), true_noise.end());
    std::sort(sr.begin(), sr.end());
    std::sort(sn.begin(), sn.end());
    auto ecdf = [](const std::vector<double>& sorted, double x) {
      const auto it = std::upper_bound(sorted.begin(), sorted.end(), x);
      return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
    };
    double gap = 0.0;
    for (double e : out.bin_edges) {
      gap = std::max(gap, std::abs(ecdf(sr, e) - ecdf(sn, e)));
    }
    ref.cdf_gap = gap;
    out.reference = ref;
  }
  return out;
}

}  // namespace nys
