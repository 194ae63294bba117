#pragma once

#include <optional>
#include <span>
#include <string>

#include "nys/estimator.hpp"
#include "nys/timeseries.hpp"

namespace nys {

double rmse(std::span<const double> pred, std::span<const double> truth);
double rmse(const Vec& pred, const Vec& truth);

enum class RefitMode { PerStep, Once };
enum class TargetMode { Noisy, Denoised };

// How test points are scored. Per-step refitting rebuilds the model on the
// first n_train + k embedded samples before predicting test point k (the
// revealed test points join the training set with their noisy observed
// targets, and the sub-sample spec is re-resolved against the grown size).
// Denoised targets subtract the realized noise that produced each target,
// isolating the deterministic component.
struct EvalProtocol {
  Index n_train{0};
  Index n_test{0};
  RefitMode refit{RefitMode::PerStep};
  TargetMode target{TargetMode::Noisy};
};

struct OneStepResult {
  double rmse{0.0};
  Vec predictions;
};

OneStepResult one_step_eval(const EmbeddedDataset& train, const EmbeddedDataset& test,
                            std::span<const double> test_noise, const KernelSpec& kernel,
                            double lambda, const SubsampleSpec& spec,
                            const EvalProtocol& protocol, uint64_t seed);

// Forward-chaining holdout: the head of the time-ordered embedded dataset
// is fit, the tail validated, never shuffled. Ties in tail RMSE go to the
// larger lambda.
struct CvResult {
  double best_lambda{0.0};
  std::vector<double> grid;    // deduplicated, ascending
  std::vector<double> scores;  // tail RMSE per grid entry
  Index head_size{0};          // validation rows are [head_size, n)
};

CvResult cross_validate(const EmbeddedDataset& train, const KernelSpec& kernel,
                        std::span<const double> lambda_grid, const SubsampleSpec& spec,
                        double holdout_fraction, uint64_t seed);

// Synthetic data source for the simulation harnesses. x0 states are drawn
// from U(0,1) unless pinned.
struct MechanismConfig {
  std::string map_id{"m1"};
  NoiseSpec noise{NoiseSpec::uniform(-0.7, 0.7)};
  Index d{1};
  Index burn_in{0};
  std::optional<double> x0;
};

// Generates length values plus embedding and aligned noise, everything
// derived from one seed.
struct TrialData {
  EmbeddedDataset train;
  EmbeddedDataset test;
  std::vector<double> test_noise;
};

GeneratedSeries generate_series(const MechanismConfig& mech, Index length, uint64_t seed);
TrialData make_trial(const MechanismConfig& mech, Index n_train, Index n_test, uint64_t seed);

// Either a single fixed lambda (grid of one) or a grid selected per trial
// by forward-chaining cross-validation.
struct LambdaSelection {
  std::vector<double> grid;
  double holdout_fraction{0.2};

  static LambdaSelection fixed(double lambda) { return {{lambda}, 0.2}; }
  bool is_fixed() const { return grid.size() == 1; }
};

struct SweepSettings {
  Index n_test{50};
  RefitMode refit{RefitMode::Once};
  TargetMode target{TargetMode::Denoised};
  Index reps{5};
  Index jobs{1};
};

// One trial of a sweep, carrying its exact configuration so any point can
// be re-run in isolation.
struct TrialRow {
  std::string label;
  Index n{0};
  Index m{0};
  double lambda{0.0};
  uint64_t seed{0};
  double rmse{0.0};
  double runtime_s{0.0};
};

struct SweepPoint {
  std::string label;
  double axis{0.0};
  double rmse_mean{0.0};
  double rmse_std{0.0};
  double runtime_mean_s{0.0};
};

struct SweepResult {
  std::vector<SweepPoint> points;
  std::vector<TrialRow> rows;
  std::optional<double> loglog_slope;  // scaling sweeps only, needs >= 2 points
};

// Generalization error versus sub-sampling ratio; m = max(1, floor(ratio n)).
// Data seeds depend only on the repetition index, so points along the axis
// are paired trials on identical series.
SweepResult ratio_sweep(const MechanismConfig& mech, const KernelSpec& kernel, Index n,
                        std::span<const double> ratios, const LambdaSelection& lambda_sel,
                        const SweepSettings& settings, uint64_t master_seed);

// Generalization error versus training-set size at fixed ratio; also fits
// the least-squares slope of log(mean RMSE) against log(n).
SweepResult scaling_sweep(const MechanismConfig& mech, const KernelSpec& kernel,
                          std::span<const Index> ns, double ratio,
                          const LambdaSelection& lambda_sel, const SweepSettings& settings,
                          uint64_t master_seed);

// Sub-sampling mechanism study: positional windows (first/middle/last) and
// strided selections labeled Intv.k.
SweepResult placement_study(const MechanismConfig& mech, const KernelSpec& kernel, Index n,
                            Index m, std::span<const std::string> positions,
                            std::span<const Index> gaps, const LambdaSelection& lambda_sel,
                            const SweepSettings& settings, uint64_t master_seed);

// Per-repetition RMSE of full KRR under the sweep harness's data seeds;
// pairs with ratio_sweep trials for the m = n equivalence check.
std::vector<double> krr_baseline(const MechanismConfig& mech, const KernelSpec& kernel, Index n,
                                 double lambda, const SweepSettings& settings,
                                 uint64_t master_seed);

// Reproduces a single sweep trial from its recorded row fields (seed is
// the row's seed column, lambda the resolved value); returns the RMSE,
// which matches the original row bit for bit.
double rerun_trial_rmse(const MechanismConfig& mech, const KernelSpec& kernel, Index n,
                        const SubsampleSpec& spec, const std::string& label, double lambda,
                        const SweepSettings& settings, uint64_t row_seed);

// How a spectrum-comparison arm produces its n points: as consecutive
// values of the recursion, or by applying the same map to i.i.d. U(0,1)
// inputs (one map application per point, no recursion).
enum class ArmGeneration { Series, Iid };

struct ArmConfig {
  MechanismConfig mech;
  ArmGeneration generation{ArmGeneration::Series};
};

struct SpectrumPairResult {
  uint64_t seed{0};
  std::vector<double> top_dependent;
  std::vector<double> top_iid;
  Index eff_rank_dependent{0};
  Index eff_rank_iid{0};
};

// Builds both Gram matrices over the same kernel and n, per seed, and
// reports top_k eigenvalues plus effective ranks at threshold_rel times
// the largest eigenvalue of each arm.
std::vector<SpectrumPairResult> spectrum_compare(const KernelSpec& kernel, Index n, Index top_k,
                                                 const ArmConfig& dependent_arm,
                                                 const ArmConfig& iid_arm, double threshold_rel,
                                                 std::span<const uint64_t> seeds);

struct NoiseReport {
  std::vector<double> residuals;
  std::vector<double> bin_edges;  // bin_count + 1 edges
  std::vector<Index> counts;      // sums to residuals.size()
  double mean{0.0};
  double variance{0.0};

  struct Reference {
    double mean{0.0};
    double variance{0.0};
    double cdf_gap{0.0};  // max |F_resid - F_noise| over the bin edges
  };
  std::optional<Reference> reference;
};

// Residuals of the model on held-out noisy targets, summarized as an
// equal-width histogram plus moments; with the true noise supplied the
// report adds its moments and the empirical CDF gap at the bin edges.
NoiseReport noise_report(const NystromModel& model, const EmbeddedDataset& heldout,
                         std::span<const double> true_noise, Index bin_count);

}  // namespace nys
