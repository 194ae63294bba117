#pragma once

#include <filesystem>
#include <iosfwd>

#include "nys/experiments.hpp"
#include "nys/timeseries.hpp"

namespace nys {

// All writers print numbers with 17 significant digits. Readers raise
// DataError naming file and line on malformed input.

// Header t,value with a 0-based time index.
void write_series_csv(const std::filesystem::path& path, const Series& s);
// Header t,value,noise.
void write_generated_csv(const std::filesystem::path& path, const GeneratedSeries& g);

// Accepts t,value files; a trailing noise column is tolerated and ignored.
Series read_series_csv(const std::filesystem::path& path);

// Header x1,...,xd,y.
void write_dataset_csv(const std::filesystem::path& path, const EmbeddedDataset& data);
EmbeddedDataset read_dataset_csv(const std::filesystem::path& path);

// Header label,n,m,lambda,seed,rmse,runtime_s; one row per trial.
void write_trials_csv(const std::filesystem::path& path, const std::vector<TrialRow>& rows);
// Aggregated header label,axis,rmse_mean,rmse_std,runtime_mean_s.
void write_sweep_points_csv(const std::filesystem::path& path,
                            const std::vector<SweepPoint>& points);

void write_spectrum_csv_file(const std::filesystem::path& path, const Spectrum& s,
                             Index top_k = -1);

// Histogram as bin_left,bin_right,count.
void write_noise_hist_csv(const std::filesystem::path& path, const NoiseReport& report);
// Key-value summary block (count, mean, variance, reference stats when
// present).
void write_noise_summary(const std::filesystem::path& path, const NoiseReport& report);

void write_predictions_csv(const std::filesystem::path& path, const Vec& predictions);

}  // namespace nys
