#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "nys/dataset.hpp"
#include "nys/kernels.hpp"
#include "nys/linalg.hpp"
#include "nys/sampling.hpp"

namespace nys {

// Fit provenance kept inside the model so experiment outputs stay
// self-describing and any fit can be re-run in isolation.
struct FitMeta {
  Index n{0};                      // training size
  std::vector<Index> index_set;    // which training rows became centers
  uint64_t seed{0};                // seed that produced the index set
  double cutoff{0.0};              // pseudo-inverse cutoff actually used
  Index retained_rank{0};          // rank kept by the pseudo-inverse
};

// Fitted estimator f(x) = sum_i alpha_i K(centers_i, x); no intercept.
struct NystromModel {
  KernelSpec kernel;
  PointMat centers;
  Vec alpha;
  double lambda{0.0};
  FitMeta meta;

  Index m() const { return centers.rows(); }
  Index dim() const { return centers.cols(); }
};

// Affine input/target transform stored alongside a model fitted on
// rescaled data: fitting saw (v - offset) / scale, predictions are mapped
// back to original units.
struct AffineTransform {
  double offset{0.0};
  double scale{1.0};
};

// Full kernel ridge regression: centers are all n training inputs and
// alpha solves (K_nn + lambda n I) alpha = y. lambda = 0 is allowed only
// while K_nn is numerically full-rank and is meant as a diagnostic mode.
NystromModel fit_krr(const EmbeddedDataset& data, const KernelSpec& kernel, double lambda);

// Nystrom-regularized fit restricted to the span of the selected centers:
//   alpha = (K_nm^T K_nm + lambda n K_mm)^+  K_nm^T y.
// The m x m system is assembled explicitly in row blocks, so the working
// set stays O(block m + m^2) even when n is large. Duplicate centers are
// kept; the pseudo-inverse cutoff absorbs the rank deficiency and the
// retained rank lands in meta. cutoff < 0 selects default_pinv_cutoff(m).
NystromModel fit_nystrom(const EmbeddedDataset& data, const KernelSpec& kernel, double lambda,
                         const IndexSet& idx, double cutoff = -1.0, uint64_t seed = 0);

double predict(const NystromModel& model, ConstPointRef x);
Vec predict_batch(const NystromModel& model, const PointMat& xs);

// targets - predictions, in dataset order.
Vec residuals(const NystromModel& model, const EmbeddedDataset& data);

// The penalized least-squares objective restricted to the model's span:
// (1/n) sum (f(x_t) - y_t)^2 + lambda alpha^T K_mm alpha. Evaluated at an
// arbitrary coefficient vector, mostly for optimality checks.
double objective_value(const EmbeddedDataset& data, const KernelSpec& kernel, double lambda,
                       const PointMat& centers, const Vec& coeffs);

// Plain-text model file: key-value lines followed by a centers/alpha CSV
// block. Numbers carry 17 significant digits, so a load reproduces
// predictions bit for bit.
void save_model(std::ostream& out, const NystromModel& model,
                const std::optional<AffineTransform>& transform = std::nullopt);
void save_model(const std::filesystem::path& path, const NystromModel& model,
                const std::optional<AffineTransform>& transform = std::nullopt);

struct LoadedModel {
  NystromModel model;
  std::optional<AffineTransform> transform;
};

LoadedModel load_model(std::istream& in, std::string_view name = "<stream>");
LoadedModel load_model(const std::filesystem::path& path);

}  // namespace nys
