#include "nys/estimator.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace nys {

namespace {

constexpr Index kBlockRows = 4096;

void check_lambda(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("lambda must be finite and >= 0, got " + format_num(lambda));
  }
}

}  // namespace

NystromModel fit_krr(const EmbeddedDataset& data, const KernelSpec& kernel, double lambda) {
  data.validate();
  check_lambda(lambda);
  const Index n = data.n();

  Mat k = gram(kernel, data.inputs, data.inputs);
  k.diagonal().array() += lambda * static_cast<double>(n);
  const SymMatrix system(k);

  const double cutoff = default_pinv_cutoff(n);
  const SymEig eig = sym_eig(system);
  double max_abs = 0.0;
  for (double w : eig.spectrum.eigenvalues) max_abs = std::max(max_abs, std::abs(w));
  Vec inv = Vec::Zero(n);
  Index rank = 0;
  for (Index i = 0; i < n; ++i) {
    const double w = eig.spectrum.eigenvalues[static_cast<size_t>(i)];
    if (std::abs(w) > cutoff * max_abs) {
      inv(i) = 1.0 / w;
      ++rank;
    }
  }
  if (lambda == 0.0 && rank < n) {
    throw NumericalError("fit_krr: kernel matrix is numerically singular at lambda = 0 (rank " +
                         format_num(rank) + " of " + format_num(n) +
                         "); use lambda > 0");
  }

  NystromModel model;
  model.kernel = kernel;
  model.centers = data.inputs;
  model.alpha = eig.vectors * (inv.asDiagonal() * (eig.vectors.transpose() * data.targets));
  model.lambda = lambda;
  model.meta.n = n;
  model.meta.index_set.resize(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i) model.meta.index_set[static_cast<size_t>(i)] = i;
  model.meta.cutoff = cutoff;
  model.meta.retained_rank = rank;
  return model;
}

NystromModel fit_nystrom(const EmbeddedDataset& data, const KernelSpec& kernel, double lambda,
                         const IndexSet& idx, double cutoff, uint64_t seed) {
  data.validate();
  check_lambda(lambda);
  const Index n = data.n();
  const Index m = idx.size();
  if (m < 1) {
    throw std::invalid_argument("fit_nystrom: index set must be nonempty");
  }
  for (Index i = 0; i < m; ++i) {
    const Index v = idx.indices[static_cast<size_t>(i)];
    if (v < 0 || v >= n) {
      throw std::invalid_argument("fit_nystrom: index " + format_num(v) +
                                  " outside the dataset of size " + format_num(n));
    }
    if (i > 0 && v <= idx.indices[static_cast<size_t>(i - 1)]) {
      throw std::invalid_argument("fit_nystrom: index set must be strictly increasing");
    }
  }
  if (cutoff < 0.0) cutoff = default_pinv_cutoff(m);

  PointMat centers(m, data.dim());
  for (Index i = 0; i < m; ++i) {
    centers.row(i) = data.inputs.row(idx.indices[static_cast<size_t>(i)]);
  }

  // Accumulate K_nm^T K_nm and K_nm^T y over row blocks; K_nm itself is
  // never materialized.
  Mat gtg = Mat::Zero(m, m);
  Vec gty = Vec::Zero(m);
  for (Index row = 0; row < n; row += kBlockRows) {
    const Index count = std::min(kBlockRows, n - row);
    const PointMat block = data.inputs.middleRows(row, count);
    const Mat knm = gram(kernel, block, centers);
    gtg.selfadjointView<Eigen::Lower>().rankUpdate(knm.transpose(), 1.0);
    gty.noalias() += knm.transpose() * data.targets.segment(row, count);
  }
  Mat system = gtg.selfadjointView<Eigen::Lower>();
  system.noalias() += lambda * static_cast<double>(n) * gram(kernel, centers, centers);

  const PinvSolve solve = pinv_solve_ranked(SymMatrix(system), gty, cutoff);

  NystromModel model;
  model.kernel = kernel;
  model.centers = std::move(centers);
  model.alpha = solve.solution.col(0);
  model.lambda = lambda;
  model.meta.n = n;
  model.meta.index_set = idx.indices;
  model.meta.seed = seed;
  model.meta.cutoff = cutoff;
  model.meta.retained_rank = solve.retained_rank;
  return model;
}

double predict(const NystromModel& model, ConstPointRef x) {
  if (x.size() != model.dim()) {
    throw std::invalid_argument("predict: point dimension " + format_num(x.size()) +
                                " does not match model dimension " + format_num(model.dim()));
  }
  double acc = 0.0;
  for (Index i = 0; i < model.m(); ++i) {
    acc += model.alpha(i) * eval(model.kernel, model.centers.row(i), x);
  }
  return acc;
}

Vec predict_batch(const NystromModel& model, const PointMat& xs) {
  if (xs.cols() != model.dim()) {
    throw std::invalid_argument("predict_batch: point dimension " + format_num(xs.cols()) +
                                " does not match model dimension " + format_num(model.dim()));
  }
  const Index n = xs.rows();
  Vec out(n);
  for (Index row = 0; row < n; row += kBlockRows) {
    const Index count = std::min(kBlockRows, n - row);
    const PointMat block = xs.middleRows(row, count);
    out.segment(row, count).noalias() = gram(model.kernel, block, model.centers) * model.alpha;
  }
  return out;
}

Vec residuals(const NystromModel& model, const EmbeddedDataset& data) {
  data.validate();
  return data.targets - predict_batch(model, data.inputs);
}

double objective_value(const EmbeddedDataset& data, const KernelSpec& kernel, double lambda,
                       const PointMat& centers, const Vec& coeffs) {
  data.validate();
  if (centers.rows() != coeffs.size()) {
    throw std::invalid_argument("objective_value: centers and coefficients differ in length");
  }
  const Mat knm = gram(kernel, data.inputs, centers);
  const Mat kmm = gram(kernel, centers, centers);
  const Vec misfit = knm * coeffs - data.targets;
  const double mse = misfit.squaredNorm() / static_cast<double>(data.n());
  const double penalty = lambda * coeffs.dot(kmm * coeffs);
  return mse + penalty;
}

// --- serialization ---------------------------------------------------------

namespace {

constexpr char kModelMagic[] = "nys-model 1";

}  // namespace

void save_model(std::ostream& out, const NystromModel& model,
                const std::optional<AffineTransform>& transform) {
  out << kModelMagic << '\n';
  out << "kernel.kind " << kernel_kind_name(model.kernel.kind) << '\n';
  if (model.kernel.kind == KernelKind::Gaussian) {
    out << "kernel.sigma " << format_num(model.kernel.bandwidth) << '\n';
  }
  out << "lambda " << format_num(model.lambda) << '\n';
  out << "d " << format_num(model.dim()) << '\n';
  out << "m " << format_num(model.m()) << '\n';
  out << "meta.n " << format_num(model.meta.n) << '\n';
  out << "meta.seed " << format_num(model.meta.seed) << '\n';
  out << "meta.cutoff " << format_num(model.meta.cutoff) << '\n';
  out << "meta.rank " << format_num(model.meta.retained_rank) << '\n';
  out << "meta.index_set ";
  for (size_t i = 0; i < model.meta.index_set.size(); ++i) {
    if (i > 0) out << ',';
    out << model.meta.index_set[i];
  }
  out << '\n';
  if (transform.has_value()) {
    out << "rescale.offset " << format_num(transform->offset) << '\n';
    out << "rescale.scale " << format_num(transform->scale) << '\n';
  }
  out << "centers_alpha\n";
  for (Index i = 0; i < model.m(); ++i) {
    for (Index j = 0; j < model.dim(); ++j) {
      out << format_num(model.centers(i, j)) << ',';
    }
    out << format_num(model.alpha(i)) << '\n';
  }
  out << "end\n";
  if (!out) throw IoError("failed while writing model");
}

void save_model(const std::filesystem::path& path, const NystromModel& model,
                const std::optional<AffineTransform>& transform) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  save_model(out, model, transform);
}

namespace {

[[noreturn]] void model_error(std::string_view name, Index line, const std::string& what) {
  throw DataError(std::string(name) + ":" + format_num(line) + ": " + what);
}

double parse_double(std::string_view name, Index line, const std::string& tok) {
  try {
    size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) model_error(name, line, "trailing characters in number '" + tok + "'");
    return v;
  } catch (const std::logic_error&) {
    model_error(name, line, "expected a number, got '" + tok + "'");
  }
}

}  // namespace

LoadedModel load_model(std::istream& in, std::string_view name) {
  Index line_no = 0;
  std::string line;
  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_no;
    return true;
  };

  if (!next_line() || line != kModelMagic) {
    model_error(name, line_no, "not a model file (missing '" + std::string(kModelMagic) + "')");
  }

  LoadedModel out;
  NystromModel& model = out.model;
  Index d = 0, m = 0;
  std::optional<double> rs_offset, rs_scale;
  bool have_block = false;

  while (next_line()) {
    if (line == "centers_alpha") {
      have_block = true;
      break;
    }
    const auto space = line.find(' ');
    if (space == std::string::npos) model_error(name, line_no, "expected 'key value'");
    const std::string key = line.substr(0, space);
    const std::string val = line.substr(space + 1);
    if (key == "kernel.kind") {
      model.kernel.kind = kernel_kind_from_name(val);
    } else if (key == "kernel.sigma") {
      model.kernel.bandwidth = parse_double(name, line_no, val);
    } else if (key == "lambda") {
      model.lambda = parse_double(name, line_no, val);
    } else if (key == "d") {
      d = static_cast<Index>(parse_double(name, line_no, val));
    } else if (key == "m") {
      m = static_cast<Index>(parse_double(name, line_no, val));
    } else if (key == "meta.n") {
      model.meta.n = static_cast<Index>(parse_double(name, line_no, val));
    } else if (key == "meta.seed") {
      model.meta.seed = static_cast<uint64_t>(std::stoull(val));
    } else if (key == "meta.cutoff") {
      model.meta.cutoff = parse_double(name, line_no, val);
    } else if (key == "meta.rank") {
      model.meta.retained_rank = static_cast<Index>(parse_double(name, line_no, val));
    } else if (key == "meta.index_set") {
      std::stringstream ss(val);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) model.meta.index_set.push_back(static_cast<Index>(std::stoll(tok)));
      }
    } else if (key == "rescale.offset") {
      rs_offset = parse_double(name, line_no, val);
    } else if (key == "rescale.scale") {
      rs_scale = parse_double(name, line_no, val);
    } else {
      model_error(name, line_no, "unknown model key '" + key + "'");
    }
  }
  if (!have_block) model_error(name, line_no, "missing centers_alpha block");
  if (d < 1 || m < 1) model_error(name, line_no, "model must declare d >= 1 and m >= 1");

  model.centers.resize(m, d);
  model.alpha.resize(m);
  for (Index i = 0; i < m; ++i) {
    if (!next_line()) model_error(name, line_no, "unexpected end of centers_alpha block");
    std::stringstream ss(line);
    std::string tok;
    for (Index j = 0; j <= d; ++j) {
      if (!std::getline(ss, tok, ',')) {
        model_error(name, line_no, "expected " + format_num(d + 1) + " comma-separated values");
      }
      const double v = parse_double(name, line_no, tok);
      if (j < d) {
        model.centers(i, j) = v;
      } else {
        model.alpha(i) = v;
      }
    }
  }
  if (!next_line() || line != "end") model_error(name, line_no, "missing trailing 'end'");

  if (rs_offset.has_value() != rs_scale.has_value()) {
    model_error(name, line_no, "rescale.offset and rescale.scale must appear together");
  }
  if (rs_offset.has_value()) {
    out.transform = AffineTransform{*rs_offset, *rs_scale};
  }
  if (!model.alpha.allFinite() || !model.centers.allFinite()) {
    model_error(name, line_no, "model holds non-finite values");
  }
  return out;
}

LoadedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model file '" + path.string() + "'");
  return load_model(in, path.string());
}

}  // namespace nys
