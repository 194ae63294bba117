#include "nys/kernels.hpp"

#include <cmath>
#include <string>

namespace nys {

void KernelSpec::validate() const {
  if (kind == KernelKind::Gaussian && !(bandwidth > 0.0)) {
    throw std::invalid_argument("gaussian kernel requires bandwidth > 0, got " +
                                format_num(bandwidth));
  }
}

const char* kernel_kind_name(KernelKind kind) {
  switch (kind) {
    case KernelKind::Wendland: return "wendland";
    case KernelKind::Gaussian: return "gaussian";
    case KernelKind::MinPlusOne: return "minplusone";
  }
  return "?";
}

KernelKind kernel_kind_from_name(std::string_view name) {
  if (name == "wendland") return KernelKind::Wendland;
  if (name == "gaussian") return KernelKind::Gaussian;
  if (name == "minplusone") return KernelKind::MinPlusOne;
  throw std::invalid_argument("unknown kernel kind '" + std::string(name) +
                              "' (expected wendland, gaussian or minplusone)");
}

double eval(const KernelSpec& kernel, ConstPointRef x, ConstPointRef y) {
  kernel.validate();
  if (x.size() != y.size()) {
    throw std::invalid_argument("kernel eval: dimension mismatch (" +
                                format_num(x.size()) + " vs " + format_num(y.size()) + ")");
  }
  if (x.size() < 1) {
    throw std::invalid_argument("kernel eval: points must have dimension >= 1");
  }
  switch (kernel.kind) {
    case KernelKind::Wendland: {
      const double r = std::sqrt((x - y).squaredNorm());
      if (r > 1.0) return 0.0;
      const double u = 1.0 - r;
      const double u2 = u * u;
      return u2 * u2 * (4.0 * r + 1.0);
    }
    case KernelKind::Gaussian: {
      const double d2 = (x - y).squaredNorm();
      return std::exp(-d2 / (2.0 * kernel.bandwidth * kernel.bandwidth));
    }
    case KernelKind::MinPlusOne: {
      if (x.size() != 1) {
        throw UnsupportedKernelError(
            "minplusone kernel is defined for scalar inputs only, got dimension " +
            format_num(x.size()));
      }
      return 1.0 + std::min(x[0], y[0]);
    }
  }
  throw std::invalid_argument("kernel eval: unknown kernel kind");
}

Mat gram(const KernelSpec& kernel, const PointMat& rows, const PointMat& cols) {
  kernel.validate();
  if (rows.cols() != cols.cols()) {
    throw std::invalid_argument("gram: dimension mismatch (" + format_num(rows.cols()) +
                                " vs " + format_num(cols.cols()) + ")");
  }
  if (rows.rows() < 1 || cols.rows() < 1) {
    throw std::invalid_argument("gram: both point sets must be nonempty");
  }
  Mat g(rows.rows(), cols.rows());
  for (Index j = 0; j < cols.rows(); ++j) {
    for (Index i = 0; i < rows.rows(); ++i) {
      g(i, j) = eval(kernel, rows.row(i), cols.row(j));
    }
  }
  return g;
}

}  // namespace nys
