#pragma once

#include <string_view>

#include "nys/common.hpp"

namespace nys {

enum class KernelKind { Wendland, Gaussian, MinPlusOne };

// A Mercer kernel selection. Parameters travel with the spec (not in global
// state) so fitted models stay self-describing when serialized.
//
// Wendland: (1-r)^4 (4r+1) for r <= 1 and 0 beyond, r the Euclidean
// distance. Gaussian: exp(-r^2 / (2 sigma^2)). MinPlusOne: 1 + min(x, x'),
// scalar inputs only.
struct KernelSpec {
  KernelKind kind{KernelKind::Wendland};
  double bandwidth{0.5};  // Gaussian sigma; ignored by the other kinds

  static KernelSpec wendland() { return {KernelKind::Wendland, 0.0}; }
  static KernelSpec gaussian(double sigma) { return {KernelKind::Gaussian, sigma}; }
  static KernelSpec min_plus_one() { return {KernelKind::MinPlusOne, 0.0}; }

  // Wendland and Gaussian satisfy K(x,x) <= 1; the min kernel does not and
  // callers that rely on the bound must check this flag.
  bool bounded_by_one() const { return kind != KernelKind::MinPlusOne; }

  void validate() const;
};

const char* kernel_kind_name(KernelKind kind);
KernelKind kernel_kind_from_name(std::string_view name);

// Pointwise kernel value. Symmetric in its arguments down to the last bit
// (both orders run the same floating-point path).
double eval(const KernelSpec& kernel, ConstPointRef x, ConstPointRef y);

// Dense Gram block: entry (i, j) = eval(kernel, rows[i], cols[j]).
// With rows == cols the result is symmetric positive semi-definite up to
// roundoff.
Mat gram(const KernelSpec& kernel, const PointMat& rows, const PointMat& cols);

}  // namespace nys
