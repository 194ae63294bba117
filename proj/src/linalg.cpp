#include "nys/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <ostream>

namespace nys {

SymMatrix::SymMatrix(const Mat& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("SymMatrix requires a square matrix, got " +
                                format_num(a.rows()) + "x" + format_num(a.cols()));
  }
  if (a.rows() < 1) {
    throw std::invalid_argument("SymMatrix requires dim >= 1");
  }
  m_ = 0.5 * (a + a.transpose());
}

SymEig sym_eig(const SymMatrix& m) {
  if (!m.mat().allFinite()) {
    throw std::invalid_argument("sym_eig: matrix has non-finite entries");
  }
  Eigen::SelfAdjointEigenSolver<Mat> solver(m.mat());
  if (solver.info() != Eigen::Success) {
    throw NumericalError("sym_eig: eigendecomposition failed to converge for " +
                         format_num(m.dim()) + "x" + format_num(m.dim()) + " matrix");
  }
  const Index n = m.dim();
  SymEig out;
  out.spectrum.dim = n;
  out.spectrum.eigenvalues.resize(static_cast<size_t>(n));
  out.vectors.resize(n, n);
  // Eigen reports ascending order; flip to descending.
  for (Index i = 0; i < n; ++i) {
    out.spectrum.eigenvalues[static_cast<size_t>(i)] = solver.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  return out;
}

double default_pinv_cutoff(Index dim) {
  return 1e-12 * static_cast<double>(dim);
}

PinvSolve pinv_solve_ranked(const SymMatrix& m, const Mat& b, double cutoff) {
  if (b.rows() != m.dim()) {
    throw std::invalid_argument("pinv_solve: shape mismatch, matrix dim " +
                                format_num(m.dim()) + " vs rhs rows " + format_num(b.rows()));
  }
  if (!(cutoff > 0.0 && cutoff < 1.0)) {
    throw std::invalid_argument("pinv_solve: cutoff must lie in (0, 1), got " +
                                format_num(cutoff));
  }
  const SymEig eig = sym_eig(m);
  const Index n = m.dim();
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
  PinvSolve out;
  out.retained_rank = rank;
  out.solution = eig.vectors * (inv.asDiagonal() * (eig.vectors.transpose() * b));
  return out;
}

Mat pinv_solve(const SymMatrix& m, const Mat& b, double cutoff) {
  return pinv_solve_ranked(m, b, cutoff).solution;
}

Index effective_rank(const Spectrum& s, double threshold) {
  if (!(threshold > 0.0)) {
    throw std::invalid_argument("effective_rank: threshold must be positive, got " +
                                format_num(threshold));
  }
  Index count = 0;
  for (double w : s.eigenvalues) {
    if (w > threshold) ++count;
  }
  return count;
}

void write_spectrum_csv(std::ostream& out, const Spectrum& s, Index top_k) {
  const Index k = (top_k < 0) ? s.dim : std::min(top_k, s.dim);
  out << "index,eigenvalue\n";
  for (Index i = 0; i < k; ++i) {
    out << i << ',' << format_num(s.eigenvalues[static_cast<size_t>(i)]) << '\n';
  }
}

}  // namespace nys
