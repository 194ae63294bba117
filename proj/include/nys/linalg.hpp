#pragma once

#include <iosfwd>

#include "nys/common.hpp"

namespace nys {

// Dense symmetric matrix. Symmetrized as (A + A^T)/2 at construction to
// absorb floating-point asymmetry picked up during Gram assembly.
class SymMatrix {
 public:
  explicit SymMatrix(const Mat& a);

  Index dim() const { return m_.rows(); }
  const Mat& mat() const { return m_; }

 private:
  Mat m_;
};

// Eigenvalues sorted descending.
struct Spectrum {
  std::vector<double> eigenvalues;
  Index dim{0};
};

struct SymEig {
  Spectrum spectrum;
  Mat vectors;  // column i pairs with spectrum.eigenvalues[i]
};

// Full symmetric eigendecomposition. Postconditions: Q Lambda Q^T
// reconstructs the input within 1e-8 * (1 + ||M||_F) and Q^T Q = I within
// 1e-8 per entry; any backend meeting those is conforming.
SymEig sym_eig(const SymMatrix& m);

// Relative eigenvalue cutoff used by the pseudo-inverse when the caller
// does not supply one.
double default_pinv_cutoff(Index dim);

struct PinvSolve {
  Mat solution;
  Index retained_rank{0};
};

// Moore-Penrose solve M^+ B through the eigendecomposition: eigenvalues
// with |w| <= cutoff * max|w| are treated as exact zeros, the rest are
// inverted. For full-rank M this is the unique solution of M X = B.
PinvSolve pinv_solve_ranked(const SymMatrix& m, const Mat& b, double cutoff);
Mat pinv_solve(const SymMatrix& m, const Mat& b, double cutoff);

// Number of eigenvalues strictly greater than threshold.
Index effective_rank(const Spectrum& s, double threshold);

// CSV with header index,eigenvalue; index 0-based, eigenvalues descending.
void write_spectrum_csv(std::ostream& out, const Spectrum& s, Index top_k = -1);

}  // namespace nys
