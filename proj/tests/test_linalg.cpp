#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "nys/kernels.hpp"
#include "nys/linalg.hpp"
#include "test_util.hpp"

using namespace nys;

namespace {

Mat random_sym(Index n, Rng& rng) {
  Mat a(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) a(i, j) = rng.uniform(-1, 1);
  }
  return 0.5 * (a + a.transpose());
}

Mat random_spd(Index n, Rng& rng) {
  Mat a(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) a(i, j) = rng.uniform(-1, 1);
  }
  Mat s = a * a.transpose();
  s.diagonal().array() += 0.5;
  return s;
}

}  // namespace

TEST_CASE("sym_eig on identity and diagonal matrices") {
  const SymEig id = sym_eig(SymMatrix(Mat::Identity(3, 3)));
  for (double w : id.spectrum.eigenvalues) CHECK(w == doctest::Approx(1.0).epsilon(1e-14));

  Mat d = Mat::Zero(3, 3);
  d.diagonal() << 5.0, 2.0, 0.0;
  const SymEig de = sym_eig(SymMatrix(d));
  CHECK(de.spectrum.eigenvalues[0] == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(de.spectrum.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(de.spectrum.eigenvalues[2] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("eigenvalue sum equals trace") {
  Rng rng(42);
  const Mat m = random_sym(10, rng);
  const SymEig eig = sym_eig(SymMatrix(m));
  double sum = 0.0;
  for (double w : eig.spectrum.eigenvalues) sum += w;
  CHECK(sum == doctest::Approx(m.trace()).epsilon(1e-8));
}

TEST_CASE("sym_eig postconditions: reconstruction and orthogonality") {
  Rng rng(7);
  for (Index n : {1, 2, 5, 20}) {
    const Mat m = random_sym(n, rng);
    const SymEig eig = sym_eig(SymMatrix(m));
    // descending order
    for (size_t i = 1; i < eig.spectrum.eigenvalues.size(); ++i) {
      CHECK(eig.spectrum.eigenvalues[i - 1] >= eig.spectrum.eigenvalues[i]);
    }
    Vec w(n);
    for (Index i = 0; i < n; ++i) w(i) = eig.spectrum.eigenvalues[static_cast<size_t>(i)];
    const Mat rec = eig.vectors * w.asDiagonal() * eig.vectors.transpose();
    CHECK((rec - m).norm() <= 1e-8 * (1.0 + m.norm()));
    const Mat qtq = eig.vectors.transpose() * eig.vectors;
    CHECK((qtq - Mat::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("sym_eig rejects bad input") {
  Mat bad(2, 2);
  bad << 1.0, 0.0, 0.0, std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(sym_eig(SymMatrix(bad)), std::invalid_argument);
  CHECK_THROWS_AS(SymMatrix(Mat::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("SymMatrix symmetrizes") {
  Mat a(2, 2);
  a << 1.0, 2.0, 4.0, 3.0;
  const SymMatrix s(a);
  CHECK(s.mat()(0, 1) == 3.0);
  CHECK(s.mat()(1, 0) == 3.0);
}

TEST_CASE("pinv_solve trivial cases") {
  const Vec b = (Vec(3) << 1.0, -2.0, 0.5).finished();
  const Mat x = pinv_solve(SymMatrix(Mat::Identity(3, 3)), b, 1e-12);
  CHECK((x - b).norm() <= 1e-14);

  // Moore-Penrose zeroes the null direction of diag(1, 0)
  Mat d = Mat::Zero(2, 2);
  d(0, 0) = 1.0;
  const Vec b2 = (Vec(2) << 2.0, 3.0).finished();
  const PinvSolve s = pinv_solve_ranked(SymMatrix(d), b2, 1e-12);
  CHECK(s.solution(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(s.solution(1, 0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(s.retained_rank == 1);
}

TEST_CASE("pinv_solve matches an independent dense solve on SPD systems") {
  Rng rng(314);
  const Index n = 15;
  const Mat m = random_spd(n, rng);
  Mat b(n, 2);
  for (Index i = 0; i < n; ++i) {
    b(i, 0) = rng.uniform(-1, 1);
    b(i, 1) = rng.uniform(-1, 1);
  }
  const Mat x = pinv_solve(SymMatrix(m), b, default_pinv_cutoff(n));

  for (Index col = 0; col < 2; ++col) {
    std::vector<std::vector<double>> a(static_cast<size_t>(n), std::vector<double>(n));
    std::vector<double> rhs(static_cast<size_t>(n));
    for (Index i = 0; i < n; ++i) {
      rhs[static_cast<size_t>(i)] = b(i, col);
      for (Index j = 0; j < n; ++j) a[static_cast<size_t>(i)][static_cast<size_t>(j)] = m(i, j);
    }
    const std::vector<double> ref = testutil::solve_dense(a, rhs);
    for (Index i = 0; i < n; ++i) {
      CHECK(x(i, col) ==
            doctest::Approx(ref[static_cast<size_t>(i)]).epsilon(1e-8));
    }
  }
}

TEST_CASE("pinv_solve residual and projection identities") {
  Rng rng(2718);
  const Index n = 12;
  const Mat m = random_spd(n, rng);
  Vec b(n);
  for (Index i = 0; i < n; ++i) b(i) = rng.uniform(-1, 1);
  const Mat x = pinv_solve(SymMatrix(m), b, default_pinv_cutoff(n));
  CHECK((m * x - b).norm() <= 1e-6 * b.norm());

  // rank-deficient: M X must reproduce the projection of B onto the
  // retained eigenspace
  Mat sing = random_sym(6, rng);
  const SymEig eig = sym_eig(SymMatrix(sing));
  Vec w(6);
  for (Index i = 0; i < 6; ++i) w(i) = eig.spectrum.eigenvalues[static_cast<size_t>(i)];
  w(4) = 0.0;
  w(5) = 0.0;
  const Mat drop2 = eig.vectors * w.asDiagonal() * eig.vectors.transpose();
  Vec b6(6);
  for (Index i = 0; i < 6; ++i) b6(i) = rng.uniform(-1, 1);
  const SymMatrix ms(drop2);
  const PinvSolve ps = pinv_solve_ranked(ms, b6, 1e-10);
  CHECK(ps.retained_rank == 4);
  const SymEig eig2 = sym_eig(ms);
  const Mat qr = eig2.vectors.leftCols(4);
  const Vec proj = qr * (qr.transpose() * b6);
  CHECK((ms.mat() * ps.solution - proj).norm() <= 1e-8 * (1.0 + b6.norm()));
}

TEST_CASE("pinv_solve input validation") {
  const SymMatrix m(Mat::Identity(3, 3));
  CHECK_THROWS_AS(pinv_solve(m, Mat::Zero(2, 1), 1e-12), std::invalid_argument);
  CHECK_THROWS_AS(pinv_solve(m, Mat::Zero(3, 1), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(pinv_solve(m, Mat::Zero(3, 1), 1.5), std::invalid_argument);
}

TEST_CASE("effective_rank counts strictly above threshold") {
  Spectrum s;
  s.dim = 3;
  s.eigenvalues = {5.0, 2.0, 0.1};
  CHECK(effective_rank(s, 1.0) == 2);
  CHECK(effective_rank(s, 6.0) == 0);
  CHECK(effective_rank(s, 2.0) == 1);  // strict inequality
  CHECK_THROWS_AS(effective_rank(s, 0.0), std::invalid_argument);

  // monotone nonincreasing in the threshold
  Rng rng(5);
  Spectrum r;
  r.dim = 40;
  for (int i = 0; i < 40; ++i) r.eigenvalues.push_back(rng.uniform(0, 10));
  std::sort(r.eigenvalues.rbegin(), r.eigenvalues.rend());
  Index prev = 41;
  for (double t = 0.5; t < 11; t += 0.5) {
    const Index er = effective_rank(r, t);
    CHECK(er <= prev);
    prev = er;
  }
}

TEST_CASE("effective_rank agrees with a brute-force recount on a Gram spectrum") {
  Rng rng(88);
  PointMat pts(60, 1);
  double prev = rng.uniform(0, 1);
  for (Index i = 0; i < 60; ++i) {
    prev = 0.5 * std::sin(prev) + rng.uniform(-0.7, 0.7);
    pts(i, 0) = prev;
  }
  const Mat g = gram(KernelSpec::wendland(), pts, pts);
  const Spectrum s = sym_eig(SymMatrix(g)).spectrum;
  const double thr = 1e-3 * s.eigenvalues.front();
  Index brute = 0;
  for (double w : s.eigenvalues) {
    if (w > thr) ++brute;
  }
  CHECK(effective_rank(s, thr) == brute);
}

TEST_CASE("spectrum CSV format") {
  Spectrum s;
  s.dim = 3;
  s.eigenvalues = {2.0, 1.0, 0.25};
  std::ostringstream out;
  write_spectrum_csv(out, s);
  CHECK(out.str() == "index,eigenvalue\n0,2\n1,1\n2,0.25\n");
  std::ostringstream top;
  write_spectrum_csv(top, s, 2);
  CHECK(top.str() == "index,eigenvalue\n0,2\n1,1\n");
}
