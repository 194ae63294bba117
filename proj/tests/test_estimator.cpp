#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <sstream>

#include "nys/estimator.hpp"
#include "nys/timeseries.hpp"
#include "test_util.hpp"

using namespace nys;
using testutil::jittered_instance;
using testutil::points;

namespace {

IndexSet full_index_set(Index n) {
  IndexSet idx;
  idx.indices.resize(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i) idx.indices[static_cast<size_t>(i)] = i;
  return idx;
}

EmbeddedDataset m1_dataset(Index n, uint64_t seed, double noise_hw = 0.7) {
  const NoiseSpec noise =
      noise_hw > 0 ? NoiseSpec::uniform(-noise_hw, noise_hw) : NoiseSpec::zero();
  Rng x0rng(derive_seed(seed, "x0"));
  const GeneratedSeries g = gen_m1(n + 1, noise, x0rng.uniform01(), derive_seed(seed, "series"));
  return embed(g.series, 1);
}

double max_rel_diff(const Vec& a, const Vec& b) {
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

}  // namespace

TEST_CASE("fit_krr zero targets give the zero function") {
  EmbeddedDataset data;
  data.inputs = points({{0.1}, {0.5}, {0.9}});
  data.targets = Vec::Zero(3);
  const NystromModel model = fit_krr(data, KernelSpec::wendland(), 0.1);
  for (Index i = 0; i < 3; ++i) CHECK(model.alpha(i) == 0.0);
  CHECK(predict(model, points({{0.3}}).row(0)) == 0.0);
}

TEST_CASE("fit_krr single sample closed form") {
  // one Wendland sample: (K + lambda I) alpha = y with K = 1
  EmbeddedDataset data;
  data.inputs = points({{0.7}});
  data.targets = (Vec(1) << 2.0).finished();
  const double lambda = 0.3;
  const NystromModel model = fit_krr(data, KernelSpec::wendland(), lambda);
  CHECK(model.alpha(0) == doctest::Approx(2.0 / 1.3).epsilon(1e-12));
  CHECK(predict(model, data.inputs.row(0)) == doctest::Approx(2.0 / 1.3).epsilon(1e-12));
}

TEST_CASE("fit_krr objective beats random perturbations") {
  Rng rng(10);
  const auto inst = jittered_instance(30, 1, rng);
  const KernelSpec kernel = KernelSpec::wendland();
  const double lambda = 0.1;
  const NystromModel model = fit_krr(inst.train, kernel, lambda);
  const double at_min = objective_value(inst.train, kernel, lambda, model.centers, model.alpha);
  for (int trial = 0; trial < 200; ++trial) {
    Vec delta(model.alpha.size());
    for (Index i = 0; i < delta.size(); ++i) delta(i) = rng.uniform(-0.1, 0.1);
    const double perturbed =
        objective_value(inst.train, kernel, lambda, model.centers, model.alpha + delta);
    CHECK(at_min <= perturbed + 1e-12);
  }
}

TEST_CASE("fit_krr rejects a singular system at lambda 0") {
  EmbeddedDataset data;
  data.inputs = points({{0.5}, {0.5}});  // duplicate point
  data.targets = (Vec(2) << 1.0, 2.0).finished();
  CHECK_THROWS_WITH_AS(fit_krr(data, KernelSpec::wendland(), 0.0),
                       doctest::Contains("lambda"), NumericalError);
}

TEST_CASE("perfect interpolation at lambda 0 on a full-rank system") {
  EmbeddedDataset data;
  data.inputs = points({{0.0}, {0.4}, {0.8}});
  data.targets = (Vec(3) << 0.3, -0.2, 0.9).finished();
  const NystromModel model = fit_krr(data, KernelSpec::wendland(), 0.0);
  const Vec r = residuals(model, data);
  CHECK(r.cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("full-index Nystrom agrees with KRR on M1 data") {
  // the algebraic identity at lambda = 0.1 on the sine recursion
  const EmbeddedDataset all = m1_dataset(250, 42);
  const EmbeddedDataset train = all.slice(0, 200);
  const EmbeddedDataset test = all.slice(200, 50);
  const NystromModel krr = fit_krr(train, KernelSpec::wendland(), 0.1);
  const NystromModel nys =
      fit_nystrom(train, KernelSpec::wendland(), 0.1, full_index_set(200));
  CHECK(max_rel_diff(predict_batch(nys, test.inputs), predict_batch(krr, test.inputs)) <= 1e-6);
}

TEST_CASE("full-index Nystrom agrees with KRR for every kernel and lambda") {
  Rng rng(2024);
  int trial = 0;
  for (int kind = 0; kind < 3; ++kind) {
    const KernelSpec kernel = kind == 0   ? KernelSpec::wendland()
                              : kind == 1 ? KernelSpec::gaussian(0.5)
                                          : KernelSpec::min_plus_one();
    for (double lambda : {1e-3, 1e-1}) {
      const Index n = 80 + static_cast<Index>(rng.pick_index(121));
      const auto inst = jittered_instance(n, 50, rng);
      const NystromModel krr = fit_krr(inst.train, kernel, lambda);
      const NystromModel nys = fit_nystrom(inst.train, kernel, lambda, full_index_set(n));
      const double rel =
          max_rel_diff(predict_batch(nys, inst.test_inputs), predict_batch(krr, inst.test_inputs));
      INFO("kernel ", kind, " lambda ", lambda, " n ", n, " trial ", trial);
      CHECK(rel <= 1e-6);
      ++trial;
    }
  }
}

TEST_CASE("restricted fit matches an independent least-squares oracle") {
  Rng rng(31);
  for (int trial = 0; trial < 4; ++trial) {
    const Index n = 30, m = 5;
    const auto inst = jittered_instance(n, 1, rng);
    const KernelSpec kernel = KernelSpec::wendland();
    const double lambda = 0.05;
    IndexSet idx;
    idx.indices = {2, 7, 13, 21, 28};
    const NystromModel model = fit_nystrom(inst.train, kernel, lambda, idx);

    // normal equations assembled by hand, solved by the test's own
    // Gaussian elimination
    const Mat knm = gram(kernel, inst.train.inputs, model.centers);
    const Mat kmm = gram(kernel, model.centers, model.centers);
    const Mat sys = knm.transpose() * knm + lambda * static_cast<double>(n) * kmm;
    const Vec rhs = knm.transpose() * inst.train.targets;
    std::vector<std::vector<double>> a(m, std::vector<double>(m));
    std::vector<double> b(m);
    for (Index i = 0; i < m; ++i) {
      b[static_cast<size_t>(i)] = rhs(i);
      for (Index j = 0; j < m; ++j) a[static_cast<size_t>(i)][static_cast<size_t>(j)] = sys(i, j);
    }
    const std::vector<double> ref = testutil::solve_dense(a, b);
    Vec oracle(m);
    for (Index i = 0; i < m; ++i) oracle(i) = ref[static_cast<size_t>(i)];

    const double j_model =
        objective_value(inst.train, kernel, lambda, model.centers, model.alpha);
    const double j_oracle = objective_value(inst.train, kernel, lambda, model.centers, oracle);
    CHECK(j_model <= j_oracle + 1e-8);
    CHECK(std::abs(j_model - j_oracle) <= 1e-8);
  }
}

TEST_CASE("finite-difference gradient vanishes at the fitted coefficients") {
  Rng rng(8);
  const Index n = 30, m = 5;
  const auto inst = jittered_instance(n, 1, rng);
  const KernelSpec kernel = KernelSpec::wendland();
  const double lambda = 0.05;
  IndexSet idx;
  idx.indices = {0, 6, 14, 22, 29};
  const NystromModel model = fit_nystrom(inst.train, kernel, lambda, idx);

  const double h = 1e-6;
  double grad_sq = 0.0;
  for (Index i = 0; i < m; ++i) {
    Vec up = model.alpha, down = model.alpha;
    up(i) += h;
    down(i) -= h;
    const double g = (objective_value(inst.train, kernel, lambda, model.centers, up) -
                      objective_value(inst.train, kernel, lambda, model.centers, down)) /
                     (2.0 * h);
    grad_sq += g * g;
  }
  CHECK(std::sqrt(grad_sq) <= 1e-6 * (1.0 + inst.train.targets.norm()));
}

TEST_CASE("fit_nystrom zero targets and basic errors") {
  const EmbeddedDataset data = m1_dataset(50, 3);
  EmbeddedDataset zeros = data;
  zeros.targets.setZero();
  IndexSet idx;
  idx.indices = {5, 6, 7, 8};
  const NystromModel model = fit_nystrom(zeros, KernelSpec::wendland(), 0.1, idx);
  for (Index i = 0; i < model.alpha.size(); ++i) CHECK(model.alpha(i) == 0.0);

  CHECK_THROWS_AS(fit_nystrom(data, KernelSpec::wendland(), 0.1, IndexSet{}),
                  std::invalid_argument);
  IndexSet bad;
  bad.indices = {3, 3};
  CHECK_THROWS_AS(fit_nystrom(data, KernelSpec::wendland(), 0.1, bad), std::invalid_argument);
  IndexSet oob;
  oob.indices = {49, 50};
  CHECK_THROWS_AS(fit_nystrom(data, KernelSpec::wendland(), 0.1, oob), std::invalid_argument);
  CHECK_THROWS_AS(fit_nystrom(data, KernelSpec::wendland(), -0.5, idx), std::invalid_argument);
}

TEST_CASE("predict matches a hand-rolled sum over centers") {
  Rng rng(55);
  const auto inst = jittered_instance(30, 10, rng);
  IndexSet idx;
  idx.indices = {1, 4, 9, 16, 25};
  const NystromModel model = fit_nystrom(inst.train, KernelSpec::gaussian(0.5), 0.05, idx);
  for (Index t = 0; t < inst.test_inputs.rows(); ++t) {
    double by_hand = 0.0;
    for (Index i = 0; i < model.m(); ++i) {
      const double diff = model.centers(i, 0) - inst.test_inputs(t, 0);
      by_hand += model.alpha(i) * std::exp(-diff * diff / (2.0 * 0.25));
    }
    CHECK(predict(model, inst.test_inputs.row(t)) ==
          doctest::Approx(by_hand).epsilon(1e-12));
  }
  CHECK_THROWS_AS(predict(model, points({{0.0, 0.0}}).row(0)), std::invalid_argument);
}

TEST_CASE("predict trivial values") {
  NystromModel model;
  model.kernel = KernelSpec::wendland();
  model.centers = points({{0.4}});
  model.alpha = (Vec(1) << 2.0).finished();
  model.lambda = 0.1;
  CHECK(predict(model, model.centers.row(0)) == 2.0);  // K(c, c) = 1
  model.alpha(0) = 0.0;
  CHECK(predict(model, points({{1.7}}).row(0)) == 0.0);
}

TEST_CASE("residuals") {
  // a zero model leaves the targets untouched
  const EmbeddedDataset data = m1_dataset(40, 9);
  NystromModel zero;
  zero.kernel = KernelSpec::wendland();
  zero.centers = points({{0.0}});
  zero.alpha = Vec::Zero(1);
  const Vec r = residuals(zero, data);
  CHECK((r - data.targets).cwiseAbs().maxCoeff() == 0.0);

  // noise-free recursion: a small-lambda fit tracks the deterministic map
  const EmbeddedDataset clean = m1_dataset(400, 10, 0.0);
  IndexSet idx;
  for (Index i = 0; i < 40; ++i) idx.indices.push_back(i * 10);
  const NystromModel fit = fit_nystrom(clean, KernelSpec::wendland(), 1e-6, idx);
  CHECK(residuals(fit, clean).cwiseAbs().maxCoeff() <= 1e-2);
}

TEST_CASE("RKHS seminorm is nonincreasing in lambda") {
  Rng rng(12);
  for (int inst_i = 0; inst_i < 10; ++inst_i) {
    const Index n = 40 + static_cast<Index>(rng.pick_index(40));
    const auto inst = jittered_instance(n, 1, rng);
    IndexSet idx;
    for (Index i = 0; i < 8; ++i) idx.indices.push_back(i * (n / 8));
    const KernelSpec kernel = KernelSpec::wendland();
    double prev = std::numeric_limits<double>::infinity();
    for (double lambda : {1e-4, 1e-3, 1e-2, 1e-1, 1.0}) {
      const NystromModel model = fit_nystrom(inst.train, kernel, lambda, idx);
      const Mat kmm = gram(kernel, model.centers, model.centers);
      const double seminorm = model.alpha.dot(kmm * model.alpha);
      CHECK(seminorm <= prev * (1.0 + 1e-10) + 1e-12);
      prev = seminorm;
    }
  }
}

TEST_CASE("fitting is bit-deterministic") {
  const EmbeddedDataset data = m1_dataset(150, 77);
  IndexSet idx;
  for (Index i = 10; i < 40; ++i) idx.indices.push_back(i);
  const NystromModel a = fit_nystrom(data, KernelSpec::wendland(), 0.01, idx);
  const NystromModel b = fit_nystrom(data, KernelSpec::wendland(), 0.01, idx);
  REQUIRE(a.alpha.size() == b.alpha.size());
  CHECK(std::memcmp(a.alpha.data(), b.alpha.data(),
                    sizeof(double) * static_cast<size_t>(a.alpha.size())) == 0);
}

TEST_CASE("duplicate centers are kept and the retained rank is recorded") {
  EmbeddedDataset data = m1_dataset(60, 5);
  data.inputs.row(7) = data.inputs.row(3);  // duplicate point
  IndexSet idx;
  idx.indices = {3, 7, 20, 30, 40};
  const NystromModel model = fit_nystrom(data, KernelSpec::wendland(), 0.05, idx);
  CHECK(model.m() == 5);
  CHECK(model.meta.retained_rank < 5);
  CHECK(model.alpha.allFinite());
}

TEST_CASE("model serialization round-trips predictions bit for bit") {
  Rng rng(404);
  const auto inst = jittered_instance(60, 20, rng);
  IndexSet idx;
  idx.indices = {0, 11, 22, 33, 44, 55};
  const NystromModel model =
      fit_nystrom(inst.train, KernelSpec::gaussian(0.5), 0.03, idx, -1.0, 404);

  std::stringstream buffer;
  save_model(buffer, model, AffineTransform{1.5, 2.0});
  const LoadedModel loaded = load_model(buffer, "buffer");

  CHECK(loaded.model.kernel.kind == KernelKind::Gaussian);
  CHECK(loaded.model.kernel.bandwidth == model.kernel.bandwidth);
  CHECK(loaded.model.lambda == model.lambda);
  CHECK(loaded.model.meta.index_set == model.meta.index_set);
  CHECK(loaded.model.meta.seed == model.meta.seed);
  CHECK(loaded.model.meta.retained_rank == model.meta.retained_rank);
  REQUIRE(loaded.transform.has_value());
  CHECK(loaded.transform->offset == 1.5);
  CHECK(loaded.transform->scale == 2.0);
  for (Index t = 0; t < inst.test_inputs.rows(); ++t) {
    const double a = predict(model, inst.test_inputs.row(t));
    const double b = predict(loaded.model, inst.test_inputs.row(t));
    CHECK(a == b);  // bitwise
  }
}

TEST_CASE("model loader reports malformed files with line numbers") {
  std::stringstream bad("nys-model 1\nkernel.kind wendland\nnot-a-pair\n");
  CHECK_THROWS_WITH_AS(load_model(bad, "bad"), doctest::Contains("bad:3"), DataError);

  std::stringstream wrong_magic("something-else\n");
  CHECK_THROWS_AS(load_model(wrong_magic, "m"), DataError);
}
