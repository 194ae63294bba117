#include "nys/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>

#include "nys/csv.hpp"
#include "nys/experiments.hpp"

namespace nys {

namespace {

namespace fs = std::filesystem;

struct RunContext {
  fs::path out;
  uint64_t seed{42};
  Index jobs{1};
  bool rescale{false};
};

RunContext make_context(Config& cfg) {
  RunContext ctx;
  ctx.out = cfg.get_string("run.out", "out");
  ctx.seed = cfg.get_uint64("run.seed", 42);
  ctx.jobs = cfg.get_index("run.jobs", 1);
  ctx.rescale = cfg.get_bool("run.rescale", false);
  if (ctx.jobs < 1) throw ConfigError("run.jobs must be >= 1");
  std::error_code ec;
  fs::create_directories(ctx.out, ec);
  if (ec || !fs::is_directory(ctx.out)) {
    throw IoError("cannot create output directory '" + ctx.out.string() + "'");
  }
  return ctx;
}

MechanismConfig mechanism_from_config(Config& cfg) {
  MechanismConfig mech;
  mech.map_id = cfg.get_string("mechanism.map", "m1");
  nar_map(mech.map_id);  // reject unknown ids early

  const std::string default_noise = mech.map_id == "m2" ? "bernoulli" : "uniform";
  const std::string kind = cfg.get_string("mechanism.noise.kind", default_noise);
  if (kind == "bernoulli") {
    mech.noise = NoiseSpec::bernoulli(cfg.get_double("mechanism.noise.p", 0.5));
  } else if (kind == "uniform") {
    mech.noise = NoiseSpec::uniform(cfg.get_double("mechanism.noise.a", -0.7),
                                    cfg.get_double("mechanism.noise.b", 0.7));
  } else if (kind == "gaussian") {
    mech.noise = NoiseSpec::gaussian(cfg.get_double("mechanism.noise.mu", 0.0),
                                     cfg.get_double("mechanism.noise.sigma", 0.1));
  } else if (kind == "zero") {
    mech.noise = NoiseSpec::zero();
  } else {
    throw ConfigError("mechanism.noise.kind must be bernoulli, uniform, gaussian or zero, got '" +
                      kind + "'");
  }
  mech.d = cfg.get_index("embed.d", 1);
  mech.burn_in = cfg.get_index("mechanism.burn_in", 0);
  if (cfg.has("mechanism.x0")) mech.x0 = cfg.get_double("mechanism.x0");
  return mech;
}

KernelSpec kernel_from_config(Config& cfg) {
  const std::string kind = cfg.get_string("kernel.kind", "wendland");
  KernelSpec k;
  try {
    k.kind = kernel_kind_from_name(kind);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("kernel.kind: ") + e.what());
  }
  if (k.kind == KernelKind::Gaussian) {
    k.bandwidth = cfg.get_double("kernel.sigma", 0.5);
  }
  k.validate();
  return k;
}

// Resolves subsample.m / subsample.ratio against the dataset size.
SubsampleSpec subsample_from_config(Config& cfg, Index n) {
  Index m;
  if (cfg.has("subsample.m")) {
    m = cfg.get_index("subsample.m");
  } else {
    const double ratio = cfg.get_double("subsample.ratio", 0.01);
    if (!(ratio > 0.0 && ratio <= 1.0)) {
      throw ConfigError("subsample.ratio must lie in (0, 1], got " + format_num(ratio));
    }
    m = std::max<Index>(1, static_cast<Index>(std::floor(ratio * static_cast<double>(n))));
  }
  const std::string mode = cfg.get_string("subsample.mode", "random");
  try {
    if (mode == "random") return SubsampleSpec::random_start(m);
    if (mode == "sequential") {
      return SubsampleSpec::sequential_at(m, cfg.get_index("subsample.start", 0));
    }
    if (mode == "first" || mode == "middle" || mode == "last") {
      return SubsampleSpec::positional(m, mode);
    }
    if (mode == "strided") {
      return SubsampleSpec::strided(m, cfg.get_index("subsample.start", 0),
                                    cfg.get_index("subsample.gap", 0));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("subsample: ") + e.what());
  }
  throw ConfigError("subsample.mode must be random, sequential, first, middle, last or strided, "
                    "got '" + mode + "'");
}

LambdaSelection lambda_from_config(Config& cfg) {
  const bool has_fixed = cfg.has("lambda.fixed");
  const bool has_grid = cfg.has("lambda.grid");
  if (has_fixed && has_grid) {
    throw ConfigError("set either lambda.fixed or lambda.grid, not both");
  }
  if (!has_fixed && !has_grid) {
    throw ConfigError("missing lambda selection: set lambda.fixed or lambda.grid");
  }
  LambdaSelection sel;
  if (has_fixed) {
    sel = LambdaSelection::fixed(cfg.get_double("lambda.fixed"));
  } else {
    sel.grid = cfg.get_double_list("lambda.grid");
    sel.holdout_fraction = cfg.get_double("lambda.holdout", 0.2);
  }
  for (double l : sel.grid) {
    if (!(l >= 0.0)) throw ConfigError("lambda values must be >= 0, got " + format_num(l));
  }
  return sel;
}

RefitMode refit_from_config(Config& cfg, const std::string& fallback) {
  const std::string v = cfg.get_string("protocol.refit", fallback);
  if (v == "once") return RefitMode::Once;
  if (v == "per_step") return RefitMode::PerStep;
  throw ConfigError("protocol.refit must be once or per_step, got '" + v + "'");
}

TargetMode target_from_config(Config& cfg, const std::string& fallback) {
  const std::string v = cfg.get_string("protocol.target", fallback);
  if (v == "noisy") return TargetMode::Noisy;
  if (v == "denoised") return TargetMode::Denoised;
  throw ConfigError("protocol.target must be noisy or denoised, got '" + v + "'");
}

void write_echo(const Config& cfg, const RunContext& ctx, const std::string& command) {
  std::ofstream out(ctx.out / "config_echo.cfg");
  if (!out) throw IoError("cannot write config echo in '" + ctx.out.string() + "'");
  Config copy = cfg;
  copy.set("run.command", command);
  const std::time_t now = std::time(nullptr);
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  copy.set("run.timestamp", stamp);
  copy.echo(out);
  if (!out) throw IoError("failed while writing config echo");
}

void write_kv_file(const fs::path& path, const std::vector<std::pair<std::string, std::string>>& kv) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  for (const auto& [k, v] : kv) out << k << " = " << v << '\n';
  if (!out) throw IoError("failed while writing '" + path.string() + "'");
}

double now_s() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

// Training material assembled from either a synthetic mechanism or an
// input file, with optional min-max rescaling to [0,1]. Noise is only
// available on the synthetic path.
struct DataBundle {
  EmbeddedDataset train;
  EmbeddedDataset test;  // empty when test.n = 0
  std::vector<double> test_noise;
  std::optional<AffineTransform> transform;
  Index d{1};
};

AffineTransform transform_from_values(const std::vector<double>& values) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo == *hi) {
    throw DataError("cannot rescale a constant series");
  }
  return {*lo, *hi - *lo};
}

void apply_transform(EmbeddedDataset& data, const AffineTransform& t) {
  data.inputs = (data.inputs.array() - t.offset) / t.scale;
  data.targets = (data.targets.array() - t.offset) / t.scale;
}

DataBundle load_data(Config& cfg, const RunContext& ctx, Index n_test_default) {
  DataBundle out;
  const Index n_train = cfg.get_index("train.n", 2000);
  const Index n_test = cfg.get_index("test.n", n_test_default);
  if (n_train < 1 || n_test < 0) throw ConfigError("train.n must be >= 1 and test.n >= 0");

  if (cfg.has("input.path")) {
    const std::string path = cfg.get_string("input.path");
    const std::string kind = cfg.get_string("input.kind", "series");
    if (kind == "series") {
      const Series s = read_series_csv(path);
      out.d = cfg.get_index("embed.d", 1);
      Series used = s;
      if (used.size() < n_train + n_test + out.d) {
        throw DataError("series '" + path + "' holds " + format_num(used.size()) +
                        " values; need " + format_num(n_train + n_test + out.d) +
                        " for train.n=" + format_num(n_train) + ", test.n=" +
                        format_num(n_test) + ", d=" + format_num(out.d));
      }
      if (ctx.rescale) {
        std::vector<double> window(used.values.begin(),
                                   used.values.begin() + (n_train + n_test + out.d));
        out.transform = transform_from_values(window);
      }
      const EmbeddedDataset all = embed(used, out.d);
      out.train = all.slice(0, n_train);
      if (n_test > 0) out.test = all.slice(n_train, n_test);
    } else if (kind == "dataset") {
      const EmbeddedDataset all = read_dataset_csv(path);
      out.d = all.dim();
      if (all.n() < n_train + n_test) {
        throw DataError("dataset '" + path + "' holds " + format_num(all.n()) +
                        " rows; need " + format_num(n_train + n_test));
      }
      if (ctx.rescale) {
        std::vector<double> vals(all.inputs.data(), all.inputs.data() + all.inputs.size());
        vals.insert(vals.end(), all.targets.data(), all.targets.data() + all.targets.size());
        out.transform = transform_from_values(vals);
      }
      out.train = all.slice(0, n_train);
      if (n_test > 0) out.test = all.slice(n_train, n_test);
    } else {
      throw ConfigError("input.kind must be series or dataset, got '" + kind + "'");
    }
  } else {
    const MechanismConfig mech = mechanism_from_config(cfg);
    out.d = mech.d;
    const GeneratedSeries g =
        generate_series(mech, n_train + n_test + mech.d, derive_seed(ctx.seed, "data"));
    if (ctx.rescale) out.transform = transform_from_values(g.series.values);
    const EmbedResult emb = embed(g, mech.d);
    out.train = emb.data.slice(0, n_train);
    if (n_test > 0) {
      out.test = emb.data.slice(n_train, n_test);
      out.test_noise.assign(emb.noise.begin() + n_train, emb.noise.begin() + n_train + n_test);
    }
  }

  if (out.transform.has_value()) {
    apply_transform(out.train, *out.transform);
    if (out.test.n() > 0) apply_transform(out.test, *out.transform);
    for (double& e : out.test_noise) e /= out.transform->scale;
  }
  return out;
}

double select_lambda(const LambdaSelection& sel, const EmbeddedDataset& train,
                     const KernelSpec& kernel, const SubsampleSpec& spec, uint64_t seed) {
  if (sel.is_fixed()) return sel.grid[0];
  return cross_validate(train, kernel, sel.grid, spec, sel.holdout_fraction, seed).best_lambda;
}

std::string index_set_to_string(const std::vector<Index>& idx) {
  std::string out;
  for (size_t i = 0; i < idx.size(); ++i) {
    if (i > 0) out += ',';
    out += format_num(idx[i]);
  }
  return out;
}

// --- commands ---------------------------------------------------------------

void cmd_simulate(Config& cfg, const RunContext& ctx) {
  const Index n = cfg.get_index("n", 2000);
  if (n < 1) throw ConfigError("n must be >= 1");
  const MechanismConfig mech = mechanism_from_config(cfg);
  const GeneratedSeries g = generate_series(mech, n, derive_seed(ctx.seed, "data"));
  write_generated_csv(ctx.out / "series.csv", g);
}

void cmd_fit(Config& cfg, const RunContext& ctx) {
  const double t0 = now_s();
  DataBundle data = load_data(cfg, ctx, 0);
  const KernelSpec kernel = kernel_from_config(cfg);
  const SubsampleSpec spec = subsample_from_config(cfg, data.train.n());
  const LambdaSelection sel = lambda_from_config(cfg);

  const uint64_t sub_seed = cfg.get_uint64("subsample.seed", derive_seed(ctx.seed, "subsample"));
  const double lambda = select_lambda(sel, data.train, kernel, spec, derive_seed(ctx.seed, "cv"));

  Rng rng(sub_seed);
  const IndexSet idx = resolve(spec, data.train.n(), rng);
  const double cutoff = cfg.has("cutoff") ? cfg.get_double("cutoff") : -1.0;
  const NystromModel model = fit_nystrom(data.train, kernel, lambda, idx, cutoff, sub_seed);

  Vec pred = predict_batch(model, data.train.inputs);
  Vec truth = data.train.targets;
  if (data.transform.has_value()) {
    pred = pred.array() * data.transform->scale + data.transform->offset;
    truth = truth.array() * data.transform->scale + data.transform->offset;
  }
  const double train_rmse = rmse(pred, truth);

  save_model(ctx.out / "model.txt", model, data.transform);
  write_kv_file(ctx.out / "fit_summary.txt",
                {{"n", format_num(model.meta.n)},
                 {"m", format_num(model.m())},
                 {"d", format_num(model.dim())},
                 {"lambda", format_num(model.lambda)},
                 {"rank", format_num(model.meta.retained_rank)},
                 {"index_set", index_set_to_string(model.meta.index_set)},
                 {"train_rmse", format_num(train_rmse)},
                 {"wall_s", format_num(now_s() - t0)}});
}

void cmd_predict(Config& cfg, const RunContext& ctx) {
  const LoadedModel loaded = load_model(fs::path(cfg.get_string("model.path")));
  const std::string path = cfg.get_string("input.path");
  const std::string kind = cfg.get_string("input.kind", "series");

  PointMat inputs;
  if (kind == "series") {
    const Series s = read_series_csv(path);
    inputs = embed(s, loaded.model.dim()).inputs;
  } else if (kind == "dataset") {
    const EmbeddedDataset all = read_dataset_csv(path);
    if (all.dim() != loaded.model.dim()) {
      throw DataError("dataset dimension " + format_num(all.dim()) +
                      " does not match model dimension " + format_num(loaded.model.dim()));
    }
    inputs = all.inputs;
  } else {
    throw ConfigError("input.kind must be series or dataset, got '" + kind + "'");
  }

  if (loaded.transform.has_value()) {
    inputs = (inputs.array() - loaded.transform->offset) / loaded.transform->scale;
  }
  Vec pred = predict_batch(loaded.model, inputs);
  if (loaded.transform.has_value()) {
    pred = pred.array() * loaded.transform->scale + loaded.transform->offset;
  }
  write_predictions_csv(ctx.out / "predictions.csv", pred);
}

void cmd_eval(Config& cfg, const RunContext& ctx) {
  DataBundle data = load_data(cfg, ctx, 50);
  if (data.test.n() < 1) throw ConfigError("eval requires test.n >= 1");
  const KernelSpec kernel = kernel_from_config(cfg);
  const SubsampleSpec spec = subsample_from_config(cfg, data.train.n());
  const LambdaSelection sel = lambda_from_config(cfg);

  EvalProtocol protocol;
  protocol.n_train = data.train.n();
  protocol.n_test = data.test.n();
  protocol.refit = refit_from_config(cfg, "per_step");
  protocol.target = target_from_config(cfg, data.test_noise.empty() ? "noisy" : "denoised");
  if (protocol.target == TargetMode::Denoised && data.test_noise.empty()) {
    throw ConfigError("protocol.target = denoised requires synthetic data with recorded noise");
  }

  const double lambda = select_lambda(sel, data.train, kernel, spec, derive_seed(ctx.seed, "cv"));
  const OneStepResult result = one_step_eval(data.train, data.test, data.test_noise, kernel,
                                             lambda, spec, protocol, derive_seed(ctx.seed, "eval"));

  Vec pred = result.predictions;
  Vec target = data.test.targets;
  if (protocol.target == TargetMode::Denoised) {
    for (Index i = 0; i < target.size(); ++i) target(i) -= data.test_noise[static_cast<size_t>(i)];
  }
  double reported_rmse = result.rmse;
  if (data.transform.has_value()) {
    pred = pred.array() * data.transform->scale + data.transform->offset;
    target = target.array() * data.transform->scale + data.transform->offset;
    reported_rmse = rmse(pred, target);
  }

  {
    std::ofstream out(ctx.out / "eval.csv");
    if (!out) throw IoError("cannot open eval.csv for writing");
    out << "k,prediction,target\n";
    for (Index k = 0; k < pred.size(); ++k) {
      out << k << ',' << format_num(pred(k)) << ',' << format_num(target(k)) << '\n';
    }
    if (!out) throw IoError("failed while writing eval.csv");
  }
  write_kv_file(ctx.out / "eval_summary.txt",
                {{"rmse", format_num(reported_rmse)},
                 {"n_train", format_num(protocol.n_train)},
                 {"n_test", format_num(protocol.n_test)},
                 {"m", format_num(spec.m)},
                 {"lambda", format_num(lambda)}});
}

void cmd_sweep(Config& cfg, const RunContext& ctx) {
  const std::string kind = cfg.get_string("sweep.kind", "ratio");
  const MechanismConfig mech = mechanism_from_config(cfg);
  const KernelSpec kernel = kernel_from_config(cfg);
  const LambdaSelection sel = lambda_from_config(cfg);

  SweepSettings settings;
  settings.n_test = cfg.get_index("test.n", 50);
  settings.reps = cfg.get_index("sweep.reps", 5);
  settings.jobs = ctx.jobs;
  settings.refit = refit_from_config(cfg, "once");
  settings.target = target_from_config(cfg, "denoised");

  SweepResult result;
  if (kind == "ratio") {
    const Index n = cfg.get_index("train.n", 2000);
    const std::vector<double> ratios = cfg.get_double_list("sweep.ratios", "0.01,0.05,0.1,0.5");
    result = ratio_sweep(mech, kernel, n, ratios, sel, settings, ctx.seed);
  } else if (kind == "scaling") {
    const std::vector<Index> ns = cfg.get_index_list("sweep.ns");
    const double ratio = cfg.get_double("sweep.ratio", 0.01);
    result = scaling_sweep(mech, kernel, ns, ratio, sel, settings, ctx.seed);
  } else if (kind == "placement") {
    const Index n = cfg.get_index("train.n", 10000);
    Index m;
    if (cfg.has("subsample.m")) {
      m = cfg.get_index("subsample.m");
    } else {
      const double ratio = cfg.get_double("subsample.ratio", 0.01);
      m = std::max<Index>(1, static_cast<Index>(std::floor(ratio * static_cast<double>(n))));
    }
    const std::vector<std::string> positions =
        cfg.get_string_list("sweep.positions", "first,middle,last");
    std::vector<Index> gaps;
    if (cfg.has("sweep.gaps")) gaps = cfg.get_index_list("sweep.gaps");
    result = placement_study(mech, kernel, n, m, positions, gaps, sel, settings, ctx.seed);
  } else {
    throw ConfigError("sweep.kind must be ratio, scaling or placement, got '" + kind + "'");
  }

  write_trials_csv(ctx.out / "sweep.csv", result.rows);
  write_sweep_points_csv(ctx.out / "sweep_summary.csv", result.points);
  if (result.loglog_slope.has_value()) {
    write_kv_file(ctx.out / "sweep_slope.txt",
                  {{"loglog_slope", format_num(*result.loglog_slope)}});
  }
}

ArmGeneration arm_generation_from(Config& cfg, const std::string& key,
                                  const std::string& fallback) {
  const std::string v = cfg.get_string(key, fallback);
  if (v == "series") return ArmGeneration::Series;
  if (v == "iid") return ArmGeneration::Iid;
  throw ConfigError(key + " must be series or iid, got '" + v + "'");
}

void cmd_spectrum(Config& cfg, const RunContext& ctx) {
  const MechanismConfig mech = mechanism_from_config(cfg);
  const KernelSpec kernel = kernel_from_config(cfg);
  const Index n = cfg.get_index("spectrum.n", 3000);
  const Index top_k = cfg.get_index("spectrum.top_k", 100);
  const double threshold = cfg.get_double("spectrum.threshold", 1e-3);
  const Index n_seeds = cfg.get_index("spectrum.seeds", 5);
  if (n_seeds < 1) throw ConfigError("spectrum.seeds must be >= 1");

  ArmConfig dep{mech, arm_generation_from(cfg, "spectrum.dependent.generation", "series")};
  ArmConfig iid{mech, arm_generation_from(cfg, "spectrum.iid.generation", "iid")};

  std::vector<uint64_t> seeds(static_cast<size_t>(n_seeds));
  for (Index i = 0; i < n_seeds; ++i) {
    seeds[static_cast<size_t>(i)] =
        derive_seed(derive_seed(ctx.seed, "spectrum"), static_cast<uint64_t>(i));
  }

  const auto pairs = spectrum_compare(kernel, n, top_k, dep, iid, threshold, seeds);

  std::ofstream summary(ctx.out / "spectrum_summary.csv");
  if (!summary) throw IoError("cannot open spectrum_summary.csv for writing");
  summary << "seed_index,seed,eff_rank_dep,eff_rank_iid\n";
  for (size_t i = 0; i < pairs.size(); ++i) {
    Spectrum sd{pairs[i].top_dependent, static_cast<Index>(pairs[i].top_dependent.size())};
    Spectrum si{pairs[i].top_iid, static_cast<Index>(pairs[i].top_iid.size())};
    write_spectrum_csv_file(ctx.out / ("spectrum_dep_" + std::to_string(i) + ".csv"), sd);
    write_spectrum_csv_file(ctx.out / ("spectrum_iid_" + std::to_string(i) + ".csv"), si);
    summary << i << ',' << pairs[i].seed << ',' << pairs[i].eff_rank_dependent << ','
            << pairs[i].eff_rank_iid << '\n';
  }
  if (!summary) throw IoError("failed while writing spectrum_summary.csv");
}

void cmd_noise(Config& cfg, const RunContext& ctx) {
  DataBundle data = load_data(cfg, ctx, 2000);
  if (data.test.n() < 1) throw ConfigError("noise extraction requires test.n >= 1 held-out rows");
  const KernelSpec kernel = kernel_from_config(cfg);
  const SubsampleSpec spec = subsample_from_config(cfg, data.train.n());
  const LambdaSelection sel = lambda_from_config(cfg);
  const Index bins = cfg.get_index("noise.bins", 30);

  const uint64_t sub_seed = cfg.get_uint64("subsample.seed", derive_seed(ctx.seed, "subsample"));
  const double lambda = select_lambda(sel, data.train, kernel, spec, derive_seed(ctx.seed, "cv"));
  Rng rng(sub_seed);
  const IndexSet idx = resolve(spec, data.train.n(), rng);
  NystromModel model = fit_nystrom(data.train, kernel, lambda, idx, -1.0, sub_seed);

  // load_data already mapped the held-out rows (and noise) into fit units;
  // residuals come out scaled by 1/scale, so the whole report maps back to
  // original units by one affine stretch (offsets cancel in differences).
  NoiseReport report = noise_report(model, data.test, data.test_noise, bins);
  if (data.transform.has_value()) {
    const double sc = data.transform->scale;
    for (double& r : report.residuals) r *= sc;
    for (double& e : report.bin_edges) e *= sc;
    report.mean *= sc;
    report.variance *= sc * sc;
    if (report.reference.has_value()) {
      report.reference->mean *= sc;
      report.reference->variance *= sc * sc;
    }
  }
  write_noise_hist_csv(ctx.out / "noise_hist.csv", report);
  write_noise_summary(ctx.out / "noise_summary.txt", report);
  write_predictions_csv(ctx.out / "residuals.csv",
                        Eigen::Map<const Vec>(report.residuals.data(),
                                              static_cast<Index>(report.residuals.size())));
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"simulate", "fit",      "predict", "eval",
                                                 "sweep",    "spectrum", "noise"};
  return names;
}

void dispatch_command(const std::string& name, Config& cfg) {
  RunContext ctx = make_context(cfg);
  if (name == "simulate") {
    cmd_simulate(cfg, ctx);
  } else if (name == "fit") {
    cmd_fit(cfg, ctx);
  } else if (name == "predict") {
    cmd_predict(cfg, ctx);
  } else if (name == "eval") {
    cmd_eval(cfg, ctx);
  } else if (name == "sweep") {
    cmd_sweep(cfg, ctx);
  } else if (name == "spectrum") {
    cmd_spectrum(cfg, ctx);
  } else if (name == "noise") {
    cmd_noise(cfg, ctx);
  } else {
    throw ConfigError("unknown command '" + name + "'");
  }

  const std::vector<std::string> stray = cfg.unconsumed();
  if (!stray.empty()) {
    std::string msg = "unknown config key(s):";
    for (const auto& k : stray) msg += " " + k;
    throw ConfigError(msg);
  }
  write_echo(cfg, ctx, name);
}

}  // namespace nys
