// Command-line front end: subcommand dispatch, config assembly
// (file < --key=value overrides < dedicated flags) and exit-code mapping.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <thread>

#include "nys/commands.hpp"
#include "nys/config.hpp"

namespace {

struct SharedFlags {
  std::string config_path;
  std::string out_dir;
  uint64_t seed = 0;
  int jobs = 0;
  bool rescale = false;
  bool seed_set = false, out_set = false, jobs_set = false;
};

int run(int argc, char** argv) {
  CLI::App app{"Nystrom-regularized kernel ridge regression for time series"};
  app.require_subcommand(1);

  std::map<std::string, SharedFlags> flags;
  std::map<std::string, CLI::App*> subs;
  for (const std::string& name : nys::command_names()) {
    CLI::App* sub = app.add_subcommand(name, name + " command");
    sub->allow_extras();
    SharedFlags& f = flags[name];
    sub->add_option("--config", f.config_path, "configuration file");
    sub->add_option("--seed", f.seed, "master seed")->each([&f](const std::string&) {
      f.seed_set = true;
    });
    sub->add_option("--out", f.out_dir, "output directory")->each([&f](const std::string&) {
      f.out_set = true;
    });
    sub->add_option("--jobs", f.jobs, "worker threads for sweeps")
        ->each([&f](const std::string&) { f.jobs_set = true; });
    sub->add_flag("--rescale", f.rescale, "min-max rescale inputs and targets to [0,1]");
    subs[name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  const SharedFlags& f = flags[name];

  try {
    nys::Config cfg;
    if (!f.config_path.empty()) {
      cfg = nys::Config::from_file(f.config_path);
    }

    // Leftover tokens are --key=value overrides.
    std::vector<std::string> overrides;
    for (std::string tok : subs[name]->remaining()) {
      if (tok.rfind("--", 0) == 0) {
        tok = tok.substr(2);
      } else {
        throw nys::ConfigError("unexpected argument '" + tok +
                               "' (overrides have the form --key=value)");
      }
      overrides.push_back(tok);
    }
    cfg.merge(nys::Config::from_overrides(overrides));

    if (f.seed_set) cfg.set("run.seed", nys::format_num(f.seed));
    if (f.out_set) cfg.set("run.out", f.out_dir);
    if (f.jobs_set) cfg.set("run.jobs", std::to_string(f.jobs));
    if (f.rescale) cfg.set("run.rescale", "true");
    if (!cfg.has("run.jobs")) {
      const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
      cfg.set("run.jobs", std::to_string(hw));
    }

    nys::dispatch_command(name, cfg);
    return 0;
  } catch (const nys::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const nys::DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 3;
  } catch (const nys::NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 4;
  } catch (const nys::IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 5;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 5;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
