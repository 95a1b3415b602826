#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "irfit/dataio.hpp"
#include "irfit/experiment.hpp"
#include "irfit/report.hpp"
#include "irfit/version.hpp"

namespace {

using nlohmann::json;

// Bad flag values detected after CLI11 parsing still count as usage errors.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string timestamp_utc() {
  const std::time_t now = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<double> parse_doubles(const std::string& text, char sep,
                                  const std::string& what) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find(sep, start);
    const std::string token = text.substr(
        start, end == std::string::npos ? std::string::npos : end - start);
    try {
      std::size_t used = 0;
      values.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw UsageError(what + ": cannot parse `" + token + "` as a number");
    }
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return values;
}

irfit::ModelParams parse_params(const std::string& text,
                                const std::string& what) {
  const std::vector<double> v = parse_doubles(text, ',', what);
  if (v.size() != irfit::ModelParams::kCount) {
    throw UsageError(what + ": expected 5 values p0,k1,k2,r1,r2");
  }
  return irfit::ModelParams::from_vector(v);
}

irfit::SyntheticSpec parse_synthetic_spec(const std::string& text) {
  irfit::SyntheticSpec spec;
  if (text == "default") return spec;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find(',', start);
    const std::string token = text.substr(
        start, end == std::string::npos ? std::string::npos : end - start);
    const std::size_t eq = token.find('=');
    if (eq == std::string::npos) {
      throw UsageError("synthetic spec entries must look like key=value, got `" +
                       token + "`");
    }
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    try {
      if (key == "days") {
        spec.days = std::stoi(value);
      } else if (key == "obs-every") {
        spec.obs_every = std::stoi(value);
      } else if (key == "noise-sd") {
        spec.noise_sd = std::stod(value);
      } else if (key == "seed") {
        spec.seed = std::stoull(value);
      } else if (key == "load-max") {
        spec.load_max = std::stod(value);
      } else if (key == "true-params") {
        const std::vector<double> v =
            parse_doubles(value, ':', "true-params");
        if (v.size() != irfit::ModelParams::kCount) {
          throw UsageError(
              "true-params: expected 5 values p0:k1:k2:r1:r2");
        }
        spec.true_params = irfit::ModelParams::from_vector(v);
      } else {
        throw UsageError("unknown synthetic spec key `" + key + "`");
      }
    } catch (const UsageError&) {
      throw;
    } catch (const std::exception&) {
      throw UsageError("synthetic spec: cannot parse `" + token + "`");
    }
    if (end == std::string::npos) break;
    start = end + 1;
  }
  try {
    spec.validate();
  } catch (const std::exception& e) {
    throw UsageError(std::string("synthetic spec: ") + e.what());
  }
  return spec;
}

json params_to_json(const irfit::ModelParams& p) {
  json out;
  const auto values = p.to_array();
  for (int i = 0; i < irfit::ModelParams::kCount; ++i) {
    out[irfit::kParamNames[static_cast<std::size_t>(i)]] =
        values[static_cast<std::size_t>(i)];
  }
  return out;
}

json bounds_to_json(const irfit::Bounds& b) {
  return {{"lower", b.lower}, {"upper", b.upper}};
}

json config_to_json(const irfit::ExperimentConfig& config) {
  json init_box = json::array();
  for (const auto& [lo, hi] : config.init_box.intervals) {
    init_box.push_back({lo, hi});
  }
  return {
      {"init_box", std::move(init_box)},
      {"optimizer_bounds", bounds_to_json(config.optimizer_bounds)},
      {"seeded_relative_sd", config.seeded_relative_sd},
      {"workers", config.workers},
      {"lbfgs",
       {{"max_function_evaluations", config.lbfgs.max_function_evaluations},
        {"max_iterations", config.lbfgs.max_iterations},
        {"history_size", config.lbfgs.history_size},
        {"tolerance", config.lbfgs.tolerance},
        {"line_search",
         {{"sufficient_decrease", config.lbfgs.line_search.sufficient_decrease},
          {"curvature", config.lbfgs.line_search.curvature},
          {"max_trials", config.lbfgs.line_search.max_trials}}}}},
      {"de",
       {{"max_iterations", config.de.max_iterations},
        {"population_size", config.de.population_size},
        {"tolerance", config.de.tolerance},
        {"mutation_range",
         {config.de.mutation_range.first, config.de.mutation_range.second}},
        {"recombination", config.de.recombination},
        {"strategy", config.de.strategy == irfit::DeStrategy::Best1Bin
                         ? "best1bin"
                         : "rand1bin"}}}};
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << content;
  out.flush();
  if (!out) {
    throw std::runtime_error("failed writing " + path.string());
  }
}

void write_json_file(const std::filesystem::path& path, const json& doc) {
  write_text_file(path, doc.dump(2) + "\n");
}

struct DatasetChoice {
  std::string data_path;       // --data
  std::string synthetic_spec;  // --synthetic
};

struct LoadedDataset {
  irfit::Dataset dataset;
  json descriptor;
};

LoadedDataset resolve_dataset(const DatasetChoice& choice,
                              double split_fraction,
                              const std::string& fallback_synthetic) {
  irfit::SplitPolicy policy;
  try {
    policy = irfit::SplitPolicy::last_fraction(split_fraction);
  } catch (const std::exception& e) {
    throw UsageError(std::string("--split-fraction: ") + e.what());
  }
  if (!choice.data_path.empty() && !choice.synthetic_spec.empty()) {
    throw UsageError("--data and --synthetic are mutually exclusive");
  }
  if (!choice.data_path.empty()) {
    return {irfit::load_csv(choice.data_path, policy),
            json{{"type", "csv"}, {"path", choice.data_path},
                 {"split_fraction", split_fraction}}};
  }
  std::string spec_text = choice.synthetic_spec;
  if (spec_text.empty()) {
    if (fallback_synthetic.empty()) {
      throw UsageError("one of --data or --synthetic is required");
    }
    spec_text = fallback_synthetic;
  }
  const irfit::SyntheticSpec spec = parse_synthetic_spec(spec_text);
  return {irfit::make_synthetic_dataset(spec, policy),
          json{{"type", "synthetic"}, {"spec", spec.to_string()},
               {"split_fraction", split_fraction}}};
}

int resolve_workers(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("IMPULSE_FIT_WORKERS")) {
    try {
      const int parsed = std::stoi(env);
      if (parsed < 1) throw std::invalid_argument(env);
      return parsed;
    } catch (const std::exception&) {
      throw UsageError(std::string("IMPULSE_FIT_WORKERS must be a positive "
                                   "integer, got `") +
                       env + "`");
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

struct FitOptions {
  DatasetChoice dataset;
  std::string algorithm;
  std::string init;
  std::string out = ".";
  std::uint64_t seed = 0;
  double split_fraction = 0.2;
};

void run_fit(const FitOptions& opt) {
  const auto algorithm = irfit::algorithm_from_string(opt.algorithm);
  if (!algorithm) {
    throw UsageError("--algorithm must be one of lbfgs, de-random, de-seeded");
  }
  std::optional<irfit::ModelParams> init;
  if (!opt.init.empty()) init = parse_params(opt.init, "--init");

  LoadedDataset loaded = resolve_dataset(opt.dataset, opt.split_fraction, "");
  const irfit::ExperimentConfig config;
  irfit::TrialRecord record =
      irfit::run_trial(loaded.dataset, *algorithm,
                       irfit::trial_seed_for(opt.seed, 0), config, init);

  const std::filesystem::path out_dir(opt.out);
  std::filesystem::create_directories(out_dir);

  json result = {{"algorithm", std::string(to_string(record.algorithm))},
                 {"master_seed", opt.seed},
                 {"trial_seed", record.seed},
                 {"initial_params", params_to_json(record.initial_params)},
                 {"final_params", params_to_json(record.final_params)},
                 {"fit_r_squared", record.fit_r_squared},
                 {"holdout_loss", record.holdout_loss},
                 {"function_evaluations", record.function_evaluations},
                 {"wall_time_s", record.wall_time_s},
                 {"converged", record.converged},
                 {"dataset", loaded.dataset.metadata}};
  write_json_file(out_dir / "result.json", result);

  json manifest = {{"command", "fit"},
                   {"tool_version", irfit::kVersion},
                   {"timestamp_utc", timestamp_utc()},
                   {"master_seed", opt.seed},
                   {"algorithm", std::string(to_string(record.algorithm))},
                   {"dataset", loaded.descriptor},
                   {"config", config_to_json(config)}};
  if (init.has_value()) manifest["initial_override"] = params_to_json(*init);
  write_json_file(out_dir / "manifest.json", manifest);

  std::cout << "fit " << to_string(record.algorithm) << " seed=" << opt.seed
            << " r_squared=" << record.fit_r_squared
            << " holdout_loss=" << record.holdout_loss
            << " fevals=" << record.function_evaluations
            << " wall_time_s=" << record.wall_time_s << " converged="
            << (record.converged ? "true" : "false") << "\n";
}

struct BenchmarkOptions {
  DatasetChoice dataset;
  std::string algorithms = "lbfgs,de-random,de-seeded";
  std::string out = ".";
  int trials = 1000;
  std::uint64_t seed = 0;
  int workers = 0;  // 0 = resolve from environment / hardware
  double split_fraction = 0.2;
};

void run_benchmark_cmd(const BenchmarkOptions& opt) {
  std::vector<irfit::AlgorithmId> algorithms;
  {
    std::size_t start = 0;
    const std::string& text = opt.algorithms;
    while (start <= text.size()) {
      const std::size_t end = text.find(',', start);
      const std::string token = text.substr(
          start, end == std::string::npos ? std::string::npos : end - start);
      const auto id = irfit::algorithm_from_string(token);
      if (!id) {
        throw UsageError("--algorithms: unknown algorithm `" + token + "`");
      }
      algorithms.push_back(*id);
      if (end == std::string::npos) break;
      start = end + 1;
    }
  }

  LoadedDataset loaded = resolve_dataset(opt.dataset, opt.split_fraction,
                                         "noise-sd=2");
  irfit::ExperimentConfig config;
  config.workers = resolve_workers(opt.workers);

  const irfit::BenchmarkReport report = irfit::run_benchmark(
      loaded.dataset, opt.trials, algorithms, opt.seed, config);
  const irfit::BenchmarkSummary summary = irfit::summarize_benchmark(report);

  const std::filesystem::path out_dir(opt.out);
  std::filesystem::create_directories(out_dir);
  irfit::write_records_csv(out_dir / "records.csv", report.records);
  write_text_file(out_dir / "summary.txt", irfit::render_summary_text(summary));
  write_text_file(out_dir / "summary.json",
                  irfit::render_summary_json(summary));

  json algorithm_names = json::array();
  for (irfit::AlgorithmId id : algorithms) {
    algorithm_names.push_back(std::string(to_string(id)));
  }
  json manifest = {{"command", "benchmark"},
                   {"tool_version", irfit::kVersion},
                   {"timestamp_utc", timestamp_utc()},
                   {"master_seed", opt.seed},
                   {"trials", opt.trials},
                   {"algorithms", std::move(algorithm_names)},
                   {"dataset", loaded.descriptor},
                   {"config", config_to_json(config)}};
  write_json_file(out_dir / "manifest.json", manifest);

  std::cout << "benchmark complete: " << report.records.size() << " records, "
            << report.failures.size() << " failures -> " << out_dir.string()
            << "\n";
  for (const irfit::TrialFailure& f : report.failures) {
    std::cerr << "failed trial " << f.trial << " ("
              << to_string(f.algorithm) << "): " << f.message << "\n";
  }
}

struct SynthOptions {
  std::string true_params = "265,0.1,0.12,45,15";
  std::string out;
  int days = 166;
  int obs_every = 7;
  double noise_sd = 0.0;
  double load_max = 150.0;
  std::uint64_t seed = 0;
};

void run_synth(const SynthOptions& opt) {
  irfit::SyntheticSpec spec;
  spec.days = opt.days;
  spec.obs_every = opt.obs_every;
  spec.noise_sd = opt.noise_sd;
  spec.load_max = opt.load_max;
  spec.seed = opt.seed;
  spec.true_params = parse_params(opt.true_params, "--true-params");
  try {
    spec.validate();
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }

  const irfit::Dataset dataset = irfit::make_synthetic_dataset(spec);
  const std::filesystem::path out_path(opt.out);
  if (out_path.has_parent_path()) {
    std::filesystem::create_directories(out_path.parent_path());
  }
  irfit::save_csv(dataset, out_path);

  json manifest = {{"command", "synth"},
                   {"tool_version", irfit::kVersion},
                   {"timestamp_utc", timestamp_utc()},
                   {"seed", spec.seed},
                   {"days", spec.days},
                   {"obs_every", spec.obs_every},
                   {"noise_sd", spec.noise_sd},
                   {"load_max", spec.load_max},
                   {"true_params", params_to_json(spec.true_params)},
                   {"out", out_path.string()},
                   {"spec", spec.to_string()}};
  write_json_file(out_path.string() + ".manifest.json", manifest);

  std::cout << "synth wrote " << dataset.loads.days() << " days, "
            << dataset.fit_obs.size() + dataset.holdout_obs.size()
            << " observations -> " << out_path.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"impulse-response training model: fitting and benchmarking"};
  app.set_version_flag("--version", std::string(irfit::kVersion));
  app.require_subcommand(1);

  FitOptions fit_opt;
  CLI::App* fit = app.add_subcommand("fit", "fit one dataset with one algorithm");
  fit->add_option("--data", fit_opt.dataset.data_path,
                  "input CSV (day,load,performance)")
      ->check(CLI::ExistingFile);
  fit->add_option("--synthetic", fit_opt.dataset.synthetic_spec,
                  "synthetic dataset spec (`default` or key=value list)");
  fit->add_option("--algorithm", fit_opt.algorithm,
                  "lbfgs, de-random, or de-seeded")
      ->required();
  fit->add_option("--seed", fit_opt.seed, "master seed");
  fit->add_option("--init", fit_opt.init,
                  "initial parameters p0,k1,k2,r1,r2 (default: sampled)");
  fit->add_option("--split-fraction", fit_opt.split_fraction,
                  "holdout fraction of observations (chronological tail)");
  fit->add_option("--out", fit_opt.out, "output directory");
  fit->callback([&] { run_fit(fit_opt); });

  BenchmarkOptions bench_opt;
  CLI::App* bench = app.add_subcommand(
      "benchmark", "run the repeated-trials algorithm comparison");
  bench->add_option("--trials", bench_opt.trials, "trials per algorithm")
      ->check(CLI::PositiveNumber);
  bench->add_option("--algorithms", bench_opt.algorithms,
                    "comma-separated algorithm list");
  bench->add_option("--seed", bench_opt.seed, "master seed");
  bench->add_option("--workers", bench_opt.workers,
                    "worker threads (default: IMPULSE_FIT_WORKERS or hardware)")
      ->check(CLI::PositiveNumber);
  bench->add_option("--data", bench_opt.dataset.data_path,
                    "input CSV (default: synthetic noise-sd=2)")
      ->check(CLI::ExistingFile);
  bench->add_option("--synthetic", bench_opt.dataset.synthetic_spec,
                    "synthetic dataset spec");
  bench->add_option("--split-fraction", bench_opt.split_fraction,
                    "holdout fraction of observations");
  bench->add_option("--out", bench_opt.out, "output directory");
  bench->callback([&] { run_benchmark_cmd(bench_opt); });

  SynthOptions synth_opt;
  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic dataset CSV");
  synth->add_option("--days", synth_opt.days, "number of days")
      ->check(CLI::PositiveNumber);
  synth->add_option("--true-params", synth_opt.true_params,
                    "true parameters p0,k1,k2,r1,r2");
  synth->add_option("--noise-sd", synth_opt.noise_sd,
                    "observation noise standard deviation")
      ->check(CLI::NonNegativeNumber);
  synth->add_option("--obs-every", synth_opt.obs_every,
                    "observe every k-th day")
      ->check(CLI::PositiveNumber);
  synth->add_option("--load-max", synth_opt.load_max,
                    "upper bound of the uniform load schedule")
      ->check(CLI::PositiveNumber);
  synth->add_option("--seed", synth_opt.seed, "generation seed");
  synth->add_option("--out", synth_opt.out, "output CSV path")->required();
  synth->callback([&] { run_synth(synth_opt); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
