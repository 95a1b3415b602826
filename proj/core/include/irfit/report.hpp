#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "irfit/experiment.hpp"
#include "irfit/stats.hpp"

namespace irfit {

// Aggregates for one algorithm's successful trials.
struct AlgorithmSummary {
  AlgorithmId algorithm = AlgorithmId::Lbfgs;
  int n = 0;
  std::array<GroupSummary, ModelParams::kCount> parameters;  // final params
  GroupSummary fit_r_squared;
  // Computed over the records with a defined (non-NaN) holdout loss; stays
  // default-constructed with n = 0 when fewer than two of those exist.
  GroupSummary holdout_loss;
  GroupSummary wall_time_s;
};

struct BenchmarkSummary {
  int n_trials = 0;
  int n_failures = 0;
  std::vector<AlgorithmSummary> algorithms;
  // Algorithms with fewer than two successful records cannot be summarized;
  // they are listed here with their record count instead.
  std::vector<std::pair<AlgorithmId, int>> skipped;
  // Present when at least two algorithms have summaries; the holdout variant
  // additionally needs the holdout loss to be defined for those algorithms.
  std::optional<AnovaResult> anova_r_squared;
  std::optional<AnovaResult> anova_holdout_loss;
};

BenchmarkSummary summarize_benchmark(const BenchmarkReport& report);

// Records CSV with the fixed header
// algorithm,trial,seed,init_p0,init_k1,init_k2,init_r1,init_r2,
// p0,k1,k2,r1,r2,r_squared,holdout_loss,fevals,wall_time_s,converged.
// Doubles are rendered shortest-round-trip so reading back reproduces the
// records exactly.
void write_records_csv(std::ostream& out,
                       const std::vector<TrialRecord>& records);
void write_records_csv(const std::filesystem::path& path,
                       const std::vector<TrialRecord>& records);
std::vector<TrialRecord> read_records_csv(std::istream& in);
std::vector<TrialRecord> read_records_csv(const std::filesystem::path& path);

// Human-readable summary: per algorithm and parameter the mean, std dev,
// 95% CI of the mean, and the empirical 2.5..97.5 percentile interval, plus
// fit/holdout/wall-time blocks and the ANOVA results.
std::string render_summary_text(const BenchmarkSummary& summary);

// The same content as a JSON document.
std::string render_summary_json(const BenchmarkSummary& summary);

}  // namespace irfit
