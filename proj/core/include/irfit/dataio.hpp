#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "irfit/model.hpp"
#include "irfit/objective.hpp"

namespace irfit {

// Error for malformed input files; line is 1-based and already part of the
// what() text.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// How a full observation set is partitioned into fit and holdout parts.
struct SplitPolicy {
  enum class Kind { LastFraction, EveryKth, ExplicitDays };

  Kind kind = Kind::LastFraction;
  double fraction = 0.2;        // LastFraction: chronological tail share
  int every_k = 5;              // EveryKth: every k-th observation held out
  std::vector<int> holdout_days;  // ExplicitDays

  static SplitPolicy last_fraction(double fraction);
  static SplitPolicy every_kth(int k);
  static SplitPolicy explicit_days(std::vector<int> days);

  // Throws std::invalid_argument on fraction outside [0, 1], every_k < 1, or
  // nonpositive explicit days.
  void validate() const;
};

std::pair<ObservationSet, ObservationSet> split_observations(
    const ObservationSet& all, const SplitPolicy& policy);

// A workload series with its observations already partitioned.
struct Dataset {
  WorkloadSeries loads;
  ObservationSet fit_obs;
  ObservationSet holdout_obs;
  std::string metadata;

  // Throws std::domain_error unless fit and holdout are day-disjoint, their
  // union is non-empty, and every observed day is within the loads range.
  void validate() const;
};

// Reads the `day,load,performance` CSV format: days strictly increasing
// positive integers, loads nonnegative, performance blank (load-only row) or
// a real number. Days missing between 1 and the last row get load 0 and no
// observation. Throws ParseError with a line number on malformed content and
// std::domain_error when no row carries an observation.
Dataset load_csv(const std::filesystem::path& path,
                 const SplitPolicy& policy = {});
Dataset load_csv(std::istream& in, const std::string& origin,
                 const SplitPolicy& policy = {});

// Writes the same CSV format, one row per day, merging fit and holdout
// observations. Doubles are rendered shortest-round-trip, so a write/read
// cycle reproduces the dataset exactly.
void save_csv(const Dataset& dataset, const std::filesystem::path& path);
void save_csv(const Dataset& dataset, std::ostream& out);

// Simulates observations from known true parameters: prediction plus
// Normal(0, noise_sd^2) noise, drawn in ascending day order from
// Rng(rng_seed). noise_sd = 0 produces exact model outputs. Throws
// std::domain_error when observation_days is empty or outside 1..T.
Dataset generate_synthetic(const ModelParams& true_params,
                           const WorkloadSeries& loads,
                           const std::vector<int>& observation_days,
                           double noise_sd, std::uint64_t rng_seed,
                           const SplitPolicy& policy = {});

// Stream indices of the seed-derivation children used by the stock scenario.
inline constexpr std::uint64_t kLoadStream = 1;
inline constexpr std::uint64_t kNoiseStream = 2;

// The stock synthetic scenario: 166 days of uniform loads in [0, load_max]
// from a seeded schedule, one observation every obs_every-th day.
struct SyntheticSpec {
  int days = 166;
  ModelParams true_params{265.0, 0.10, 0.12, 45.0, 15.0};
  int obs_every = 7;
  double noise_sd = 0.0;
  std::uint64_t seed = 0;
  double load_max = 150.0;

  // Throws std::invalid_argument on days < 1, obs_every < 1 or > days,
  // noise_sd < 0, or load_max <= 0; std::domain_error on bad true_params.
  void validate() const;

  // Canonical "key=value,..." form used in metadata and manifests.
  std::string to_string() const;
};

WorkloadSeries synthetic_loads(const SyntheticSpec& spec);
std::vector<int> synthetic_observation_days(const SyntheticSpec& spec);
Dataset make_synthetic_dataset(const SyntheticSpec& spec,
                               const SplitPolicy& policy = {});

}  // namespace irfit
