#include "irfit/dataio.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "irfit/rng.hpp"
#include "text_util.hpp"

namespace irfit {

namespace {

constexpr const char* kCsvHeader = "day,load,performance";

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

SplitPolicy SplitPolicy::last_fraction(double fraction) {
  SplitPolicy p;
  p.kind = Kind::LastFraction;
  p.fraction = fraction;
  p.validate();
  return p;
}

SplitPolicy SplitPolicy::every_kth(int k) {
  SplitPolicy p;
  p.kind = Kind::EveryKth;
  p.every_k = k;
  p.validate();
  return p;
}

SplitPolicy SplitPolicy::explicit_days(std::vector<int> days) {
  SplitPolicy p;
  p.kind = Kind::ExplicitDays;
  p.holdout_days = std::move(days);
  p.validate();
  return p;
}

void SplitPolicy::validate() const {
  switch (kind) {
    case Kind::LastFraction:
      if (!(fraction >= 0.0 && fraction <= 1.0)) {
        throw std::invalid_argument("holdout fraction must lie in [0, 1]");
      }
      return;
    case Kind::EveryKth:
      if (every_k < 1) {
        throw std::invalid_argument("every_k must be at least 1");
      }
      return;
    case Kind::ExplicitDays:
      for (int d : holdout_days) {
        if (d < 1) {
          throw std::invalid_argument("holdout days must be positive");
        }
      }
      return;
  }
  throw std::invalid_argument("unknown split policy kind");
}

std::pair<ObservationSet, ObservationSet> split_observations(
    const ObservationSet& all, const SplitPolicy& policy) {
  policy.validate();
  const auto& entries = all.entries();
  std::vector<Observation> fit;
  std::vector<Observation> holdout;

  switch (policy.kind) {
    case SplitPolicy::Kind::LastFraction: {
      const auto n = static_cast<double>(entries.size());
      auto n_holdout = static_cast<std::size_t>(std::llround(n * policy.fraction));
      n_holdout = std::min(n_holdout, entries.size());
      const std::size_t n_fit = entries.size() - n_holdout;
      fit.assign(entries.begin(), entries.begin() + static_cast<long>(n_fit));
      holdout.assign(entries.begin() + static_cast<long>(n_fit), entries.end());
      break;
    }
    case SplitPolicy::Kind::EveryKth: {
      for (std::size_t i = 0; i < entries.size(); ++i) {
        if ((i + 1) % static_cast<std::size_t>(policy.every_k) == 0) {
          holdout.push_back(entries[i]);
        } else {
          fit.push_back(entries[i]);
        }
      }
      break;
    }
    case SplitPolicy::Kind::ExplicitDays: {
      for (int d : policy.holdout_days) {
        if (!all.contains_day(d)) {
          throw std::invalid_argument("requested holdout day " +
                                      std::to_string(d) +
                                      " has no observation");
        }
      }
      for (const Observation& e : entries) {
        const bool held =
            std::find(policy.holdout_days.begin(), policy.holdout_days.end(),
                      e.day) != policy.holdout_days.end();
        (held ? holdout : fit).push_back(e);
      }
      break;
    }
  }
  return {ObservationSet::from_entries(std::move(fit)),
          ObservationSet::from_entries(std::move(holdout))};
}

void Dataset::validate() const {
  require_disjoint(fit_obs, holdout_obs);
  if (fit_obs.empty() && holdout_obs.empty()) {
    throw std::domain_error("dataset carries no observations");
  }
  const int horizon = loads.days();
  if (fit_obs.max_day() > horizon || holdout_obs.max_day() > horizon) {
    throw std::domain_error("observation day outside the workload range");
  }
}

Dataset load_csv(const std::filesystem::path& path, const SplitPolicy& policy) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  return load_csv(in, path.string(), policy);
}

Dataset load_csv(std::istream& in, const std::string& origin,
                 const SplitPolicy& policy) {
  policy.validate();
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("missing header row", 1);
  }
  strip_cr(line);
  if (line != kCsvHeader) {
    throw ParseError("header must be exactly `day,load,performance`", 1);
  }

  std::vector<double> loads;
  std::vector<Observation> observations;
  int line_no = 1;
  int prev_day = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    const auto fields = split_fields(line);
    if (fields.size() != 3) {
      throw ParseError("expected 3 comma-separated fields", line_no);
    }

    const auto day = detail::parse_int<int>(fields[0]);
    if (!day || *day < 1) {
      throw ParseError("day must be a positive integer", line_no);
    }
    if (*day == prev_day) {
      throw ParseError("duplicate day " + std::to_string(*day), line_no);
    }
    if (*day < prev_day) {
      throw ParseError("days must be strictly increasing", line_no);
    }
    prev_day = *day;

    const auto load = detail::parse_double(fields[1]);
    if (!load || !std::isfinite(*load) || *load < 0.0) {
      throw ParseError("load must be a finite nonnegative number", line_no);
    }

    loads.resize(static_cast<std::size_t>(*day), 0.0);
    loads[static_cast<std::size_t>(*day) - 1] = *load;

    if (!fields[2].empty()) {
      const auto value = detail::parse_double(fields[2]);
      if (!value || !std::isfinite(*value)) {
        throw ParseError("performance must be blank or a finite number",
                         line_no);
      }
      observations.push_back({*day, *value});
    }
  }

  if (observations.empty()) {
    throw std::domain_error("no observations in " + origin);
  }
  auto [fit, holdout] =
      split_observations(ObservationSet::from_entries(std::move(observations)),
                         policy);
  Dataset dataset{WorkloadSeries(std::move(loads)), std::move(fit),
                  std::move(holdout), "csv:" + origin};
  dataset.validate();
  return dataset;
}

void save_csv(const Dataset& dataset, std::ostream& out) {
  std::vector<Observation> merged = dataset.fit_obs.entries();
  merged.insert(merged.end(), dataset.holdout_obs.entries().begin(),
                dataset.holdout_obs.entries().end());
  const ObservationSet all = ObservationSet::from_entries(std::move(merged));

  out << kCsvHeader << '\n';
  auto it = all.entries().begin();
  for (int day = 1; day <= dataset.loads.days(); ++day) {
    out << day << ',' << detail::format_double(dataset.loads.load_on(day))
        << ',';
    if (it != all.entries().end() && it->day == day) {
      out << detail::format_double(it->value);
      ++it;
    }
    out << '\n';
  }
}

void save_csv(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  save_csv(dataset, out);
  out.flush();
  if (!out) {
    throw std::runtime_error("failed writing " + path.string());
  }
}

Dataset generate_synthetic(const ModelParams& true_params,
                           const WorkloadSeries& loads,
                           const std::vector<int>& observation_days,
                           double noise_sd, std::uint64_t rng_seed,
                           const SplitPolicy& policy) {
  true_params.validate();
  if (observation_days.empty()) {
    throw std::domain_error("observation_days must not be empty");
  }
  if (!(noise_sd >= 0.0)) {
    throw std::invalid_argument("noise_sd must be nonnegative");
  }
  std::vector<int> days = observation_days;
  std::sort(days.begin(), days.end());
  if (std::adjacent_find(days.begin(), days.end()) != days.end()) {
    throw std::invalid_argument("observation_days must be unique");
  }
  if (days.front() < 1 || days.back() > loads.days()) {
    throw std::domain_error("observation days must lie within 1..T");
  }

  const std::vector<double> predictions = predict_series(true_params, loads);
  Rng rng(rng_seed);
  std::vector<Observation> observations;
  observations.reserve(days.size());
  for (int d : days) {
    double value = predictions[static_cast<std::size_t>(d) - 1];
    if (noise_sd > 0.0) value += rng.normal(0.0, noise_sd);
    observations.push_back({d, value});
  }

  auto [fit, holdout] = split_observations(
      ObservationSet::from_entries(std::move(observations)), policy);
  Dataset dataset{loads, std::move(fit), std::move(holdout),
                  "synthetic:noise_sd=" + detail::format_double(noise_sd) +
                      ",seed=" + std::to_string(rng_seed)};
  dataset.validate();
  return dataset;
}

void SyntheticSpec::validate() const {
  if (days < 1) {
    throw std::invalid_argument("days must be at least 1");
  }
  if (obs_every < 1 || obs_every > days) {
    throw std::invalid_argument("obs_every must lie in 1..days");
  }
  if (!(noise_sd >= 0.0)) {
    throw std::invalid_argument("noise_sd must be nonnegative");
  }
  if (!(load_max > 0.0)) {
    throw std::invalid_argument("load_max must be positive");
  }
  true_params.validate();
}

std::string SyntheticSpec::to_string() const {
  std::string s = "days=" + std::to_string(days);
  s += ",obs-every=" + std::to_string(obs_every);
  s += ",noise-sd=" + detail::format_double(noise_sd);
  s += ",seed=" + std::to_string(seed);
  s += ",load-max=" + detail::format_double(load_max);
  s += ",true-params=" + detail::format_double(true_params.p0);
  for (double v : {true_params.k1, true_params.k2, true_params.r1,
                   true_params.r2}) {
    s += ":" + detail::format_double(v);
  }
  return s;
}

WorkloadSeries synthetic_loads(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(derive_seed(spec.seed, kLoadStream));
  std::vector<double> loads(static_cast<std::size_t>(spec.days));
  for (double& w : loads) w = rng.uniform(0.0, spec.load_max);
  return WorkloadSeries(std::move(loads));
}

std::vector<int> synthetic_observation_days(const SyntheticSpec& spec) {
  spec.validate();
  std::vector<int> days;
  for (int d = spec.obs_every; d <= spec.days; d += spec.obs_every) {
    days.push_back(d);
  }
  return days;
}

Dataset make_synthetic_dataset(const SyntheticSpec& spec,
                               const SplitPolicy& policy) {
  spec.validate();
  Dataset dataset = generate_synthetic(
      spec.true_params, synthetic_loads(spec), synthetic_observation_days(spec),
      spec.noise_sd, derive_seed(spec.seed, kNoiseStream), policy);
  dataset.metadata = "synthetic:" + spec.to_string();
  return dataset;
}

}  // namespace irfit
