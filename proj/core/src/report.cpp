#include "irfit/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "text_util.hpp"

namespace irfit {

namespace {

constexpr const char* kRecordsHeader =
    "algorithm,trial,seed,init_p0,init_k1,init_k2,init_r1,init_r2,"
    "p0,k1,k2,r1,r2,r_squared,holdout_loss,fevals,wall_time_s,converged";

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void append_group_rows(std::string& out, const char* label,
                       const GroupSummary& g) {
  std::string row = "  ";
  row += label;
  while (row.size() < 16) row += ' ';
  out += row;
  out += fmt(g.mean);
  out += "  sd=" + fmt(g.std_dev);
  out += "  ci95=[" + fmt(g.ci_mean.first) + ", " + fmt(g.ci_mean.second) + "]";
  out += "  pct[2.5,97.5]=[" + fmt(g.percentile_interval.first) + ", " +
         fmt(g.percentile_interval.second) + "]";
  out += "\n";
}

nlohmann::json group_to_json(const GroupSummary& g) {
  return {{"mean", g.mean},
          {"std_dev", g.std_dev},
          {"ci_mean", {g.ci_mean.first, g.ci_mean.second}},
          {"percentile_interval",
           {g.percentile_interval.first, g.percentile_interval.second}},
          {"n", g.n}};
}

nlohmann::json anova_to_json(const AnovaResult& a) {
  return {{"f_statistic", a.f_statistic},
          {"df_between", a.df_between},
          {"df_within", a.df_within},
          {"p_value", a.p_value}};
}

std::string anova_line(const char* metric, const AnovaResult& a) {
  std::string out = "anova ";
  out += metric;
  out += ": F=" + fmt(a.f_statistic);
  out += "  df_between=" + std::to_string(a.df_between);
  out += "  df_within=" + std::to_string(a.df_within);
  out += "  p=" + fmt(a.p_value);
  out += "\n";
  return out;
}

// Holdout losses are NaN when the dataset has no holdout set; keep only the
// defined values so the remaining statistics stay meaningful.
std::vector<double> finite_values(const std::vector<double>& values) {
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) {
    if (std::isfinite(v)) out.push_back(v);
  }
  return out;
}

}  // namespace

BenchmarkSummary summarize_benchmark(const BenchmarkReport& report) {
  BenchmarkSummary summary;
  summary.n_trials = report.n_trials;
  summary.n_failures = static_cast<int>(report.failures.size());

  std::vector<std::vector<double>> r2_groups;
  std::vector<std::vector<double>> holdout_groups;

  for (AlgorithmId algorithm : report.algorithms) {
    std::vector<const TrialRecord*> rows;
    for (const TrialRecord& r : report.records) {
      if (r.algorithm == algorithm) rows.push_back(&r);
    }
    if (rows.size() < 2) {
      summary.skipped.push_back({algorithm, static_cast<int>(rows.size())});
      continue;
    }

    AlgorithmSummary alg;
    alg.algorithm = algorithm;
    alg.n = static_cast<int>(rows.size());
    std::vector<double> column(rows.size());
    for (int p = 0; p < ModelParams::kCount; ++p) {
      for (std::size_t i = 0; i < rows.size(); ++i) {
        column[i] = rows[i]->final_params.to_array()[static_cast<std::size_t>(p)];
      }
      alg.parameters[static_cast<std::size_t>(p)] = summarize(column);
    }
    for (std::size_t i = 0; i < rows.size(); ++i) column[i] = rows[i]->fit_r_squared;
    alg.fit_r_squared = summarize(column);
    r2_groups.push_back(column);
    for (std::size_t i = 0; i < rows.size(); ++i) column[i] = rows[i]->holdout_loss;
    const std::vector<double> holdout = finite_values(column);
    if (holdout.size() >= 2) {
      alg.holdout_loss = summarize(holdout);
      holdout_groups.push_back(holdout);
    }
    for (std::size_t i = 0; i < rows.size(); ++i) column[i] = rows[i]->wall_time_s;
    alg.wall_time_s = summarize(column);

    summary.algorithms.push_back(std::move(alg));
  }

  if (r2_groups.size() >= 2) {
    summary.anova_r_squared = one_way_anova(r2_groups);
  }
  if (holdout_groups.size() >= 2) {
    summary.anova_holdout_loss = one_way_anova(holdout_groups);
  }
  return summary;
}

void write_records_csv(std::ostream& out,
                       const std::vector<TrialRecord>& records) {
  out << kRecordsHeader << '\n';
  for (const TrialRecord& r : records) {
    out << to_string(r.algorithm) << ',' << r.trial << ',' << r.seed;
    for (double v : r.initial_params.to_array()) {
      out << ',' << detail::format_double(v);
    }
    for (double v : r.final_params.to_array()) {
      out << ',' << detail::format_double(v);
    }
    out << ',' << detail::format_double(r.fit_r_squared) << ','
        << detail::format_double(r.holdout_loss) << ','
        << r.function_evaluations << ','
        << detail::format_double(r.wall_time_s) << ','
        << (r.converged ? "true" : "false") << '\n';
  }
}

void write_records_csv(const std::filesystem::path& path,
                       const std::vector<TrialRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  write_records_csv(out, records);
  out.flush();
  if (!out) {
    throw std::runtime_error("failed writing " + path.string());
  }
}

std::vector<TrialRecord> read_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("missing header row", 1);
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kRecordsHeader) {
    throw ParseError("unexpected records header", 1);
  }

  std::vector<TrialRecord> records;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string_view> fields;
    std::string_view view = line;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = view.find(',', start);
      if (comma == std::string_view::npos) {
        fields.push_back(view.substr(start));
        break;
      }
      fields.push_back(view.substr(start, comma - start));
      start = comma + 1;
    }
    if (fields.size() != 18) {
      throw ParseError("expected 18 fields", line_no);
    }

    TrialRecord r;
    const auto algorithm = algorithm_from_string(fields[0]);
    if (!algorithm) {
      throw ParseError("unknown algorithm name", line_no);
    }
    r.algorithm = *algorithm;
    const auto trial = detail::parse_int<int>(fields[1]);
    const auto seed = detail::parse_int<std::uint64_t>(fields[2]);
    if (!trial || !seed) {
      throw ParseError("bad trial or seed", line_no);
    }
    r.trial = *trial;
    r.seed = *seed;

    std::array<double, ModelParams::kCount> init{};
    std::array<double, ModelParams::kCount> fin{};
    for (int i = 0; i < ModelParams::kCount; ++i) {
      const auto v = detail::parse_double(fields[static_cast<std::size_t>(3 + i)]);
      if (!v) throw ParseError("bad initial parameter", line_no);
      init[static_cast<std::size_t>(i)] = *v;
    }
    for (int i = 0; i < ModelParams::kCount; ++i) {
      const auto v = detail::parse_double(fields[static_cast<std::size_t>(8 + i)]);
      if (!v) throw ParseError("bad final parameter", line_no);
      fin[static_cast<std::size_t>(i)] = *v;
    }
    r.initial_params = ModelParams::from_array(init);
    r.final_params = ModelParams::from_array(fin);

    const auto r2 = detail::parse_double(fields[13]);
    const auto holdout = detail::parse_double(fields[14]);
    const auto fevals = detail::parse_int<int>(fields[15]);
    const auto wall = detail::parse_double(fields[16]);
    if (!r2 || !holdout || !fevals || !wall) {
      throw ParseError("bad metric field", line_no);
    }
    r.fit_r_squared = *r2;
    r.holdout_loss = *holdout;
    r.function_evaluations = *fevals;
    r.wall_time_s = *wall;
    if (fields[17] == "true") {
      r.converged = true;
    } else if (fields[17] == "false") {
      r.converged = false;
    } else {
      throw ParseError("converged must be true or false", line_no);
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<TrialRecord> read_records_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  return read_records_csv(in);
}

std::string render_summary_text(const BenchmarkSummary& summary) {
  std::string out = "benchmark summary\n";
  out += "trials per algorithm: " + std::to_string(summary.n_trials) + "\n";
  out += "failed trials: " + std::to_string(summary.n_failures) + "\n";

  for (const AlgorithmSummary& alg : summary.algorithms) {
    out += "\nalgorithm " + std::string(to_string(alg.algorithm)) +
           " (n=" + std::to_string(alg.n) + ")\n";
    for (int p = 0; p < ModelParams::kCount; ++p) {
      append_group_rows(out, kParamNames[static_cast<std::size_t>(p)],
                        alg.parameters[static_cast<std::size_t>(p)]);
    }
    append_group_rows(out, "r_squared", alg.fit_r_squared);
    if (alg.holdout_loss.n >= 2) {
      append_group_rows(out, "holdout_loss", alg.holdout_loss);
    } else {
      out += "  holdout_loss  not defined for this dataset\n";
    }
    append_group_rows(out, "wall_time_s", alg.wall_time_s);
  }
  for (const auto& [algorithm, n] : summary.skipped) {
    out += "\nalgorithm " + std::string(to_string(algorithm)) +
           ": only " + std::to_string(n) +
           " successful records, not summarized\n";
  }

  if (summary.anova_r_squared.has_value() ||
      summary.anova_holdout_loss.has_value()) {
    out += "\n";
    if (summary.anova_r_squared.has_value()) {
      out += anova_line("r_squared", *summary.anova_r_squared);
    }
    if (summary.anova_holdout_loss.has_value()) {
      out += anova_line("holdout_loss", *summary.anova_holdout_loss);
    }
  }
  return out;
}

std::string render_summary_json(const BenchmarkSummary& summary) {
  nlohmann::json doc;
  doc["n_trials"] = summary.n_trials;
  doc["n_failures"] = summary.n_failures;
  doc["algorithms"] = nlohmann::json::array();
  for (const AlgorithmSummary& alg : summary.algorithms) {
    nlohmann::json entry;
    entry["algorithm"] = std::string(to_string(alg.algorithm));
    entry["n"] = alg.n;
    nlohmann::json params;
    for (int p = 0; p < ModelParams::kCount; ++p) {
      params[kParamNames[static_cast<std::size_t>(p)]] =
          group_to_json(alg.parameters[static_cast<std::size_t>(p)]);
    }
    entry["parameters"] = std::move(params);
    entry["fit_r_squared"] = group_to_json(alg.fit_r_squared);
    entry["holdout_loss"] = alg.holdout_loss.n >= 2
                                ? group_to_json(alg.holdout_loss)
                                : nlohmann::json();
    entry["wall_time_s"] = group_to_json(alg.wall_time_s);
    doc["algorithms"].push_back(std::move(entry));
  }
  if (!summary.skipped.empty()) {
    nlohmann::json skipped = nlohmann::json::array();
    for (const auto& [algorithm, n] : summary.skipped) {
      skipped.push_back({{"algorithm", std::string(to_string(algorithm))},
                         {"n", n}});
    }
    doc["skipped"] = std::move(skipped);
  }
  if (summary.anova_r_squared.has_value() ||
      summary.anova_holdout_loss.has_value()) {
    nlohmann::json anova;
    if (summary.anova_r_squared.has_value()) {
      anova["r_squared"] = anova_to_json(*summary.anova_r_squared);
    }
    if (summary.anova_holdout_loss.has_value()) {
      anova["holdout_loss"] = anova_to_json(*summary.anova_holdout_loss);
    }
    doc["anova"] = std::move(anova);
  }
  return doc.dump(2) + "\n";
}

}  // namespace irfit
