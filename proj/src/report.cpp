#include "skewlqu/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace skewlqu {

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// JSON has no inf/nan literals.
std::string json_number(double v) { return std::isfinite(v) ? g17(v) : "null"; }

double json_double(const nlohmann::json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

[[noreturn]] void parse_fail(const std::filesystem::path& path, std::size_t line, const std::string& why) {
  throw Error(ErrorKind::ParseError, path.string() + ":" + std::to_string(line) + ": " + why);
}

}  // namespace

ReportFormat parse_report_format(const std::string& name) {
  if (name == "json" || name == "jsonl" || name == "json-lines") return ReportFormat::JsonLines;
  if (name == "csv") return ReportFormat::Csv;
  throw Error(ErrorKind::UsageError, "unknown report format '" + name + "' (expected json or csv)");
}

std::string csv_header() {
  return "trial_index,seed_tuple,n_a,n_b,claim_id,lhs,rhs,margin,violated,wall_time_ms,error";
}

std::string format_record(const TrialRecord& r, ReportFormat format, const ReportOptions& opts) {
  const double wall = opts.include_timing ? r.wall_time_ms : 0.0;
  std::string out;
  if (format == ReportFormat::Csv) {
    out += std::to_string(r.trial_index) + ',';
    out += std::to_string(r.master_seed) + ':' + std::to_string(r.trial_index) + ',';
    out += std::to_string(r.n_a) + ',' + std::to_string(r.n_b) + ',';
    out += r.claim_id + ',';
    out += g17(r.lhs) + ',' + g17(r.rhs) + ',' + g17(r.margin) + ',';
    out += std::string(r.violated ? "true" : "false") + ',';
    out += g17(wall) + ',';
    out += r.error;
    return out;
  }
  out += "{\"trial_index\":" + std::to_string(r.trial_index);
  out += ",\"seed_tuple\":[" + std::to_string(r.master_seed) + ',' + std::to_string(r.trial_index) + ']';
  out += ",\"n_a\":" + std::to_string(r.n_a) + ",\"n_b\":" + std::to_string(r.n_b);
  out += ",\"claim_id\":" + nlohmann::json(r.claim_id).dump();
  out += ",\"lhs\":" + json_number(r.lhs);
  out += ",\"rhs\":" + json_number(r.rhs);
  out += ",\"margin\":" + json_number(r.margin);
  out += std::string(",\"violated\":") + (r.violated ? "true" : "false");
  out += ",\"wall_time_ms\":" + json_number(wall);
  out += ",\"error\":" + nlohmann::json(r.error).dump() + '}';
  return out;
}

std::string format_summary(const VerificationReport& report) {
  const auto& c = report.config;
  std::ostringstream out;
  out << "claim_id=" << report.claim_id << '\n'
      << "trials=" << report.trials << '\n'
      << "checks=" << report.checks << '\n'
      << "violations=" << report.violations << '\n'
      << "failed=" << report.failed << '\n'
      << "min_margin=" << g17(report.min_margin) << '\n'
      << "n_a=" << c.n_a << '\n'
      << "n_b=" << c.n_b << '\n'
      << "tol=" << g17(c.tol) << '\n'
      << "master_seed=" << c.master_seed << '\n'
      << "restarts=" << c.restarts << '\n'
      << "opt_tol=" << g17(c.opt_tol) << '\n'
      << "max_iters=" << c.max_iters << '\n'
      << "kraus_count=" << c.kraus_count << '\n'
      << "bases_per_trial=" << c.bases_per_trial << '\n'
      << "mode=" << to_string(c.mode) << '\n';
  return out.str();
}

std::filesystem::path summary_path(const std::filesystem::path& path) {
  auto p = path;
  p += ".summary";
  return p;
}

void write_report(const VerificationReport& report, const std::vector<TrialRecord>& records,
                  const std::filesystem::path& path, ReportFormat format, const ReportOptions& opts) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  if (format == ReportFormat::Csv) out << csv_header() << '\n';
  for (const auto& r : records) out << format_record(r, format, opts) << '\n';
  out.flush();
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());

  std::ofstream summary(summary_path(path), std::ios::binary | std::ios::trunc);
  if (!summary) throw Error(ErrorKind::IoError, "cannot open " + summary_path(path).string() + " for writing");
  summary << format_summary(report);
  summary.flush();
  if (!summary) throw Error(ErrorKind::IoError, "write failed for " + summary_path(path).string());
}

std::vector<TrialRecord> read_records(const std::filesystem::path& path, ReportFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::vector<TrialRecord> records;
  std::string line;
  std::size_t line_no = 0;
  if (format == ReportFormat::Csv) {
    if (!std::getline(in, line) || line != csv_header()) parse_fail(path, 1, "missing or unexpected csv header");
    ++line_no;
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    TrialRecord r;
    try {
      if (format == ReportFormat::Csv) {
        const auto f = split(line, ',');
        if (f.size() != 11) parse_fail(path, line_no, "expected 11 fields, got " + std::to_string(f.size()));
        r.trial_index = std::stoull(f[0]);
        const auto seed = split(f[1], ':');
        if (seed.size() != 2) parse_fail(path, line_no, "bad seed tuple");
        r.master_seed = std::stoull(seed[0]);
        r.n_a = std::stol(f[2]);
        r.n_b = std::stol(f[3]);
        r.claim_id = f[4];
        r.lhs = std::stod(f[5]);
        r.rhs = std::stod(f[6]);
        r.margin = std::stod(f[7]);
        if (f[8] != "true" && f[8] != "false") parse_fail(path, line_no, "bad violated flag");
        r.violated = f[8] == "true";
        r.wall_time_ms = std::stod(f[9]);
        r.error = f[10];
      } else {
        const auto j = nlohmann::json::parse(line);
        r.trial_index = j.at("trial_index").get<std::uint64_t>();
        r.master_seed = j.at("seed_tuple").at(0).get<std::uint64_t>();
        r.n_a = j.at("n_a").get<Eigen::Index>();
        r.n_b = j.at("n_b").get<Eigen::Index>();
        r.claim_id = j.at("claim_id").get<std::string>();
        r.lhs = json_double(j.at("lhs"));
        r.rhs = json_double(j.at("rhs"));
        r.margin = json_double(j.at("margin"));
        r.violated = j.at("violated").get<bool>();
        r.wall_time_ms = json_double(j.at("wall_time_ms"));
        r.error = j.at("error").get<std::string>();
      }
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      parse_fail(path, line_no, e.what());
    }
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace skewlqu
