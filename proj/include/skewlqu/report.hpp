#pragma once

// Report files for verification runs.
//
//   json-lines  one JSON object per record
//   csv         header row, then one row per record
//   summary     <path>.summary, flat key=value lines with the report fields
//
// Record fields are always written in TrialRecord declaration order, with
// doubles at 17 significant digits.

#include <filesystem>
#include <string>
#include <vector>

#include "skewlqu/verify.hpp"

namespace skewlqu {

enum class ReportFormat { JsonLines, Csv };

ReportFormat parse_report_format(const std::string& name);

struct ReportOptions {
  /// Wall times vary between runs; when false they are written as 0 so that
  /// reports stay byte-identical for a fixed seed.
  bool include_timing = false;
};

/// Writes `records` to `path` and the summary to `path` + ".summary". Throws IoError.
void write_report(const VerificationReport& report, const std::vector<TrialRecord>& records,
                  const std::filesystem::path& path, ReportFormat format, const ReportOptions& opts = {});

std::vector<TrialRecord> read_records(const std::filesystem::path& path, ReportFormat format);

std::string format_record(const TrialRecord& record, ReportFormat format, const ReportOptions& opts = {});
std::string csv_header();
std::string format_summary(const VerificationReport& report);

std::filesystem::path summary_path(const std::filesystem::path& path);

}  // namespace skewlqu
