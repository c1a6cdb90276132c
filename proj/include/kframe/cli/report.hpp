#pragma once

#include <filesystem>
#include <string>

#include "kframe/cli/suite.hpp"

namespace kframe::cli {

enum class ReportFormat { Json, Text };

ReportFormat parse_format(const std::string& name);

/// {version, scenario_echo, properties: [{id, instances, max_residual, tolerance,
/// pass, witness?, error?, details?}], toolchain, wall_time_ms}, keys in this order.
Json report_to_json(const SuiteReport& r);
SuiteReport report_from_json(const Json& doc);

std::string format_text(const SuiteReport& r);
std::string render_report(const SuiteReport& r, ReportFormat format);

/// Writes the report; throws std::runtime_error naming the path and OS error.
void emit_report(const SuiteReport& r, const std::filesystem::path& path, ReportFormat format);

} // namespace kframe::cli
