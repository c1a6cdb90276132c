#include "kframe/cli/report.hpp"

#include <cerrno>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace kframe::cli {

ReportFormat parse_format(const std::string& name) {
    if (name == "json") {
        return ReportFormat::Json;
    }
    if (name == "text") {
        return ReportFormat::Text;
    }
    throw UsageError("unknown report format \"" + name + "\" (expected json or text)");
}

Json report_to_json(const SuiteReport& r) {
    Json doc;
    doc["version"] = r.version;
    doc["scenario_echo"] = r.scenario_echo;
    Json props = Json::array();
    for (const PropertyRecord& p : r.properties) {
        Json rec;
        rec["id"] = p.id;
        rec["instances"] = p.instances;
        rec["max_residual"] = p.max_residual;
        rec["tolerance"] = p.tolerance;
        rec["pass"] = p.pass;
        if (p.witness) {
            rec["witness"] = *p.witness;
        }
        if (p.error) {
            rec["error"] = *p.error;
        }
        if (!p.details.empty()) {
            Json details = Json::object();
            for (const auto& [key, count] : p.details) {
                details[key] = count;
            }
            rec["details"] = std::move(details);
        }
        props.push_back(std::move(rec));
    }
    doc["properties"] = std::move(props);
    doc["toolchain"] = r.toolchain;
    doc["wall_time_ms"] = r.wall_time_ms;
    return doc;
}

SuiteReport report_from_json(const Json& doc) {
    SuiteReport r;
    r.version = doc.at("version").get<std::string>();
    r.scenario_echo = doc.at("scenario_echo");
    for (const Json& rec : doc.at("properties")) {
        PropertyRecord p;
        p.id = rec.at("id").get<std::string>();
        p.instances = rec.at("instances").get<std::size_t>();
        p.max_residual = rec.at("max_residual").get<double>();
        p.tolerance = rec.at("tolerance").get<double>();
        p.pass = rec.at("pass").get<bool>();
        if (rec.contains("witness")) {
            p.witness = rec.at("witness");
        }
        if (rec.contains("error")) {
            p.error = rec.at("error").get<std::string>();
        }
        if (rec.contains("details")) {
            for (auto it = rec.at("details").begin(); it != rec.at("details").end(); ++it) {
                p.details[it.key()] = it.value().get<std::int64_t>();
            }
        }
        r.properties.push_back(std::move(p));
    }
    if (doc.contains("toolchain")) {
        r.toolchain = doc.at("toolchain");
    }
    r.wall_time_ms = doc.value("wall_time_ms", 0.0);
    return r;
}

std::string format_text(const SuiteReport& r) {
    std::ostringstream os;
    os << std::left << std::setw(22) << "property" << std::setw(11) << "instances"
       << std::setw(14) << "max_residual" << std::setw(12) << "tolerance" << "verdict\n";
    for (const PropertyRecord& p : r.properties) {
        os << std::left << std::setw(22) << p.id << std::setw(11) << p.instances
           << std::setw(14) << std::setprecision(3) << std::scientific << p.max_residual
           << std::setw(12) << p.tolerance << std::defaultfloat << (p.pass ? "PASS" : "FAIL");
        if (p.witness) {
            os << "  (witness trial " << p.witness->at("trial_index").get<std::uint64_t>() << ")";
        }
        os << '\n';
        if (p.error) {
            os << "    error: " << *p.error << '\n';
        }
        for (const auto& [key, count] : p.details) {
            os << "    " << key << ": " << count << '\n';
        }
    }
    std::size_t passed = 0;
    for (const PropertyRecord& p : r.properties) {
        passed += p.pass ? 1 : 0;
    }
    os << passed << "/" << r.properties.size() << " properties passed in " << std::fixed
       << std::setprecision(1) << r.wall_time_ms << " ms\n";
    return os.str();
}

std::string render_report(const SuiteReport& r, ReportFormat format) {
    if (format == ReportFormat::Json) {
        return report_to_json(r).dump(2) + "\n";
    }
    return format_text(r);
}

void emit_report(const SuiteReport& r, const std::filesystem::path& path, ReportFormat format) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write report to " + path.string() + ": " +
                                 std::strerror(errno));
    }
    out << render_report(r, format);
    out.flush();
    if (!out) {
        throw std::runtime_error("failed writing report to " + path.string() + ": " +
                                 std::strerror(errno));
    }
}

} // namespace kframe::cli
