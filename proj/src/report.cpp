#include "specind/report.hpp"

#include <fstream>
#include <sstream>

namespace specind {

namespace {

nlohmann::json sort_keys(const Json& j) {
    // nlohmann::json (non-ordered) stores objects sorted by key
    return nlohmann::json::parse(j.dump());
}

} // namespace

std::string canonical_dump(const Json& j) { return sort_keys(j).dump(); }

std::string json_digest(const Json& j) {
    std::string s = canonical_dump(j);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

Json certificate_to_json(const Certificate& c) {
    Json j;
    j["inequality_id"] = c.id;
    j["lhs"] = c.lhs;
    j["rhs"] = c.rhs;
    j["slack"] = c.slack;
    j["tolerance"] = c.tolerance;
    j["pass"] = c.status == CertStatus::pass;
    j["status"] = to_string(c.status);
    j["provenance"] = c.provenance;
    j["instance_digest"] = c.instance;
    if (!c.note.empty()) j["note"] = c.note;
    return j;
}

Json ReportRecord::to_json() const {
    Json j;
    j["schema_version"] = schema_version;
    j["timestamp"] = timestamp;
    j["config"] = config;
    j["config_digest"] = config_digest;
    j["payload"] = payload;
    j["exit_status"] = exit_status;
    return j;
}

ReportRecord ReportRecord::from_json(const Json& j) {
    ReportRecord r;
    r.schema_version = j.at("schema_version").get<std::string>();
    r.timestamp = j.at("timestamp").get<std::string>();
    r.config = j.at("config");
    r.config_digest = j.at("config_digest").get<std::string>();
    r.payload = j.at("payload");
    r.exit_status = j.at("exit_status").get<int>();
    return r;
}

ReportRecord make_record(const Json& config, Json payload, int exit_status) {
    ReportRecord r;
    r.config = config;
    r.config_digest = json_digest(config);
    r.payload = std::move(payload);
    r.exit_status = exit_status;
    const char* stamp = std::getenv("SPECIND_TIMESTAMP");
    if (stamp) r.timestamp = stamp;
    return r;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream os;
    for (size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << "\n";
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw std::invalid_argument("write_csv: row width does not match header");
        for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << "\n";
    }
    write_text_file(path, os.str());
}

} // namespace specind
