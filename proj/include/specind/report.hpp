#pragma once

#include <json.hpp>
#include <string>

#include "specind/certificate.hpp"

namespace specind {

// Insertion-ordered JSON keeps emitted reports byte-stable.
using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";

// Canonical serialization (keys sorted recursively) and its FNV-1a digest;
// stable under key reordering of the input.
std::string canonical_dump(const Json& j);
std::string json_digest(const Json& j);

Json certificate_to_json(const Certificate& c);

struct ReportRecord {
    std::string schema_version = kSchemaVersion;
    std::string timestamp; // empty by default so reports are byte-deterministic
    Json config;
    std::string config_digest;
    Json payload;
    int exit_status = 0;

    Json to_json() const;
    static ReportRecord from_json(const Json& j);
};

ReportRecord make_record(const Json& config, Json payload, int exit_status);

void write_text_file(const std::string& path, const std::string& content);

// CSV with a fixed header; every row must match the column count.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

} // namespace specind
