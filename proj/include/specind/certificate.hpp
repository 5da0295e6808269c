#pragma once

#include <string>
#include <vector>

namespace specind {

enum class CertStatus { pass, fail, skip, inapplicable };

const char* to_string(CertStatus s);

// Pass/fail record for one verified inequality on one instance.
struct Certificate {
    std::string id;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0; // rhs - lhs
    double tolerance = 0.0;
    CertStatus status = CertStatus::skip;
    std::string provenance; // "exact" or "monte-carlo"
    std::string instance;   // instance digest
    std::string note;

    static Certificate make(std::string id, double lhs, double rhs, double tol,
                            std::string provenance, std::string instance,
                            std::string note = "");
};

} // namespace specind
