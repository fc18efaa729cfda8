#pragma once

// Self-check suite: one group of measured checks per acceptance property.

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace berrytop {

struct CheckResult {
    int criterion = 0;
    std::string name;
    bool passed = false;
    nlohmann::json measured;
    nlohmann::json expected;
    double tolerance = 0.0;
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckResult> checks;

    bool passed() const;
    bool criterion_passed(int criterion) const;
    nlohmann::json to_json() const;
};

struct SuiteInfo {
    std::string name;
    int criterion;
    std::string title;
};

/// Suites in criterion order; "all" runs every one of them.
const std::vector<SuiteInfo>& verify_suites();

/// Throws InvalidArgument for an unknown suite name.
VerifyReport run_verify(std::string_view suite, unsigned threads = 0);

}  // namespace berrytop
