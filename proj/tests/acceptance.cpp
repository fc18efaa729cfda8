// One PASS/FAIL line per acceptance criterion, with the failing measurements underneath.

#include "berrytop/verify.hpp"

#include <cstdio>
#include <string>

int main() {
    using namespace berrytop;
    int failed = 0;
    for (const SuiteInfo& suite : verify_suites()) {
        const VerifyReport report = run_verify(suite.name);
        const bool ok = report.criterion_passed(suite.criterion);
        std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", suite.criterion, suite.title.c_str());
        for (const CheckResult& c : report.checks) {
            if (c.passed) continue;
            std::printf("    %s: measured %s, expected %s\n", c.name.c_str(), c.measured.dump().c_str(),
                        c.expected.dump().c_str());
            if (!c.detail.empty()) std::printf("    note: %s\n", c.detail.c_str());
        }
        failed += ok ? 0 : 1;
    }
    std::printf("%d of %zu criteria failed\n", failed, verify_suites().size());
    return failed == 0 ? 0 : 1;
}
