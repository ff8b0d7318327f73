#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace casorati::cli {

enum class CheckStatus { Pass, Fail, NotApplicable };

struct CheckRow {
    std::string name;
    CheckStatus status;
    double residual;
    double tolerance;
};

/// Table of verification results; overall failure iff any row failed.
struct VerifySummary {
    std::vector<CheckRow> rows;
    int points = 0;
    bool failed() const {
        for (const auto& r : rows)
            if (r.status == CheckStatus::Fail) return true;
        return false;
    }
};

/// Exit codes: 0 success, 1 failed checks or runtime error, 2 expression/file parse
/// error, 3 rank-deficient immersion, 4 requested check not applicable.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace casorati::cli
