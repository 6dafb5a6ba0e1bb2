#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ptsym {

/// One entry of the verification battery.
struct CriterionResult {
    int index = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Run the full battery. The seed only drives the randomized cross-checks
/// (random transpose-symmetric models, random states); every tolerance is
/// fixed in code. When `log` is given, one PASS/FAIL line per criterion is
/// printed as it completes.
std::vector<CriterionResult> run_acceptance(std::uint64_t seed,
                                            std::ostream* log = nullptr);

bool all_passed(const std::vector<CriterionResult>& results);

} // namespace ptsym
