#pragma once

// Invariant suite behind `rgs validate`. Every check is deterministic for a fixed
// seed and thread count.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace rgs {

struct CheckResult
{
    std::string module;
    std::string name;
    double value{0.0};
    double bound{0.0};
    bool pass{false};
    std::string note;
};

struct ValidateOptions
{
    std::uint64_t seed{1};
};

std::vector<CheckResult> run_validation(const ValidateOptions& options = {});

/// Fixed-width table, values in %.3e.
void print_check_table(std::ostream& os, const std::vector<CheckResult>& results);

bool all_passed(const std::vector<CheckResult>& results);

} // namespace rgs
