#pragma once

#include "specialforms/report.hpp"

#include <optional>
#include <vector>

namespace specialforms::verify {

struct Options {
    int max_degree = 2;   // cap on l' and |lambda|
    int workers = 0;      // 0 = library default
    int precision = 53;   // >53 re-verifies theta certificates in long double
    // Optional restrictions of the sweeps to fixed parameters.
    std::optional<int> p, q, n, ell;
    std::optional<std::vector<int>> lambda;
};

/// One suite each; every function returns its records in a deterministic
/// order regardless of the worker count.
std::vector<report::CheckRecord> run_closedness(const Options& opt);   // + intertwiner
std::vector<report::CheckRecord> run_restriction(const Options& opt);  // + vanishing range
std::vector<report::CheckRecord> run_product(const Options& opt);
std::vector<report::CheckRecord> run_tableaux(const Options& opt);     // + dimension audit
std::vector<report::CheckRecord> run_hermite(const Options& opt);
std::vector<report::CheckRecord> run_nilpotent(const Options& opt);
std::vector<report::CheckRecord> run_theta(const Options& opt);

std::vector<report::CheckRecord> run_all(const Options& opt);

}  // namespace specialforms::verify
