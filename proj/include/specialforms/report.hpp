#pragma once

#include <map>
#include <string>
#include <vector>

namespace specialforms::report {

struct CheckRecord {
    std::string suite;
    std::string claim;  // claim identifier (anchor string)
    std::map<std::string, std::string> params;
    enum class Outcome { Pass, Fail, Skipped } outcome = Outcome::Pass;
    std::string witness;  // first differing term, certificate, or skip reason
    double seconds = 0.0;
};

struct Report {
    std::string command;
    std::map<std::string, std::string> parameters;
    std::vector<std::string> notes;
    std::vector<CheckRecord> checks;

    int passed() const;
    int failed() const;
    int skipped() const;

    /// Machine-readable JSON rendering (schema "specialforms-report-v1").
    std::string to_json(bool with_timings = true) const;
    /// Human-readable summary, one line per check plus totals.
    std::string summary() const;
};

/// Fixed notes attached to every report.
std::vector<std::string> standard_notes();

}  // namespace specialforms::report
