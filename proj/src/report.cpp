#include "specialforms/report.hpp"

#include "json.hpp"

#include <sstream>

namespace specialforms::report {

namespace {

const char* outcome_name(CheckRecord::Outcome o) {
    switch (o) {
        case CheckRecord::Outcome::Pass: return "pass";
        case CheckRecord::Outcome::Fail: return "fail";
        case CheckRecord::Outcome::Skipped: return "skipped";
    }
    return "?";
}

}  // namespace

int Report::passed() const {
    int n = 0;
    for (const auto& c : checks) n += c.outcome == CheckRecord::Outcome::Pass;
    return n;
}
int Report::failed() const {
    int n = 0;
    for (const auto& c : checks) n += c.outcome == CheckRecord::Outcome::Fail;
    return n;
}
int Report::skipped() const {
    int n = 0;
    for (const auto& c : checks) n += c.outcome == CheckRecord::Outcome::Skipped;
    return n;
}

std::string Report::to_json(bool with_timings) const {
    nlohmann::json j;
    j["schema"] = "specialforms-report-v1";
    j["command"] = command;
    j["parameters"] = parameters;
    j["notes"] = notes;
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks) {
        nlohmann::json cj;
        cj["suite"] = c.suite;
        cj["claim"] = c.claim;
        cj["params"] = c.params;
        cj["outcome"] = outcome_name(c.outcome);
        cj["witness"] = c.witness;
        cj["seconds"] = with_timings ? c.seconds : 0.0;
        j["checks"].push_back(cj);
    }
    j["summary"] = {{"pass", passed()}, {"fail", failed()}, {"skipped", skipped()}};
    return j.dump(2);
}

std::string Report::summary() const {
    std::ostringstream os;
    for (const auto& c : checks) {
        os << "[" << outcome_name(c.outcome) << "] " << c.suite << " " << c.claim;
        if (!c.params.empty()) {
            os << " (";
            bool first = true;
            for (const auto& [k, v] : c.params) {
                os << (first ? "" : " ") << k << "=" << v;
                first = false;
            }
            os << ")";
        }
        if (!c.witness.empty()) os << " :: " << c.witness;
        os << "\n";
    }
    os << "total: " << checks.size() << "  pass: " << passed() << "  fail: " << failed()
       << "  skipped: " << skipped() << "\n";
    return os.str();
}

std::vector<std::string> standard_notes() {
    return {
        "The K'-weight (character twist by -(p-q)/2 on U-powers) is carried as "
        "metadata only and is not verified.",
        "Harmonic-decomposition degeneracies, if encountered, are reported as "
        "skipped checks with the failing space recorded.",
    };
}

}  // namespace specialforms::report
