#ifndef MDAG_CATALOG_HPP
#define MDAG_CATALOG_HPP

#include <string>
#include <vector>

#include "mdag/validity.hpp"

namespace mdag::catalog {

/// Expected analysis results for a scenario, used as the regression corpus.
struct ScenarioExpected {
    std::vector<std::string> phi;  // sorted variable names
    VerdictStatus cra = VerdictStatus::unbiased;
    VerdictStatus full_mi = VerdictStatus::unbiased;
    bool warning = false;
    /// Spot checks evaluated directly through subsample_verdict (the Q set
    /// need not be eligible).
    std::vector<std::pair<std::vector<std::string>, VerdictStatus>> subsample;
    /// The exact ranked list of Q sets that enumeration reports unbiased.
    std::vector<std::vector<std::string>> unbiased_qs;
};

struct Scenario {
    std::string id;
    std::string document;  // embedded .mdag text
    std::string note;
    ScenarioExpected expected;
    bool simulable = false;  // has a built-in data-generating process

    MDag graph() const;
};

const Scenario& get(const std::string& id);
std::vector<std::string> list();

}  // namespace mdag::catalog

#endif
