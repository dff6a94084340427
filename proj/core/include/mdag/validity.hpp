#ifndef MDAG_VALIDITY_HPP
#define MDAG_VALIDITY_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "mdag/dsep.hpp"
#include "mdag/graph.hpp"

namespace mdag {

enum class VerdictStatus { unbiased, possibly_biased };

std::string to_string(VerdictStatus s);

/// Structured explanation attached to a verdict. Path-based reasons carry at
/// least one witness. Informational reasons do not affect the status.
struct Reason {
    std::string code;
    std::string detail;
    std::vector<PathWitness> witnesses;
    bool informational = false;
};

struct Verdict {
    VerdictStatus status = VerdictStatus::unbiased;
    std::vector<Reason> reasons;

    bool unbiased() const { return status == VerdictStatus::unbiased; }
    std::vector<PathWitness> all_witnesses() const;
};

/// The MNAR-inducing measured incomplete variables: those d-connected to some
/// response indicator given the complete variables.
struct Phi {
    std::vector<NodeId> members;  // id-sorted

    bool empty() const { return members.empty(); }
};

/// Partition of the measured incomplete variables: Q restricted-to-observed,
/// P imputed within the subsample.
struct SubsampleSpec {
    std::vector<NodeId> q;  // id-sorted
    std::vector<NodeId> p;  // id-sorted
};

struct SubsampleOption {
    SubsampleSpec spec;
    Verdict verdict;
    std::vector<std::string> annotations;
};

struct SelfMissWarning {
    bool flag = false;
    std::string pattern;
};

struct StrategyReport {
    Verdict cra;
    Verdict full_mi;
    Phi phi;
    SelfMissWarning warning;
    std::vector<NodeId> eligible_q;
    std::vector<SubsampleOption> options;  // ranked
    bool enumeration_skipped = false;      // variable count above the limit
    std::vector<std::string> notes;

    /// True when CRA, full-sample MI, or any subsample option is unbiased.
    bool any_unbiased_strategy() const;
};

Phi compute_phi(const MDag& g);

/// Unbiased iff Phi is empty; otherwise one witness per Phi member.
Verdict full_mi_verdict(const MDag& g);

/// Complete-records analysis: unbiased iff the outcome is d-separated from
/// the indicators of incomplete analysis-model variables given exposure and
/// covariates (auxiliaries excluded).
Verdict cra_verdict(const MDag& g);

/// Measured incomplete variables J whose indicator is independent of the
/// outcome given the analysis-model variables. Auxiliaries are not
/// conditioned on: they are not in the analysis model.
std::vector<NodeId> eligible_q(const MDag& g);

/// Little-Zhang evaluation of one partition: (1) inclusion must not depend
/// on the outcome given exposure and covariates; (2) the variables imputed
/// within the subsample must be d-separated from their indicators given the
/// complete variables, Q, and the indicators of Q. When P carries no
/// analysis-model variable the estimate coincides with a complete-records
/// fit on the Q-restricted rows, so only check (1) decides the status and
/// the option is annotated cra_equivalent.
SubsampleOption subsample_verdict(const MDag& g, const std::vector<NodeId>& q);

/// Evaluates every subset of eligible_q (other Q sets fail check (1) by
/// construction). Unbiased options first, ascending |Q|, ties broken by
/// variable names; an empty Q is the full-sample MI option.
std::vector<SubsampleOption> enumerate_subsamples(const MDag& g,
                                                  std::size_t max_incomplete = 16);

/// Advisory check for the two patterns that typically defeat every strategy:
/// the outcome causing its own missingness, or an unmeasured common cause of
/// the outcome and its missingness. Deliberately does not fire on general
/// d-connection (an incomplete exposure causing outcome missingness still
/// admits subsample options).
SelfMissWarning y_self_missingness_warning(const MDag& g);

/// Full report: CRA, full-sample MI, the warning, eligible Q variables, and
/// the ranked subsample options. Pure function of the graph.
StrategyReport analyze(const MDag& g);

}  // namespace mdag

#endif
