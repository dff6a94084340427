#include "mdag/validity.hpp"

#include <algorithm>
#include <sstream>

namespace mdag {

std::string to_string(VerdictStatus s) {
    return s == VerdictStatus::unbiased ? "unbiased" : "possibly_biased";
}

std::vector<PathWitness> Verdict::all_witnesses() const {
    std::vector<PathWitness> out;
    for (const auto& r : reasons) {
        out.insert(out.end(), r.witnesses.begin(), r.witnesses.end());
    }
    return out;
}

bool StrategyReport::any_unbiased_strategy() const {
    if (cra.unbiased() || full_mi.unbiased()) return true;
    for (const auto& opt : options) {
        if (opt.verdict.unbiased()) return true;
    }
    return false;
}

namespace {

std::vector<NodeId> indicators_of(const MDag& g, const std::vector<NodeId>& vars) {
    std::vector<NodeId> out;
    for (NodeId v : vars) {
        if (auto r = g.indicator_of(v)) out.push_back(*r);
    }
    return sorted_unique(std::move(out));
}

// Exposure plus covariates: the conditioning set of Little-Zhang condition 2.
std::vector<NodeId> analysis_conditioning(const MDag& g) {
    std::vector<NodeId> out{g.exposure()};
    out.insert(out.end(), g.covariates().begin(), g.covariates().end());
    return sorted_unique(std::move(out));
}

std::string join_names(const MDag& g, const std::vector<NodeId>& v) {
    std::ostringstream out;
    auto sorted = by_display_name(g, v);
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i > 0) out << ", ";
        out << g.display_name(sorted[i]);
    }
    return out.str();
}

}  // namespace

Phi compute_phi(const MDag& g) {
    const std::vector<NodeId> z = g.complete_substantive();
    const std::vector<NodeId> indicators = g.response_indicators();
    Phi phi;
    if (indicators.empty()) return phi;
    for (NodeId v : g.measured_incomplete()) {
        if (!d_separated(g, {v}, indicators, z)) phi.members.push_back(v);
    }
    return phi;
}

Verdict full_mi_verdict(const MDag& g) {
    Phi phi = compute_phi(g);
    Verdict verdict;
    if (phi.empty()) return verdict;
    verdict.status = VerdictStatus::possibly_biased;
    const std::vector<NodeId> z = g.complete_substantive();
    const std::vector<NodeId> indicators = g.response_indicators();
    Reason reason;
    reason.code = "phi_nonempty";
    reason.detail = "Phi = {" + join_names(g, phi.members) + "}";
    for (NodeId v : phi.members) {
        if (auto w = shortest_open_path(g, {v}, indicators, z)) {
            reason.witnesses.push_back(std::move(*w));
        }
    }
    verdict.reasons.push_back(std::move(reason));
    return verdict;
}

Verdict cra_verdict(const MDag& g) {
    std::vector<NodeId> incomplete_analysis;
    for (NodeId v : g.analysis_model_variables()) {
        if (g.status(v) == VariableStatus::incomplete) incomplete_analysis.push_back(v);
    }
    const std::vector<NodeId> s = indicators_of(g, incomplete_analysis);
    const std::vector<NodeId> cond = analysis_conditioning(g);
    Verdict verdict;
    if (s.empty() || d_separated(g, {g.outcome()}, s, cond)) return verdict;
    verdict.status = VerdictStatus::possibly_biased;
    Reason reason;
    reason.code = "outcome_dconnected_to_missingness";
    reason.detail = "outcome " + g.display_name(g.outcome()) +
                    " is d-connected to an analysis-model response indicator given {" +
                    join_names(g, cond) + "}";
    if (auto w = shortest_open_path(g, {g.outcome()}, s, cond)) {
        reason.witnesses.push_back(std::move(*w));
    }
    verdict.reasons.push_back(std::move(reason));
    return verdict;
}

std::vector<NodeId> eligible_q(const MDag& g) {
    const std::vector<NodeId> cond = analysis_conditioning(g);
    std::vector<NodeId> out;
    for (NodeId j : g.measured_incomplete()) {
        NodeId rj = *g.indicator_of(j);
        if (d_separated(g, {g.outcome()}, {rj}, cond)) out.push_back(j);
    }
    return out;
}

SubsampleOption subsample_verdict(const MDag& g, const std::vector<NodeId>& q_in) {
    const std::vector<NodeId> measured = g.measured_incomplete();
    std::vector<NodeId> q = sorted_unique(q_in);
    for (NodeId v : q) {
        if (g.is_indicator(v) || g.status(v) != VariableStatus::incomplete) {
            throw GraphError("Q may contain only measured incomplete variables; '" +
                             g.display_name(v) + "' is not one");
        }
    }

    SubsampleOption opt;
    opt.spec.q = q;
    opt.spec.p = set_difference(measured, q);

    const std::vector<NodeId> cond = analysis_conditioning(g);
    const NodeId y = g.outcome();

    // Check (1): inclusion in the subsample must not depend on the outcome
    // given the analysis-model variables.
    bool check1_ok = true;
    std::vector<Reason> check1_reasons;
    for (NodeId j : q) {
        NodeId rj = *g.indicator_of(j);
        if (d_separated(g, {y}, {rj}, cond)) continue;
        check1_ok = false;
        Reason reason;
        reason.code = "inclusion_depends_on_outcome";
        reason.detail = "R[" + g.display_name(j) + "] is d-connected to " +
                        g.display_name(y) + " given {" + join_names(g, cond) + "}";
        if (auto w = shortest_open_path(g, {y}, {rj}, cond)) {
            reason.witnesses.push_back(std::move(*w));
        }
        check1_reasons.push_back(std::move(reason));
    }

    // Check (2): z-MAR within the subsample. Conditioning set is the complete
    // variables, Q, and the indicators of Q (constant 1 in the subsample).
    std::vector<NodeId> c = set_union(g.complete_substantive(), q);
    c = set_union(c, indicators_of(g, q));
    bool check2_ok = true;
    std::vector<Reason> check2_reasons;
    for (NodeId v : opt.spec.p) {
        for (NodeId k : opt.spec.p) {
            NodeId rk = *g.indicator_of(k);
            if (d_separated(g, {v}, {rk}, c)) continue;
            check2_ok = false;
            Reason reason;
            reason.code = "subsample_not_zmar";
            reason.detail = g.display_name(v) + " is d-connected to R[" + g.display_name(k) +
                            "] given {" + join_names(g, c) + "}";
            if (auto w = shortest_open_path(g, {v}, {rk}, c)) {
                reason.witnesses.push_back(std::move(*w));
            }
            check2_reasons.push_back(std::move(reason));
        }
    }

    const std::vector<NodeId> p_analysis =
        set_intersection(opt.spec.p, g.analysis_model_variables());

    bool cra_equivalent = !q.empty() && p_analysis.empty();
    if (cra_equivalent) {
        // Nothing imputed enters the analysis model: the pooled estimate is
        // the complete-records fit on the Q-restricted rows, so only the
        // inclusion check decides the status.
        opt.verdict.status = check1_ok ? VerdictStatus::unbiased : VerdictStatus::possibly_biased;
        opt.verdict.reasons = std::move(check1_reasons);
        if (!check2_ok) {
            Reason info;
            info.code = "auxiliary_imputation_not_zmar";
            info.detail =
                "imputed auxiliaries are not z-MAR within this subsample; they do not "
                "enter the analysis model, so the target estimate is unaffected";
            for (auto& r : check2_reasons) {
                for (auto& w : r.witnesses) info.witnesses.push_back(std::move(w));
            }
            info.informational = true;
            opt.verdict.reasons.push_back(std::move(info));
        }
        opt.annotations.push_back("cra_equivalent");
    } else {
        opt.verdict.status = (check1_ok && check2_ok) ? VerdictStatus::unbiased
                                                      : VerdictStatus::possibly_biased;
        opt.verdict.reasons = std::move(check1_reasons);
        for (auto& r : check2_reasons) opt.verdict.reasons.push_back(std::move(r));
    }

    if (opt.spec.p.size() == 1 && opt.spec.p[0] == y && g.auxiliaries().empty()) {
        opt.annotations.push_back("no_efficiency_gain_vs_cra");
    }

    // The paper states the inclusion condition a second way ("conditional on
    // complete variables and variables in Q"); flag any Q where the two
    // phrasings disagree.
    const std::vector<NodeId> alt_cond = set_union(g.complete_substantive(), q);
    for (NodeId j : q) {
        NodeId rj = *g.indicator_of(j);
        if (d_separated(g, {y}, {rj}, cond) != d_separated(g, {y}, {rj}, alt_cond)) {
            opt.annotations.push_back("condition2_phrasings_disagree");
            break;
        }
    }
    return opt;
}

std::vector<SubsampleOption> enumerate_subsamples(const MDag& g, std::size_t max_incomplete) {
    const std::vector<NodeId> measured = g.measured_incomplete();
    if (measured.size() > max_incomplete) {
        throw GraphError("enumeration limit exceeded: " + std::to_string(measured.size()) +
                         " measured incomplete variables (limit " +
                         std::to_string(max_incomplete) + "); supply an explicit Q");
    }
    const std::vector<NodeId> elig = eligible_q(g);
    std::vector<SubsampleOption> options;
    const std::size_t n = elig.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        std::vector<NodeId> q;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (std::size_t{1} << i)) q.push_back(elig[i]);
        }
        options.push_back(subsample_verdict(g, q));
    }
    auto name_key = [&g](const SubsampleSpec& s) {
        std::vector<std::string> names;
        for (NodeId v : s.q) names.push_back(g.display_name(v));
        std::sort(names.begin(), names.end());
        return names;
    };
    std::stable_sort(options.begin(), options.end(),
                     [&](const SubsampleOption& a, const SubsampleOption& b) {
                         if (a.verdict.unbiased() != b.verdict.unbiased()) {
                             return a.verdict.unbiased();
                         }
                         if (a.spec.q.size() != b.spec.q.size()) {
                             return a.spec.q.size() < b.spec.q.size();
                         }
                         return name_key(a.spec) < name_key(b.spec);
                     });
    return options;
}

SelfMissWarning y_self_missingness_warning(const MDag& g) {
    const NodeId y = g.outcome();
    if (g.status(y) != VariableStatus::incomplete) return {};
    const NodeId ry = *g.indicator_of(y);
    SelfMissWarning w;
    std::vector<std::string> patterns;
    if (g.has_edge(y, ry)) {
        patterns.push_back(g.display_name(y) + " is a direct cause of its own missingness (" +
                           g.display_name(y) + " -> R[" + g.display_name(y) + "])");
    }
    for (NodeId u : g.unmeasured()) {
        if (g.has_edge(u, y) && g.has_edge(u, ry)) {
            patterns.push_back("unmeasured " + g.display_name(u) + " is a common cause of " +
                               g.display_name(y) + " and R[" + g.display_name(y) + "]");
        }
    }
    if (patterns.empty()) return {};
    w.flag = true;
    std::ostringstream out;
    for (std::size_t i = 0; i < patterns.size(); ++i) {
        if (i > 0) out << "; ";
        out << patterns[i];
    }
    w.pattern = out.str();
    return w;
}

StrategyReport analyze(const MDag& g) {
    StrategyReport report;
    report.cra = cra_verdict(g);
    report.phi = compute_phi(g);
    report.full_mi = full_mi_verdict(g);
    report.warning = y_self_missingness_warning(g);
    report.eligible_q = eligible_q(g);
    try {
        report.options = enumerate_subsamples(g);
    } catch (const GraphError&) {
        report.enumeration_skipped = true;
        report.notes.push_back(
            "too many incomplete variables for exhaustive enumeration; evaluate explicit Q "
            "partitions with the subsample command");
    }
    if (!report.options.empty()) {
        report.notes.push_back(
            "ranking is advisory: subsample sizes are data-dependent and cannot be determined "
            "from the graph alone");
    }
    for (const auto& opt : report.options) {
        if (std::find(opt.annotations.begin(), opt.annotations.end(),
                      "condition2_phrasings_disagree") != opt.annotations.end()) {
            report.notes.push_back(
                "the two published phrasings of the subsample inclusion condition disagree for "
                "Q={" + join_names(g, opt.spec.q) +
                "}; the analysis-model conditioning set is used");
        }
    }
    return report;
}

}  // namespace mdag
