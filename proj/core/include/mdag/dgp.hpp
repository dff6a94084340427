#ifndef MDAG_DGP_HPP
#define MDAG_DGP_HPP

#include <string>
#include <vector>

#include "mdag/dataset.hpp"
#include "mdag/rng.hpp"

namespace mdag {

struct LinearTerm {
    std::string var;
    double coef;
};

/// var = intercept + sum(coef * parent) + noise_scale * eps, eps ~ N(0,1).
/// A root drawn as N(mean, variance) has intercept mean and noise_scale
/// sqrt(variance).
struct StructuralEq {
    std::string var;
    double intercept = 0.0;
    std::vector<LinearTerm> terms;
    double noise_scale = 1.0;
};

enum class Side { below, above };  // strict comparison against a quantile

struct QuantileCond {
    std::string var;
    Side side;
    double quantile;  // e.g. 0.5 for the median, 0.7 for the 70th centile
};

struct MissCase {
    std::vector<QuantileCond> conds;  // conjunction
    double prob;                      // P(observe) when all conds hold
};

/// Observation probability for one incomplete variable: the first matching
/// case wins, otherwise default_prob. Quantile thresholds are computed from
/// the realized (pre-masking) columns of each generated dataset.
struct MissRule {
    std::string var;
    std::vector<MissCase> cases;
    double default_prob;
};

struct MethodSpec {
    enum class Kind { cra, full_mi, subsample_mi };
    Kind kind = Kind::cra;
    std::vector<std::string> q;  // subsample_mi only; restricted-to-observed

    std::string label() const;
};

struct DgpSpec {
    std::string scenario;
    double true_beta = 0.15;
    std::vector<StructuralEq> equations;  // simulation order
    std::vector<MissRule> missingness;
    std::string response;
    std::vector<std::string> predictors;  // exposure first
    std::vector<std::string> notes;
};

/// Simulate n rows: columns in equation order with independent standard
/// normal noise, then per-variable Bernoulli observation masks with
/// probabilities from the rules. Deterministic given the rng state.
Dataset generate(const DgpSpec& spec, std::size_t n, Rng& rng);

/// Built-in generating process for a simulable catalog scenario.
const DgpSpec& dgp_for(const std::string& scenario_id);
std::vector<std::string> simulable_scenarios();

/// The standard benchmark method set for a scenario (CRA, full-sample MI,
/// and its subsample options).
std::vector<MethodSpec> default_methods(const std::string& scenario_id);

/// Type-7 quantile (linear interpolation between order statistics).
double quantile_type7(std::vector<double> values, double p);

std::string dump_dgp_json(const DgpSpec& spec);

}  // namespace mdag

#endif
