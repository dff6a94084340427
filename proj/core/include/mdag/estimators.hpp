#ifndef MDAG_ESTIMATORS_HPP
#define MDAG_ESTIMATORS_HPP

#include <map>
#include <string>
#include <vector>

#include "mdag/dataset.hpp"
#include "mdag/dgp.hpp"
#include "mdag/rng.hpp"

namespace mdag {

/// Coefficient of the first predictor (the exposure) in an
/// intercept-included least-squares fit.
struct Estimate {
    double beta = 0.0;
    double se = 0.0;
    std::size_t n_used = 0;
};

/// Least squares of response on predictors plus intercept; classical
/// variance formula for the standard errors. `rows` empty means all rows;
/// with complete_cases_only, rows missing any used variable are dropped,
/// otherwise masked values are read as-is (full-data oracle fits).
Estimate fit_ols(const Dataset& ds, const std::string& response,
                 const std::vector<std::string>& predictors,
                 const std::vector<std::uint32_t>& rows = {},
                 bool complete_cases_only = true);

/// Fully conditional specification with Bayesian normal linear regression
/// draws: missing cells start as draws from the observed marginal; each
/// cycle refits every incomplete variable on the current completed data,
/// draws coefficients and residual variance from their posterior, and
/// redraws the missing cells. Returns m completed copies from independent
/// chains.
std::vector<Dataset> impute_fcs(const Dataset& ds,
                                const std::vector<std::string>& variables_to_impute,
                                const std::map<std::string, std::vector<std::string>>&
                                    predictors_per_variable,
                                std::size_t m, std::size_t cycles, Rng& rng);

/// Rubin's rules: pooled point estimate is the mean; pooled variance is the
/// mean within-imputation variance plus (1 + 1/m) times the between
/// variance. m = 1 returns the single estimate (between-variance 0).
Estimate pool_rubin(const std::vector<Estimate>& estimates);

struct RubinDetail {
    Estimate pooled;
    double within = 0.0;
    double between = 0.0;
    bool single_imputation = false;
};
RubinDetail pool_rubin_detail(const std::vector<Estimate>& estimates);

struct AnalysisPlan {
    std::string response;
    std::vector<std::string> predictors;   // exposure first
    std::vector<std::string> auxiliaries;  // imputation model only
};

/// One estimator run on one dataset: complete records, full-sample multiple
/// imputation, or multiple imputation within the subsample where Q is
/// observed.
Estimate run_method(const Dataset& ds, const MethodSpec& method, const AnalysisPlan& plan,
                    std::size_t m, std::size_t cycles, Rng& rng);

}  // namespace mdag

#endif
