#include "mdag/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mdag {

namespace {

// Dense symmetric solve via Cholesky; throws on a non-positive pivot, which
// is how rank deficiency surfaces for these small design matrices.
struct Cholesky {
    std::size_t n;
    std::vector<double> l;  // row-major lower triangle

    explicit Cholesky(const std::vector<double>& a, std::size_t n_) : n(n_), l(n_ * n_, 0.0) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j <= i; ++j) {
                double sum = a[i * n + j];
                for (std::size_t k = 0; k < j; ++k) sum -= l[i * n + k] * l[j * n + k];
                if (i == j) {
                    if (sum <= 1e-12) {
                        throw std::runtime_error("design matrix is rank deficient");
                    }
                    l[i * n + i] = std::sqrt(sum);
                } else {
                    l[i * n + j] = sum / l[j * n + j];
                }
            }
        }
    }

    // Solve L L^T x = b.
    std::vector<double> solve(std::vector<double> b) const {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < i; ++k) b[i] -= l[i * n + k] * b[k];
            b[i] /= l[i * n + i];
        }
        for (std::size_t i = n; i-- > 0;) {
            for (std::size_t k = i + 1; k < n; ++k) b[i] -= l[k * n + i] * b[k];
            b[i] /= l[i * n + i];
        }
        return b;
    }

    // Solve L^T x = b (used to draw coefficients with covariance s2 (X'X)^-1).
    std::vector<double> solve_lt(std::vector<double> b) const {
        for (std::size_t i = n; i-- > 0;) {
            for (std::size_t k = i + 1; k < n; ++k) b[i] -= l[k * n + i] * b[k];
            b[i] /= l[i * n + i];
        }
        return b;
    }

    // Diagonal of (L L^T)^-1 via forward/back substitution on unit vectors.
    std::vector<double> inverse_diagonal() const {
        std::vector<double> diag(n);
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<double> e(n, 0.0);
            e[j] = 1.0;
            auto x = solve(std::move(e));
            diag[j] = x[j];
        }
        return diag;
    }
};

struct LinFit {
    std::vector<double> coef;  // intercept first
    Cholesky chol;
    double rss;
    std::size_t n_used;
    std::size_t p;  // columns including intercept
};

// Normal-equations least squares over the given rows. Column layout:
// intercept, then predictors in order.
LinFit lin_fit(const Dataset& ds, std::size_t response_col,
               const std::vector<std::size_t>& predictor_cols,
               const std::vector<std::uint32_t>& rows) {
    const std::size_t p = predictor_cols.size() + 1;
    if (rows.size() < p + 1) {
        throw std::runtime_error("not enough rows to fit " + std::to_string(p) +
                                 " coefficients (" + std::to_string(rows.size()) + " usable)");
    }
    std::vector<double> xtx(p * p, 0.0);
    std::vector<double> xty(p, 0.0);
    std::vector<double> xrow(p, 1.0);
    for (std::uint32_t r : rows) {
        for (std::size_t c = 0; c < predictor_cols.size(); ++c) {
            xrow[c + 1] = ds.columns[predictor_cols[c]][r];
        }
        const double y = ds.columns[response_col][r];
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t j = 0; j <= i; ++j) xtx[i * p + j] += xrow[i] * xrow[j];
            xty[i] += xrow[i] * y;
        }
    }
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i + 1; j < p; ++j) xtx[i * p + j] = xtx[j * p + i];
    }
    Cholesky chol(xtx, p);
    std::vector<double> coef = chol.solve(xty);
    double rss = 0.0;
    for (std::uint32_t r : rows) {
        double pred = coef[0];
        for (std::size_t c = 0; c < predictor_cols.size(); ++c) {
            pred += coef[c + 1] * ds.columns[predictor_cols[c]][r];
        }
        const double e = ds.columns[response_col][r] - pred;
        rss += e * e;
    }
    return LinFit{std::move(coef), std::move(chol), rss, rows.size(), p};
}

std::vector<std::uint32_t> all_rows(const Dataset& ds) {
    std::vector<std::uint32_t> rows(ds.rows());
    std::iota(rows.begin(), rows.end(), 0);
    return rows;
}

std::vector<std::uint32_t> complete_rows(const Dataset& ds, const std::vector<std::size_t>& cols,
                                         const std::vector<std::uint32_t>& among) {
    std::vector<std::uint32_t> rows;
    for (std::uint32_t r : among) {
        bool ok = true;
        for (std::size_t c : cols) {
            if (!ds.is_observed(r, c)) {
                ok = false;
                break;
            }
        }
        if (ok) rows.push_back(r);
    }
    return rows;
}

}  // namespace

Estimate fit_ols(const Dataset& ds, const std::string& response,
                 const std::vector<std::string>& predictors,
                 const std::vector<std::uint32_t>& rows, bool complete_cases_only) {
    const std::size_t yc = ds.col(response);
    std::vector<std::size_t> pc;
    for (const auto& name : predictors) pc.push_back(ds.col(name));

    std::vector<std::uint32_t> use = rows.empty() ? all_rows(ds) : rows;
    if (complete_cases_only) {
        std::vector<std::size_t> used_cols = pc;
        used_cols.push_back(yc);
        use = complete_rows(ds, used_cols, use);
    }
    LinFit fit = lin_fit(ds, yc, pc, use);
    const double dof = static_cast<double>(fit.n_used - fit.p);
    if (dof < 1.0) throw std::runtime_error("no residual degrees of freedom");
    const double sigma2 = fit.rss / dof;
    const auto diag = fit.chol.inverse_diagonal();
    Estimate est;
    est.beta = fit.coef.size() > 1 ? fit.coef[1] : 0.0;
    est.se = fit.coef.size() > 1 ? std::sqrt(std::max(0.0, sigma2 * diag[1])) : 0.0;
    est.n_used = fit.n_used;
    return est;
}

std::vector<Dataset> impute_fcs(const Dataset& ds,
                                const std::vector<std::string>& variables_to_impute,
                                const std::map<std::string, std::vector<std::string>>&
                                    predictors_per_variable,
                                std::size_t m, std::size_t cycles, Rng& rng) {
    if (m < 1) throw std::invalid_argument("impute_fcs: m must be at least 1");

    struct Target {
        std::size_t col;
        std::vector<std::size_t> predictor_cols;
        std::vector<std::uint32_t> observed_rows;
        std::vector<std::uint32_t> missing_rows;
        std::vector<double> observed_values;
    };
    std::vector<Target> targets;
    for (const auto& name : variables_to_impute) {
        Target t;
        t.col = ds.col(name);
        auto it = predictors_per_variable.find(name);
        if (it == predictors_per_variable.end()) {
            throw std::invalid_argument("no imputation model for variable '" + name + "'");
        }
        for (const auto& pname : it->second) t.predictor_cols.push_back(ds.col(pname));
        for (std::uint32_t r = 0; r < ds.rows(); ++r) {
            if (ds.is_observed(r, t.col)) {
                t.observed_rows.push_back(r);
                t.observed_values.push_back(ds.columns[t.col][r]);
            } else {
                t.missing_rows.push_back(r);
            }
        }
        if (t.observed_values.empty()) {
            throw std::runtime_error("variable '" + name + "' has no observed values");
        }
        targets.push_back(std::move(t));
    }

    std::vector<Dataset> completed;
    completed.reserve(m);
    for (std::size_t chain = 0; chain < m; ++chain) {
        Dataset work = ds;
        // Start every missing cell from a draw of the observed marginal.
        for (const auto& t : targets) {
            for (std::uint32_t r : t.missing_rows) {
                work.columns[t.col][r] =
                    t.observed_values[rng.uniform_index(t.observed_values.size())];
            }
        }
        for (std::size_t cycle = 0; cycle < cycles; ++cycle) {
            for (const auto& t : targets) {
                if (t.missing_rows.empty()) continue;
                LinFit fit = lin_fit(work, t.col, t.predictor_cols, t.observed_rows);
                const double dof = static_cast<double>(fit.n_used - fit.p);
                if (dof < 1.0) {
                    throw std::runtime_error("imputation model has no residual degrees of freedom");
                }
                // Posterior draws under the noninformative prior.
                const double sigma2_star = fit.rss / rng.chi_squared(dof);
                const double sigma_star = std::sqrt(sigma2_star);
                std::vector<double> z(fit.p);
                for (auto& v : z) v = rng.normal();
                std::vector<double> delta = fit.chol.solve_lt(std::move(z));
                std::vector<double> beta_star = fit.coef;
                for (std::size_t i = 0; i < fit.p; ++i) beta_star[i] += sigma_star * delta[i];
                for (std::uint32_t r : t.missing_rows) {
                    double mu = beta_star[0];
                    for (std::size_t c = 0; c < t.predictor_cols.size(); ++c) {
                        mu += beta_star[c + 1] * work.columns[t.predictor_cols[c]][r];
                    }
                    work.columns[t.col][r] = mu + sigma_star * rng.normal();
                }
            }
        }
        for (const auto& t : targets) {
            for (std::uint32_t r : t.missing_rows) work.observed[t.col][r] = 1;
        }
        completed.push_back(std::move(work));
    }
    return completed;
}

RubinDetail pool_rubin_detail(const std::vector<Estimate>& estimates) {
    if (estimates.empty()) throw std::invalid_argument("pool_rubin: empty estimate list");
    const double m = static_cast<double>(estimates.size());
    RubinDetail out;
    double mean_beta = 0.0;
    double within = 0.0;
    std::size_t n_used = 0;
    for (const auto& e : estimates) {
        mean_beta += e.beta;
        within += e.se * e.se;
        n_used = std::max(n_used, e.n_used);
    }
    mean_beta /= m;
    within /= m;
    double between = 0.0;
    if (estimates.size() > 1) {
        for (const auto& e : estimates) {
            between += (e.beta - mean_beta) * (e.beta - mean_beta);
        }
        between /= (m - 1.0);
    } else {
        out.single_imputation = true;
    }
    out.within = within;
    out.between = between;
    out.pooled.beta = mean_beta;
    out.pooled.se = std::sqrt(within + (1.0 + 1.0 / m) * between);
    out.pooled.n_used = n_used;
    return out;
}

Estimate pool_rubin(const std::vector<Estimate>& estimates) {
    return pool_rubin_detail(estimates).pooled;
}

namespace {

std::vector<std::string> model_variables(const AnalysisPlan& plan) {
    std::vector<std::string> vars{plan.response};
    vars.insert(vars.end(), plan.predictors.begin(), plan.predictors.end());
    vars.insert(vars.end(), plan.auxiliaries.begin(), plan.auxiliaries.end());
    return vars;
}

std::vector<std::string> incomplete_model_variables(const Dataset& ds, const AnalysisPlan& plan) {
    std::vector<std::string> out;
    for (const auto& name : model_variables(plan)) {
        if (ds.count_observed(name) < ds.rows()) out.push_back(name);
    }
    return out;
}

Estimate mi_estimate(const Dataset& ds, const std::vector<std::string>& to_impute,
                     const AnalysisPlan& plan, std::size_t m, std::size_t cycles, Rng& rng) {
    if (to_impute.empty()) {
        return fit_ols(ds, plan.response, plan.predictors);
    }
    std::map<std::string, std::vector<std::string>> models;
    for (const auto& name : to_impute) {
        std::vector<std::string> preds;
        for (const auto& v : model_variables(plan)) {
            if (v != name) preds.push_back(v);
        }
        models[name] = std::move(preds);
    }
    auto completed = impute_fcs(ds, to_impute, models, m, cycles, rng);
    std::vector<Estimate> fits;
    fits.reserve(completed.size());
    for (const auto& c : completed) {
        fits.push_back(fit_ols(c, plan.response, plan.predictors));
    }
    return pool_rubin(fits);
}

}  // namespace

Estimate run_method(const Dataset& ds, const MethodSpec& method, const AnalysisPlan& plan,
                    std::size_t m, std::size_t cycles, Rng& rng) {
    switch (method.kind) {
        case MethodSpec::Kind::cra: {
            return fit_ols(ds, plan.response, plan.predictors);
        }
        case MethodSpec::Kind::full_mi: {
            return mi_estimate(ds, incomplete_model_variables(ds, plan), plan, m, cycles, rng);
        }
        case MethodSpec::Kind::subsample_mi: {
            std::vector<std::size_t> qcols;
            for (const auto& name : method.q) qcols.push_back(ds.col(name));
            std::vector<std::uint32_t> rows;
            for (std::uint32_t r = 0; r < ds.rows(); ++r) {
                bool ok = true;
                for (std::size_t c : qcols) {
                    if (!ds.is_observed(r, c)) {
                        ok = false;
                        break;
                    }
                }
                if (ok) rows.push_back(r);
            }
            if (rows.empty()) throw std::runtime_error("empty subsample: no row has all Q observed");
            Dataset sub = subset(ds, rows);
            std::vector<std::string> to_impute;
            for (const auto& name : incomplete_model_variables(sub, plan)) {
                if (std::find(method.q.begin(), method.q.end(), name) == method.q.end()) {
                    to_impute.push_back(name);
                }
            }
            return mi_estimate(sub, to_impute, plan, m, cycles, rng);
        }
    }
    throw std::logic_error("unreachable method kind");
}

}  // namespace mdag
