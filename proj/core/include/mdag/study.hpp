#ifndef MDAG_STUDY_HPP
#define MDAG_STUDY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mdag/dgp.hpp"
#include "mdag/estimators.hpp"

namespace mdag {

struct StudyParams {
    std::string scenario;
    std::size_t reps = 500;
    std::size_t n = 1000;
    std::size_t m = 25;
    std::size_t cycles = 10;
    std::uint64_t seed = 1;
    std::vector<MethodSpec> methods;  // empty: the scenario's benchmark set
    unsigned threads = 0;             // 0: MDAG_THREADS env var, then hardware
};

struct MethodResult {
    std::string method;
    std::size_t reps = 0;      // requested replications
    std::size_t failures = 0;  // replications where the estimator errored
    double mean_bias = 0.0;    // mean(beta_hat) - true beta, successful reps
    double empirical_se = 0.0; // sd of beta_hat across successful reps
    double mcse = 0.0;         // empirical_se / sqrt(successful reps)
};

struct StudyResult {
    std::string scenario;
    std::size_t reps = 0;
    std::size_t n = 0;
    std::size_t m = 0;
    std::vector<MethodResult> methods;
};

/// Runs the replication study. Every replication draws its own rng streams
/// from (seed, replication, method), so results are bit-identical for any
/// thread count and any execution order. Throws if any method fails in more
/// than 1% of replications.
StudyResult run_study(const StudyParams& params);

/// Fixed column set: scenario,method,reps,n,m,mean_bias,empirical_se,mcse,failures
std::string to_csv(const StudyResult& result);
std::string to_json(const StudyResult& result);

}  // namespace mdag

#endif
