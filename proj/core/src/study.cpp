#include "mdag/study.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace mdag {

namespace {

unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("MDAG_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

std::uint64_t method_stream_tag(const std::string& label) {
    return fnv1a64(label.data(), label.size());
}

constexpr std::uint64_t kGenTag = 0x67656e6572617465ULL;  // "generate"

}  // namespace

StudyResult run_study(const StudyParams& params) {
    if (params.reps < 2) throw std::invalid_argument("run_study: reps must be at least 2");
    if (params.m < 1) throw std::invalid_argument("run_study: m must be at least 1");
    const DgpSpec& dgp = dgp_for(params.scenario);
    const std::vector<MethodSpec> methods =
        params.methods.empty() ? default_methods(params.scenario) : params.methods;
    if (methods.empty()) throw std::invalid_argument("run_study: no methods requested");

    AnalysisPlan plan{dgp.response, dgp.predictors, {}};

    const std::size_t reps = params.reps;
    const std::size_t n_methods = methods.size();
    std::vector<std::uint64_t> tags(n_methods);
    for (std::size_t i = 0; i < n_methods; ++i) tags[i] = method_stream_tag(methods[i].label());

    // betas[method][rep]; nullopt marks a failed replication for that method.
    std::vector<std::vector<std::optional<double>>> betas(
        n_methods, std::vector<std::optional<double>>(reps));

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t rep = next.fetch_add(1);
            if (rep >= reps) return;
            Rng gen = Rng::stream(params.seed, kGenTag ^ (rep * 0x9E3779B97F4A7C15ULL));
            Dataset ds = generate(dgp, params.n, gen);
            for (std::size_t mi = 0; mi < n_methods; ++mi) {
                Rng mrng = Rng::stream(params.seed, tags[mi] ^ (rep * 0xC2B2AE3D27D4EB4FULL));
                try {
                    Estimate est =
                        run_method(ds, methods[mi], plan, params.m, params.cycles, mrng);
                    betas[mi][rep] = est.beta;
                } catch (const std::exception&) {
                    betas[mi][rep] = std::nullopt;
                }
            }
        }
    };

    const unsigned n_threads = std::min<unsigned>(resolve_threads(params.threads),
                                                  static_cast<unsigned>(reps));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    StudyResult result;
    result.scenario = params.scenario;
    result.reps = reps;
    result.n = params.n;
    result.m = params.m;
    for (std::size_t mi = 0; mi < n_methods; ++mi) {
        MethodResult mr;
        mr.method = methods[mi].label();
        mr.reps = reps;
        double sum = 0.0;
        std::size_t ok = 0;
        for (std::size_t r = 0; r < reps; ++r) {
            if (betas[mi][r]) {
                sum += *betas[mi][r];
                ++ok;
            } else {
                ++mr.failures;
            }
        }
        if (mr.failures * 100 > reps) {
            throw std::runtime_error("method " + mr.method + " failed in " +
                                     std::to_string(mr.failures) + "/" + std::to_string(reps) +
                                     " replications");
        }
        if (ok == 0) throw std::runtime_error("method " + mr.method + " never succeeded");
        const double mean = sum / static_cast<double>(ok);
        double ss = 0.0;
        for (std::size_t r = 0; r < reps; ++r) {
            if (betas[mi][r]) {
                const double d = *betas[mi][r] - mean;
                ss += d * d;
            }
        }
        mr.mean_bias = mean - dgp.true_beta;
        mr.empirical_se = ok > 1 ? std::sqrt(ss / static_cast<double>(ok - 1)) : 0.0;
        mr.mcse = mr.empirical_se / std::sqrt(static_cast<double>(ok));
        result.methods.push_back(std::move(mr));
    }
    return result;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

std::string to_csv(const StudyResult& result) {
    std::ostringstream out;
    out << "scenario,method,reps,n,m,mean_bias,empirical_se,mcse,failures\n";
    for (const auto& m : result.methods) {
        out << result.scenario << ',' << m.method << ',' << result.reps << ',' << result.n << ','
            << result.m << ',' << fmt(m.mean_bias) << ',' << fmt(m.empirical_se) << ','
            << fmt(m.mcse) << ',' << m.failures << '\n';
    }
    return out.str();
}

std::string to_json(const StudyResult& result) {
    nlohmann::json j;
    j["scenario"] = result.scenario;
    j["reps"] = result.reps;
    j["n"] = result.n;
    j["m"] = result.m;
    auto& rows = j["methods"] = nlohmann::json::array();
    for (const auto& m : result.methods) {
        rows.push_back({{"method", m.method},
                        {"reps", m.reps},
                        {"failures", m.failures},
                        {"mean_bias", m.mean_bias},
                        {"empirical_se", m.empirical_se},
                        {"mcse", m.mcse}});
    }
    return j.dump(2) + "\n";
}

}  // namespace mdag
