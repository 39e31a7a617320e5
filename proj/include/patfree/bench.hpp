#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "patfree/core.hpp"
#include "patfree/generators.hpp"
#include "patfree/testers.hpp"

namespace patfree::bench {

inline constexpr int schema_version = 1;

// Generator parameters or a file reference.
struct InstanceSpec {
    std::string kind;  // avoid132|planted|gap1|gap2|perm|inc|dec|planted12|file
    int n = 0;
    double eps = 0;
    std::string path;  // kind == "file"
};

gen::InstanceRecord make_instance(const InstanceSpec& spec, std::uint64_t seed);

struct BatchSummary {
    int trials = 0;
    bool far_corpus = false;  // success = valid-witness rejection; else acceptance
    double success_rate = 0;
    std::uint64_t queries_p50 = 0;
    std::uint64_t queries_p90 = 0;
    std::uint64_t queries_max = 0;
    double mean_elapsed = 0;
};

struct TrialBatch {
    testers::TesterConfig config;
    InstanceSpec instance;
    int trials = 1;
    int parallel = 1;
    std::vector<TestReport> results;
    std::vector<bool> witness_valid;  // audited against full access, per trial
    BatchSummary summary;
};

// Runs `trials` independent full-tester trials; trial i derives its
// generator and tester seeds from config.seed via the splitting function.
TrialBatch run_batch(TrialBatch request);

struct ScalingRow {
    int n = 0;
    std::uint64_t median_total = 0;
    std::uint64_t median_gap1 = 0;
    std::uint64_t median_gap2 = 0;
    double success_rate = 0;
};

std::vector<ScalingRow> scaling_experiment(const std::vector<int>& ns, double eps, int trials,
                                           const testers::TesterConfig& cfg);

struct LemmaParams {
    int instances = 100;
    int n = 256;
    std::vector<double> epsilons = {0.1, 0.2, 0.3};
    std::uint64_t seed = 0;
};

struct LemmaReport {
    std::string lemma;
    int total = 0;
    int passed = 0;
    double tightest_margin = 0;  // min over corpus of (observed - required)
    std::string counterexample;  // serialized first violation, empty if none
    bool ok = false;
};

// which in {L2, L3, L5, L8, L9}; evaluates the corresponding inequality
// with full access on a seeded corpus.
LemmaReport lemma_sweep(const std::string& which, const LemmaParams& params);

// exact binomial lower confidence bound (Clopper-Pearson) at 95%
double binomial_lower_bound_95(int successes, int trials);

nlohmann::json report_to_json(const TestReport& rep);
nlohmann::json batch_to_json(const TrialBatch& batch);
std::string batch_to_csv(const TrialBatch& batch);
nlohmann::json scaling_to_json(const std::vector<ScalingRow>& rows);
std::string scaling_to_csv(const std::vector<ScalingRow>& rows);
nlohmann::json lemma_to_json(const LemmaReport& rep);

}  // namespace patfree::bench
