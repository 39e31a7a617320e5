#include "patfree/bench.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <thread>

#include "patfree/exact_oracle.hpp"

namespace patfree::bench {

using nlohmann::json;

gen::InstanceRecord make_instance(const InstanceSpec& spec, std::uint64_t seed) {
    if (spec.kind == "avoid132") return gen::gen_132_avoiding(spec.n, seed);
    if (spec.kind == "planted") return gen::gen_planted_far(spec.n, spec.eps, seed);
    if (spec.kind == "gap1") return gen::gen_gap_controlled(spec.n, spec.eps, 1, seed);
    if (spec.kind == "gap2") return gen::gen_gap_controlled(spec.n, spec.eps, 2, seed);
    if (spec.kind == "perm") return gen::gen_uniform_random_perm(spec.n, seed);
    if (spec.kind == "inc") return gen::gen_monotone(spec.n, true);
    if (spec.kind == "dec") return gen::gen_monotone(spec.n, false);
    if (spec.kind == "planted12") return gen::gen_planted_far_12(spec.n, spec.eps, seed);
    if (spec.kind == "file") {
        Sequence f = read_sequence_file(spec.path);
        return gen::InstanceRecord{std::move(f), 0, std::nullopt, std::nullopt, seed, "file"};
    }
    throw std::invalid_argument("unknown instance kind: " + spec.kind);
}

namespace {

std::uint64_t quantile(std::vector<std::uint64_t> v, double q) {
    if (v.empty()) return 0;
    std::sort(v.begin(), v.end());
    const auto idx = static_cast<std::size_t>(q * (v.size() - 1));
    return v[idx];
}

void run_trial(const TrialBatch& req, int idx, TestReport& out, bool& witness_ok) {
    const std::uint64_t trial_seed = split_seed(req.config.seed, static_cast<std::uint64_t>(idx));
    auto inst = make_instance(req.instance, split_seed(trial_seed, 0));
    testers::TesterConfig cfg = req.config;
    cfg.seed = split_seed(trial_seed, 1);
    QueryOracle oracle(inst.sequence);
    out = testers::test_132(oracle, cfg.epsilon, cfg);
    out.seed = trial_seed;
    witness_ok = out.witness.has_value() && out.witness->valid_for(inst.sequence);
}

}  // namespace

TrialBatch run_batch(TrialBatch request) {
    if (request.trials < 1) throw std::invalid_argument("trials must be >= 1");
    request.config.validate();
    TrialBatch batch = std::move(request);
    batch.results.assign(static_cast<std::size_t>(batch.trials), TestReport{});
    std::vector<char> valid(static_cast<std::size_t>(batch.trials), 0);

    auto worker = [&](int from, int to) {
        for (int i = from; i < to; ++i) {
            bool ok = false;
            run_trial(batch, i, batch.results[static_cast<std::size_t>(i)], ok);
            valid[static_cast<std::size_t>(i)] = ok;
        }
    };
    const int threads = std::max(1, std::min(batch.parallel, batch.trials));
    if (threads == 1) {
        worker(0, batch.trials);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (batch.trials + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const int from = t * chunk;
            const int to = std::min(batch.trials, from + chunk);
            if (from < to) pool.emplace_back(worker, from, to);
        }
        for (auto& th : pool) th.join();
    }

    batch.witness_valid.assign(valid.begin(), valid.end());
    BatchSummary s;
    s.trials = batch.trials;
    // probe one instance to learn whether the corpus is certified far
    const auto probe = make_instance(batch.instance, split_seed(batch.config.seed, 0));
    s.far_corpus = probe.certified_far_lower > 0;
    int succ = 0;
    std::vector<std::uint64_t> qs;
    double elapsed = 0;
    for (int i = 0; i < batch.trials; ++i) {
        const auto& r = batch.results[static_cast<std::size_t>(i)];
        qs.push_back(r.queries);
        elapsed += r.elapsed_seconds;
        if (s.far_corpus) {
            if (r.verdict == Verdict::reject && batch.witness_valid[static_cast<std::size_t>(i)])
                ++succ;
        } else if (r.verdict == Verdict::accept) {
            ++succ;
        }
    }
    s.success_rate = static_cast<double>(succ) / batch.trials;
    s.queries_p50 = quantile(qs, 0.5);
    s.queries_p90 = quantile(qs, 0.9);
    s.queries_max = quantile(qs, 1.0);
    s.mean_elapsed = elapsed / batch.trials;
    batch.summary = s;
    return batch;
}

std::vector<ScalingRow> scaling_experiment(const std::vector<int>& ns, double eps, int trials,
                                           const testers::TesterConfig& cfg) {
    if (!std::is_sorted(ns.begin(), ns.end())) throw std::invalid_argument("ns must be ascending");
    for (int n : ns)
        if (n < 64) throw std::invalid_argument("scaling grid lengths must be >= 64");
    std::vector<ScalingRow> rows;
    for (int n : ns) {
        TrialBatch req;
        req.config = cfg;
        req.config.epsilon = eps;
        req.config.seed = split_seed(cfg.seed, static_cast<std::uint64_t>(n));
        req.instance = InstanceSpec{"planted", n, eps, ""};
        req.trials = trials;
        auto batch = run_batch(std::move(req));
        std::vector<std::uint64_t> total, g1, g2;
        for (const auto& r : batch.results) {
            total.push_back(r.queries);
            g1.push_back(r.queries_gap1);
            g2.push_back(r.queries_gap2);
        }
        rows.push_back(ScalingRow{n, quantile(total, 0.5), quantile(g1, 0.5), quantile(g2, 0.5),
                                  batch.summary.success_rate});
    }
    return rows;
}

namespace {

std::string family_brief(const exact::TupleFamily& fam, std::size_t limit = 8) {
    std::ostringstream os;
    os << "{";
    for (std::size_t i = 0; i < fam.tuples.size() && i < limit; ++i) {
        const auto& t = fam.tuples[i];
        os << (i ? "," : "") << "(" << t[0] << "," << t[1] << "," << t[2] << ")";
    }
    if (fam.tuples.size() > limit) os << ",...";
    os << "}";
    return os.str();
}

LemmaReport sweep_l2(const LemmaParams& p) {
    LemmaReport rep{"L2", 0, 0, 1e300, "", false};
    for (int i = 0; i < p.instances; ++i) {
        const double eps = p.epsilons[static_cast<std::size_t>(i) % p.epsilons.size()];
        auto inst = gen::gen_planted_far(p.n, eps, split_seed(p.seed, static_cast<std::uint64_t>(i)));
        const auto& f = inst.sequence;
        auto t0 = exact::greedy_disjoint_tuples_lr(f, PatternSpec::one_three_two());
        auto u = exact::greedy_disjoint_tuples_plus(f, t0);
        const double frac = exact::qualifying_anchor_fraction(f, u, eps / 12);
        ++rep.total;
        const double margin = frac - eps / 12;
        rep.tightest_margin = std::min(rep.tightest_margin, margin);
        if (margin >= 0) {
            ++rep.passed;
        } else if (rep.counterexample.empty()) {
            std::ostringstream os;
            os << "instance " << i << " eps=" << eps << " fraction=" << frac;
            rep.counterexample = os.str();
        }
    }
    rep.ok = rep.passed == rep.total;
    return rep;
}

LemmaReport sweep_l3_l5(const LemmaParams& p, bool l5) {
    LemmaReport rep{l5 ? "L5" : "L3", 0, 0, 1e300, "", false};
    for (int i = 0; i < p.instances; ++i) {
        const std::uint64_t s = split_seed(p.seed, static_cast<std::uint64_t>(i));
        const int n = 8 + static_cast<int>(split_seed(s, 7) % static_cast<std::uint64_t>(p.n - 7));
        auto inst = gen::gen_uniform_random_perm(n, s);
        const auto& f = inst.sequence;
        auto t0 = exact::greedy_disjoint_tuples_lr(f, PatternSpec::one_three_two());
        auto t = exact::greedy_disjoint_tuples_plus(f, t0);
        ++rep.total;
        if (!l5) {
            auto bad = exact::crossing_monotone_check(t, f);
            if (!bad) {
                ++rep.passed;
                rep.tightest_margin = 0;
            } else if (rep.counterexample.empty()) {
                std::ostringstream os;
                os << "n=" << n << " seed=" << s << " l=" << bad->anchor << " k1=" << bad->k1
                   << " k2=" << bad->k2 << " T=" << family_brief(t);
                rep.counterexample = os.str();
            }
            continue;
        }
        if (t0.tuples.empty()) {
            ++rep.passed;
            continue;
        }
        auto counts = exact::classify_gaps(t);
        int maxc = 0;
        for (auto [c, cnt] : counts) maxc = std::max(maxc, cnt);
        const double ratio = static_cast<double>(maxc) / static_cast<double>(t0.size());
        rep.tightest_margin = std::min(rep.tightest_margin, ratio - 1.0 / 9);
        if (9 * maxc >= static_cast<int>(t0.size())) {
            ++rep.passed;
        } else if (rep.counterexample.empty()) {
            std::ostringstream os;
            os << "n=" << n << " seed=" << s << " |T0|=" << t0.size() << " max class " << maxc;
            rep.counterexample = os.str();
        }
    }
    rep.ok = rep.passed == rep.total;
    return rep;
}

LemmaReport sweep_l8(const LemmaParams& p) {
    LemmaReport rep{"L8", 0, 0, 1e300, "", false};
    std::mt19937_64 rng(p.seed);
    const int max_len = 64;
    const int exhaustive_len = 14;
    auto check = [&](int len, std::uint64_t bits) {
        std::vector<int> s;
        for (int o = 0; o < len; ++o)
            if ((bits >> o) & 1) s.push_back(1 + o);
        const Interval iv{1, len};
        const double eps = static_cast<double>(s.size()) / len;
        for (int g = 1; g <= 10; ++g) {
            const double gamma = 0.05 * g;
            const auto des = exact::gamma_deserted_indices(s, iv, gamma);
            const double bound = 3 * gamma * (1 - eps) * len / (1 - gamma);
            ++rep.total;
            rep.tightest_margin =
                std::min(rep.tightest_margin, bound - static_cast<double>(des.size()));
            if (static_cast<double>(des.size()) <= bound) {
                ++rep.passed;
            } else if (rep.counterexample.empty()) {
                std::ostringstream os;
                os << "|I|=" << len << " gamma=" << gamma << " S bits=" << bits
                   << " deserted=" << des.size() << " bound=" << bound;
                rep.counterexample = os.str();
            }
        }
    };
    for (int len = 1; len <= max_len; ++len) {
        if (len <= exhaustive_len) {
            for (std::uint64_t bits = 0; bits < (1ull << len); ++bits) check(len, bits);
            continue;
        }
        // structured subsets: prefixes, suffixes, arithmetic strides
        for (int k = 1; k <= len; k += 3) {
            check(len, (k == 64 ? ~0ull : (1ull << k) - 1));
            check(len, ((k == 64 ? ~0ull : (1ull << k) - 1)) << (len - k));
        }
        for (int stride = 2; stride <= 6; ++stride) {
            std::uint64_t bits = 0;
            for (int o = 0; o < len; o += stride) bits |= 1ull << o;
            check(len, bits);
        }
        for (int r = 0; r < 200; ++r) {
            std::uint64_t bits = rng();
            if (len < 64) bits &= (1ull << len) - 1;
            check(len, bits);
        }
    }
    rep.ok = rep.passed == rep.total;
    return rep;
}

LemmaReport sweep_l9(const LemmaParams& p) {
    LemmaReport rep{"L9", 0, 0, 1e300, "", false};
    for (int i = 0; i < p.instances; ++i) {
        const double eps = p.epsilons[static_cast<std::size_t>(i) % p.epsilons.size()];
        const std::uint64_t s = split_seed(p.seed, static_cast<std::uint64_t>(i));
        gen::InstanceRecord inst = gen::gen_gap_controlled(p.n, eps, 2, s);
        if (!inst.planted_family) continue;
        const int logn = std::max(1, ceil_log2(p.n));
        const double gamma = eps / (936 * logn);
        // for each planted anchor window, the surviving (non-deserted)
        // fraction of the monotone run must be >= 1 - 1/(52 log n)
        const auto& fam = *inst.planted_family;
        for (std::size_t a = 0; a < fam.tuples.size(); a += 8) {
            const int l = fam.tuples[a][1];
            const int t = std::max(1, ceil_log2(3 * 24));
            const auto win = clamp_interval(l - (1 << t), l + (1 << t), p.n);
            if (!win) continue;
            std::vector<int> srun;
            for (const auto& tup : fam.tuples) {
                if (tup[1] <= l && l <= tup[2] && win->contains(tup[2])) srun.push_back(tup[2]);
            }
            if (srun.empty()) continue;
            const auto des = exact::gamma_deserted_indices(srun, *win, gamma);
            const double kept =
                1.0 - static_cast<double>(des.size()) / static_cast<double>(srun.size());
            const double need = 1.0 - 1.0 / (52.0 * logn);
            ++rep.total;
            rep.tightest_margin = std::min(rep.tightest_margin, kept - need);
            if (kept >= need) {
                ++rep.passed;
            } else if (rep.counterexample.empty()) {
                std::ostringstream os;
                os << "n=" << p.n << " eps=" << eps << " seed=" << s << " anchor=" << l
                   << " kept=" << kept;
                rep.counterexample = os.str();
            }
        }
    }
    rep.ok = rep.passed == rep.total;
    return rep;
}

}  // namespace

LemmaReport lemma_sweep(const std::string& which, const LemmaParams& params) {
    if (which == "L2") return sweep_l2(params);
    if (which == "L3") return sweep_l3_l5(params, false);
    if (which == "L5") return sweep_l3_l5(params, true);
    if (which == "L8") return sweep_l8(params);
    if (which == "L9") return sweep_l9(params);
    throw std::invalid_argument("unknown lemma identifier: " + which);
}

double binomial_lower_bound_95(int successes, int trials) {
    if (trials <= 0) throw std::invalid_argument("trials must be positive");
    if (successes <= 0) return 0;
    if (successes > trials) throw std::invalid_argument("successes exceed trials");
    // Clopper-Pearson: smallest p with P(X >= successes; trials, p) >= 0.025
    auto upper_tail = [&](double p) {
        double logp = std::log(p), logq = std::log1p(-p);
        double sum = 0;
        double logc = 0;  // log C(trials, k), built incrementally
        for (int k = 0; k < successes; ++k) {
            if (k > 0) logc += std::log((trials - k + 1.0) / k);
            sum += std::exp(logc + k * logp + (trials - k) * logq);
        }
        return 1.0 - sum;
    };
    double lo = 0, hi = static_cast<double>(successes) / trials;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (upper_tail(mid) < 0.025) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

json report_to_json(const TestReport& rep) {
    json j;
    j["schema_version"] = schema_version;
    j["verdict"] = rep.verdict == Verdict::reject ? "reject" : "accept";
    if (rep.witness) {
        j["witness"] = rep.witness->indices;
        j["pattern"] = rep.witness->pattern.name();
    }
    j["queries"] = rep.queries;
    j["queries_gap1"] = rep.queries_gap1;
    j["queries_gap2"] = rep.queries_gap2;
    j["epsilon"] = rep.epsilon;
    j["n"] = rep.n;
    j["seed"] = rep.seed;
    j["elapsed_seconds"] = rep.elapsed_seconds;
    return j;
}

json batch_to_json(const TrialBatch& batch) {
    json j;
    j["schema_version"] = schema_version;
    j["kind"] = batch.instance.kind;
    j["n"] = batch.instance.n;
    j["eps"] = batch.instance.eps;
    j["trials"] = batch.summary.trials;
    j["far_corpus"] = batch.summary.far_corpus;
    j["success_rate"] = batch.summary.success_rate;
    j["queries_p50"] = batch.summary.queries_p50;
    j["queries_p90"] = batch.summary.queries_p90;
    j["queries_max"] = batch.summary.queries_max;
    j["mean_elapsed"] = batch.summary.mean_elapsed;
    return j;
}

std::string batch_to_csv(const TrialBatch& batch) {
    std::ostringstream os;
    os << "schema_version,kind,n,eps,trials,far_corpus,success_rate,queries_p50,queries_p90,"
          "queries_max,mean_elapsed\n";
    os << schema_version << ',' << batch.instance.kind << ',' << batch.instance.n << ','
       << batch.instance.eps << ',' << batch.summary.trials << ',' << batch.summary.far_corpus
       << ',' << batch.summary.success_rate << ',' << batch.summary.queries_p50 << ','
       << batch.summary.queries_p90 << ',' << batch.summary.queries_max << ','
       << batch.summary.mean_elapsed << '\n';
    return os.str();
}

json scaling_to_json(const std::vector<ScalingRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        json j;
        j["schema_version"] = schema_version;
        j["n"] = r.n;
        j["median_total"] = r.median_total;
        j["median_gap1"] = r.median_gap1;
        j["median_gap2"] = r.median_gap2;
        j["success_rate"] = r.success_rate;
        arr.push_back(std::move(j));
    }
    return arr;
}

std::string scaling_to_csv(const std::vector<ScalingRow>& rows) {
    std::ostringstream os;
    os << "schema_version,n,median_total,median_gap1,median_gap2,success_rate\n";
    for (const auto& r : rows) {
        os << schema_version << ',' << r.n << ',' << r.median_total << ',' << r.median_gap1 << ','
           << r.median_gap2 << ',' << r.success_rate << '\n';
    }
    return os.str();
}

json lemma_to_json(const LemmaReport& rep) {
    json j;
    j["schema_version"] = schema_version;
    j["lemma"] = rep.lemma;
    j["total"] = rep.total;
    j["passed"] = rep.passed;
    j["tightest_margin"] = rep.tightest_margin;
    j["ok"] = rep.ok;
    if (!rep.counterexample.empty()) j["counterexample"] = rep.counterexample;
    return j;
}

}  // namespace patfree::bench
