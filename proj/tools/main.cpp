#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "patfree/bench.hpp"
#include "patfree/core.hpp"
#include "patfree/exact_oracle.hpp"
#include "patfree/generators.hpp"
#include "patfree/testers.hpp"

using nlohmann::json;
using namespace patfree;

namespace {

std::uint64_t env_seed() {
    if (const char* s = std::getenv("PATFREE_SEED")) {
        try {
            return std::stoull(s);
        } catch (const std::exception&) {
            throw CLI::ValidationError("PATFREE_SEED must be an unsigned integer");
        }
    }
    return 0;
}

std::ostream& open_out(const std::string& path, std::ofstream& file) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open output file: " + path);
    return file;
}

json instance_meta(const gen::InstanceRecord& rec) {
    json j;
    j["schema_version"] = bench::schema_version;
    j["generator"] = rec.generator_name;
    j["n"] = rec.sequence.n();
    j["seed"] = rec.seed;
    j["certified_far_lower"] = rec.certified_far_lower;
    if (rec.dominating_gap) j["dominating_gap"] = *rec.dominating_gap;
    if (rec.planted_family) {
        json fam = json::array();
        for (const auto& t : rec.planted_family->tuples) fam.push_back(t);
        j["planted_family"] = std::move(fam);
        j["planted_pattern"] = rec.planted_family->pattern.name();
    }
    return j;
}

// "planted:n=4096,eps=0.1" -> InstanceSpec
bench::InstanceSpec parse_gen_spec(const std::string& text) {
    bench::InstanceSpec spec;
    const auto colon = text.find(':');
    spec.kind = text.substr(0, colon);
    if (colon != std::string::npos) {
        std::istringstream rest(text.substr(colon + 1));
        std::string kv;
        while (std::getline(rest, kv, ',')) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw CLI::ValidationError("bad generator spec field: " + kv);
            const std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
            if (key == "n") {
                spec.n = std::stoi(val);
            } else if (key == "eps") {
                spec.eps = std::stod(val);
            } else {
                throw CLI::ValidationError("unknown generator spec key: " + key);
            }
        }
    }
    return spec;
}

json family_json(const exact::TupleFamily& fam) {
    json arr = json::array();
    for (const auto& t : fam.tuples) arr.push_back(t);
    return arr;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::istringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) out.push_back(std::stoi(tok));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"adaptive (1,3,2)-pattern-freeness testing toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    std::uint64_t seed = env_seed();
    std::string format = "json";
    bool quiet = false;
    app.add_option("--seed", seed, "base RNG seed (default from PATFREE_SEED, else 0)");
    app.add_option("--format", format)->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_flag("--quiet", quiet, "suppress per-trial output");

    // generate
    auto* cgen = app.add_subcommand("generate", "write a sequence file plus JSON metadata");
    std::string g_kind, g_out = "instance.seq";
    int g_n = 1024;
    double g_eps = 0.1;
    cgen->add_option("--kind", g_kind)
        ->required()
        ->check(CLI::IsMember({"avoid132", "planted", "gap1", "gap2", "perm", "inc", "dec"}));
    cgen->add_option("--n", g_n);
    cgen->add_option("--epsilon", g_eps);
    cgen->add_option("--out", g_out, "sequence file path; metadata goes to <out>.meta.json");

    // test
    auto* ctest = app.add_subcommand("test", "run tester trials");
    std::string t_input, t_gen, t_algo = "full", t_out;
    double t_eps = 0.1;
    int t_trials = 1;
    testers::TesterConfig t_cfg;
    ctest->add_option("--input", t_input, "sequence file");
    ctest->add_option("--gen", t_gen, "generator spec, e.g. planted:n=4096,eps=0.1");
    ctest->add_option("--epsilon", t_eps);
    ctest->add_option("--trials", t_trials)->check(CLI::PositiveNumber);
    ctest->add_option("--algo", t_algo)
        ->check(CLI::IsMember({"mono12", "mono21", "gap1", "gap2", "full"}));
    ctest->add_option("--c-outer", t_cfg.c_outer);
    ctest->add_option("--c-sample", t_cfg.c_sample);
    ctest->add_option("--c-fc", t_cfg.c_fc);
    ctest->add_option("--c-bs", t_cfg.c_bs);
    ctest->add_flag("--strict-pseudocode", t_cfg.strict_pseudocode);
    ctest->add_option("--out", t_out);

    // oracle
    auto* corc = app.add_subcommand("oracle", "full-access ground-truth computations");
    std::string o_input, o_pattern = "132", o_op, o_set;
    int o_anchor = 1, o_lo = 1, o_hi = 1;
    double o_gamma = 0.1;
    corc->add_option("--input", o_input)->required();
    corc->add_option("--pattern", o_pattern)->check(CLI::IsMember({"12", "21", "132"}));
    corc->add_option("--op", o_op)
        ->required()
        ->check(CLI::IsMember({"find", "disjoint-lr", "disjoint-plus", "gaps", "density",
                               "deserted", "distance", "bounds"}));
    corc->add_option("--anchor", o_anchor, "anchor position for --op density");
    corc->add_option("--set", o_set, "comma-separated positions for --op deserted");
    corc->add_option("--lo", o_lo, "interval start for --op deserted");
    corc->add_option("--hi", o_hi, "interval end for --op deserted");
    corc->add_option("--gamma", o_gamma, "threshold for --op deserted");

    // bench
    auto* cbench = app.add_subcommand("bench", "batches, scaling tables, lemma sweeps");
    std::string b_exp, b_kind = "planted", b_ns = "1024,4096", b_lemma = "L3", b_out;
    int b_n = 4096, b_trials = 50, b_instances = 200, b_parallel = 1;
    double b_eps = 0.1;
    std::string b_eps_list = "0.1,0.2,0.3";
    testers::TesterConfig b_cfg;
    cbench->add_option("--experiment", b_exp)
        ->required()
        ->check(CLI::IsMember({"batch", "scaling", "lemma"}));
    cbench->add_option("--kind", b_kind);
    cbench->add_option("--n", b_n);
    cbench->add_option("--eps", b_eps);
    cbench->add_option("--trials", b_trials)->check(CLI::PositiveNumber);
    cbench->add_option("--parallel", b_parallel)->check(CLI::PositiveNumber);
    cbench->add_option("--ns", b_ns, "comma-separated lengths for --experiment scaling");
    cbench->add_option("--lemma", b_lemma)
        ->check(CLI::IsMember({"L2", "L3", "L5", "L8", "L9"}));
    cbench->add_option("--instances", b_instances);
    cbench->add_option("--eps-list", b_eps_list);
    cbench->add_option("--c-outer", b_cfg.c_outer);
    cbench->add_option("--c-sample", b_cfg.c_sample);
    cbench->add_option("--c-fc", b_cfg.c_fc);
    cbench->add_option("--c-bs", b_cfg.c_bs);
    cbench->add_option("--out", b_out);

    // verify
    auto* cver = app.add_subcommand("verify", "audit a (1,3,2) witness against a sequence file");
    std::string v_input;
    std::vector<int> v_witness;
    cver->add_option("--input", v_input)->required();
    cver->add_option("--witness", v_witness, "three positions i j k")->expected(3)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*cgen) {
            bench::InstanceSpec spec{g_kind, g_n, g_eps, ""};
            auto rec = bench::make_instance(spec, seed);
            write_sequence_file(g_out, rec.sequence);
            std::ofstream meta(g_out + ".meta.json");
            meta << instance_meta(rec).dump(2) << '\n';
            if (!quiet)
                std::cout << "wrote " << g_out << " (n=" << rec.sequence.n() << ", certified "
                          << rec.certified_far_lower << ")\n";
            return 0;
        }

        if (*ctest) {
            if (t_input.empty() == t_gen.empty()) {
                std::cerr << "usage error: exactly one of --input and --gen is required\n";
                return 2;
            }
            std::ofstream file;
            std::ostream& out = open_out(t_out, file);
            std::optional<Sequence> fixed;
            bench::InstanceSpec spec;
            if (!t_input.empty()) {
                fixed = read_sequence_file(t_input);
            } else {
                spec = parse_gen_spec(t_gen);
            }
            t_cfg.epsilon = t_eps;
            int successes = 0;
            std::uint64_t total_queries = 0;
            for (int i = 0; i < t_trials; ++i) {
                const std::uint64_t trial_seed = split_seed(seed, static_cast<std::uint64_t>(i));
                Sequence f = fixed ? *fixed
                                   : bench::make_instance(spec, split_seed(trial_seed, 0)).sequence;
                t_cfg.seed = split_seed(trial_seed, 1);
                QueryOracle oracle(f);
                TestReport rep;
                if (t_algo == "full") {
                    rep = testers::test_132(oracle, t_eps, t_cfg);
                } else {
                    std::optional<Witness> w;
                    if (t_algo == "mono12" || t_algo == "mono21") {
                        w = testers::test_monotone(
                            oracle, t_algo == "mono12" ? PatternSpec::incr() : PatternSpec::decr(),
                            t_eps, t_cfg);
                    } else {
                        testers::Rng rng(t_cfg.seed);
                        w = t_algo == "gap1" ? testers::test_132_gap1(oracle, t_eps, t_cfg, rng)
                                             : testers::test_132_gap2(oracle, t_eps, t_cfg, rng);
                    }
                    rep.verdict = w ? Verdict::reject : Verdict::accept;
                    rep.witness = std::move(w);
                    rep.queries = oracle.query_count();
                    rep.epsilon = t_eps;
                    rep.n = oracle.n();
                    rep.seed = t_cfg.seed;
                }
                rep.seed = trial_seed;
                if (rep.verdict == Verdict::reject && rep.witness &&
                    rep.witness->valid_for(f))
                    ++successes;
                total_queries += rep.queries;
                if (!quiet) out << bench::report_to_json(rep).dump() << '\n';
            }
            json summary;
            summary["schema_version"] = bench::schema_version;
            summary["type"] = "summary";
            summary["trials"] = t_trials;
            summary["rejections_with_valid_witness"] = successes;
            summary["mean_queries"] = static_cast<double>(total_queries) / t_trials;
            out << summary.dump() << '\n';
            return 0;
        }

        if (*corc) {
            Sequence f = read_sequence_file(o_input);
            PatternSpec pi = PatternSpec::from_name(o_pattern);
            json j;
            j["schema_version"] = bench::schema_version;
            j["op"] = o_op;
            if (o_op == "find") {
                auto w = exact::find_pattern_exhaustive(f, pi);
                j["witness"] = w ? json(w->indices) : json(nullptr);
            } else if (o_op == "disjoint-lr") {
                auto fam = exact::greedy_disjoint_tuples_lr(f, pi);
                j["tuples"] = family_json(fam);
                j["size"] = fam.size();
            } else if (o_op == "disjoint-plus") {
                auto t0 = exact::greedy_disjoint_tuples_lr(f, PatternSpec::one_three_two());
                auto fam = exact::greedy_disjoint_tuples_plus(f, t0);
                j["t0_size"] = t0.size();
                j["tuples"] = family_json(fam);
                j["size"] = fam.size();
            } else if (o_op == "gaps") {
                auto t0 = exact::greedy_disjoint_tuples_lr(f, PatternSpec::one_three_two());
                auto fam = exact::greedy_disjoint_tuples_plus(f, t0);
                json counts;
                for (auto [c, cnt] : exact::classify_gaps(fam))
                    counts[std::to_string(c)] = cnt;
                j["gap_counts"] = std::move(counts);
            } else if (o_op == "density") {
                auto t0 = exact::greedy_disjoint_tuples_lr(f, PatternSpec::one_three_two());
                auto fam = exact::greedy_disjoint_tuples_plus(f, t0);
                auto prof = exact::density_profile(f, fam, o_anchor);
                json deltas;
                for (auto [t, d] : prof.deltas) deltas[std::to_string(t)] = d;
                j["anchor"] = prof.anchor;
                j["deltas"] = std::move(deltas);
                j["cumulative"] = prof.cumulative;
            } else if (o_op == "deserted") {
                auto des = exact::gamma_deserted_indices(parse_int_list(o_set),
                                                         Interval{o_lo, o_hi}, o_gamma);
                j["deserted"] = des;
            } else if (o_op == "distance") {
                j["distance"] = exact::exact_distance_to_free(f, pi);
            } else if (o_op == "bounds") {
                auto [lo, hi] = exact::distance_bounds(f, pi);
                j["lower"] = lo;
                j["upper"] = hi;
            }
            std::cout << j.dump(2) << '\n';
            return 0;
        }

        if (*cbench) {
            std::ofstream file;
            std::ostream& out = open_out(b_out, file);
            b_cfg.seed = seed;
            b_cfg.epsilon = b_eps;
            if (b_exp == "batch") {
                bench::TrialBatch req;
                req.config = b_cfg;
                req.instance = bench::InstanceSpec{b_kind, b_n, b_eps, ""};
                req.trials = b_trials;
                req.parallel = b_parallel;
                auto batch = bench::run_batch(std::move(req));
                out << (format == "csv" ? bench::batch_to_csv(batch)
                                        : bench::batch_to_json(batch).dump() + "\n");
            } else if (b_exp == "scaling") {
                auto rows = bench::scaling_experiment(parse_int_list(b_ns), b_eps, b_trials, b_cfg);
                out << (format == "csv" ? bench::scaling_to_csv(rows)
                                        : bench::scaling_to_json(rows).dump() + "\n");
            } else {
                bench::LemmaParams params;
                params.instances = b_instances;
                params.n = b_n;
                params.seed = seed;
                params.epsilons.clear();
                std::istringstream in(b_eps_list);
                std::string tok;
                while (std::getline(in, tok, ',')) params.epsilons.push_back(std::stod(tok));
                auto rep = bench::lemma_sweep(b_lemma, params);
                out << bench::lemma_to_json(rep).dump() << '\n';
                if (!rep.ok) {
                    std::cerr << "lemma sweep violation: " << rep.counterexample << '\n';
                    return 1;
                }
            }
            return 0;
        }

        if (*cver) {
            Sequence f = read_sequence_file(v_input);
            for (int p : v_witness) {
                if (p < 1 || p > f.n()) {
                    std::cerr << "index " << p << " outside [1," << f.n() << "]\n";
                    return 2;
                }
            }
            const int i = v_witness[0], jj = v_witness[1], k = v_witness[2];
            if (!(i < jj && jj < k)) {
                std::cerr << "indices must satisfy i < j < k\n";
                return 1;
            }
            if (!(f.at(i) < f.at(k))) {
                std::cerr << "violated: f(i) < f(k) (" << format_value(f.at(i))
                          << " vs " << format_value(f.at(k)) << ")\n";
                return 1;
            }
            if (!(f.at(k) < f.at(jj))) {
                std::cerr << "violated: f(k) < f(j) (" << format_value(f.at(k)) << " vs "
                          << format_value(f.at(jj)) << ")\n";
                return 1;
            }
            if (!quiet) std::cout << "valid (1,3,2) witness\n";
            return 0;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const exact::CapabilityError& e) {
        std::cerr << "capability error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
