#include "patfree/testers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

namespace patfree::testers {

void TesterConfig::validate() const {
    if (!(epsilon > 0 && epsilon <= 1)) throw std::invalid_argument("epsilon must be in (0,1]");
    if (c_outer < 1 || c_sample < 1 || c_fc < 1 || c_bs < 1)
        throw std::invalid_argument("tester constants must be >= 1");
}

int ceil_div_inv(double eps) {
    if (!(eps > 0)) throw std::invalid_argument("eps must be positive");
    return static_cast<int>(std::ceil(1.0 / eps));
}

namespace {

int log_ceil(int n) { return std::max(1, ceil_log2(n)); }

double log2log2(int n) {
    return std::max(1.0, std::log2(std::max(2.0, std::log2(static_cast<double>(n)))));
}

int uniform_in(Interval b, Rng& rng) {
    return std::uniform_int_distribution<int>(b.lo, b.hi)(rng);
}

// Incremental pair detection among queried points. Until the first
// realizing pair appears, the stored points form a monotone staircase by
// position, so checking the two position-neighbors of each insertion is
// complete.
struct PairFinder {
    bool increasing;  // looking for a<b with f(a)<f(b); else f(a)>f(b)
    std::map<int, double> pts;

    std::optional<std::pair<int, int>> add(int p, double v) {
        auto it = pts.lower_bound(p);
        if (it != pts.end() && it->first == p) return std::nullopt;
        if (it != pts.begin()) {
            auto prev = std::prev(it);
            if (increasing ? prev->second < v : prev->second > v) return std::pair{prev->first, p};
        }
        if (it != pts.end()) {
            if (increasing ? it->second > v : it->second < v) return std::pair{p, it->first};
        }
        pts.emplace_hint(it, p, v);
        return std::nullopt;
    }
};

std::optional<Interval> block_in(std::int64_t lo, std::int64_t hi, Interval domain) {
    auto b = clamp_interval(std::max<std::int64_t>(lo, domain.lo),
                            std::min<std::int64_t>(hi, domain.hi),
                            std::max(domain.hi, 1));
    return b;
}

Witness pair_witness(std::pair<int, int> pr, const PatternSpec& direction) {
    return Witness{{pr.first, pr.second}, direction};
}

}  // namespace

std::uint64_t epoch_query_bound(int n, double eps, const TesterConfig& cfg) {
    return 2ull * static_cast<std::uint64_t>(cfg.c_sample) *
           static_cast<std::uint64_t>(ceil_div_inv(eps)) *
           static_cast<std::uint64_t>(log_ceil(n));
}

std::uint64_t fc_sample_budget(int n, double eps, const TesterConfig& cfg) {
    if (!(eps > 0)) throw std::invalid_argument("eps must be positive");
    return static_cast<std::uint64_t>(cfg.c_fc) *
           static_cast<std::uint64_t>(std::ceil(log2log2(n) / eps));
}

std::uint64_t rbs_query_bound(int n, double eps, const TesterConfig& cfg) {
    const int logn = log_ceil(n);
    return static_cast<std::uint64_t>(cfg.c_bs) * static_cast<std::uint64_t>(logn) *
           (fc_sample_budget(n, eps / logn, cfg) + 3);
}

std::optional<Witness> test_monotone_epoch(QueryOracle& oracle, const PatternSpec& direction,
                                           int l, Interval domain, double eps,
                                           const TesterConfig& cfg, Rng& rng) {
    if (direction.length() != 2) throw std::invalid_argument("direction must be (1,2) or (2,1)");
    if (!domain.contains(l)) throw std::invalid_argument("anchor l must lie in the domain");
    cfg.validate();
    const std::int64_t span = std::max<std::int64_t>(domain.hi - l, l - domain.lo);
    if (span == 0) return std::nullopt;
    const int t_max = std::max(1, ceil_log2(span));
    const int s = cfg.c_sample * ceil_div_inv(eps);
    PairFinder pf{direction == PatternSpec::incr(), {}};
    for (int t = 1; t <= t_max; ++t) {
        const std::int64_t r = std::int64_t{1} << t;
        const std::optional<Interval> blocks[2] = {block_in(l - r, l, domain),
                                                   block_in(l, l + r, domain)};
        for (const auto& b : blocks) {
            if (!b) continue;
            for (int rep = 0; rep < s; ++rep) {
                const int p = uniform_in(*b, rng);
                if (auto pr = pf.add(p, oracle.query(p))) return pair_witness(*pr, direction);
            }
        }
    }
    return std::nullopt;
}

std::optional<Witness> test_monotone_epoch(QueryOracle& oracle, const PatternSpec& direction,
                                           int l, Interval domain, double eps,
                                           const TesterConfig& cfg) {
    Rng rng(cfg.seed);
    return test_monotone_epoch(oracle, direction, l, domain, eps, cfg, rng);
}

std::optional<Witness> test_monotone(QueryOracle& oracle, const PatternSpec& direction, double eps,
                                     const TesterConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);
    const int n = oracle.n();
    const Interval all{1, n};
    const int rounds = cfg.c_outer * ceil_div_inv(eps);
    for (int r = 0; r < rounds; ++r) {
        const int l = uniform_in(all, rng);
        if (auto w = test_monotone_epoch(oracle, direction, l, all, eps, cfg, rng)) return w;
    }
    return std::nullopt;
}

std::optional<int> find_coordinate(QueryOracle& oracle, Interval left, Interval ih, double eps,
                                   int l, const TesterConfig& cfg, Rng& rng,
                                   const PatternSpec& direction) {
    if (direction.length() != 2) throw std::invalid_argument("direction must be (1,2) or (2,1)");
    if (l < left.lo || l > ih.hi) throw std::invalid_argument("anchor l outside the domain span");
    const int n = oracle.n();
    const std::uint64_t budget = fc_sample_budget(n, eps, cfg);
    const std::int64_t span = std::max<std::int64_t>(l - left.lo, ih.hi - l);
    if (span == 0) return std::nullopt;
    const int t_max = std::max(1, ceil_log2(span));
    const std::uint64_t per_t =
        std::max<std::uint64_t>(2, budget / static_cast<std::uint64_t>(t_max));
    PairFinder pf{direction == PatternSpec::incr(), {}};
    std::uint64_t used = 0;
    for (int t = 1; t <= t_max && used < budget; ++t) {
        const std::int64_t r = std::int64_t{1} << t;
        const auto lb = block_in(l - r, l, left);
        const auto rb = block_in(l, l + r, ih);
        const int llen = lb ? lb->length() : 0;
        const int rlen = rb ? rb->length() : 0;
        if (llen + rlen == 0) continue;
        for (std::uint64_t rep = 0; rep < per_t && used < budget; ++rep) {
            const int off = std::uniform_int_distribution<int>(0, llen + rlen - 1)(rng);
            const int p = off < llen ? lb->lo + off : rb->lo + (off - llen);
            ++used;
            if (auto pr = pf.add(p, oracle.query(p))) return pr->second;
        }
    }
    return std::nullopt;
}

std::optional<int> standard_binary_search(QueryOracle& oracle, Interval i, double low_val,
                                          double high_val, const TesterConfig& cfg) {
    cfg.validate();
    Interval cur = i;
    // |I| shrinks to <= 2/3 of itself each round
    const int max_iter = 2 * log_ceil(oracle.n()) + 2;
    for (int it = 0; it < max_iter; ++it) {
        const int x = cur.lo + cur.length() / 3;
        const double v = oracle.query(x);
        if (low_val < v && v < high_val) return x;
        if (cur.length() == 1) return std::nullopt;
        if (v <= low_val) {
            cur = Interval{std::min(x + 1, cur.hi), cur.hi};
        } else {
            cur = Interval{cur.lo, std::max(x - 1, cur.lo)};
        }
    }
    return std::nullopt;
}

std::optional<int> randomized_binary_search(QueryOracle& oracle, int l, Interval left, Interval r,
                                            int i, double fi, int j, double fj, double eps,
                                            const TesterConfig& cfg, Rng& rng) {
    if (!(i < j) || !left.contains(i) || !left.contains(j))
        throw std::invalid_argument("need i < j inside the left interval");
    if (!(fi < fj)) return std::nullopt;
    const int n = oracle.n();
    const double fc_eps = eps / log_ceil(n);
    Interval ih = r;
    const int iters = cfg.c_bs * log_ceil(n);
    for (int m = 0; m < iters; ++m) {
        if (ih.length() <= 4) {
            for (int p = ih.lo; p <= ih.hi; ++p) {
                const double v = oracle.query(p);
                if (fi < v && v < fj) return p;
            }
            return std::nullopt;
        }
        auto x = find_coordinate(oracle, left, ih, fc_eps, l, cfg, rng);
        if (!x || !ih.contains(*x)) x = uniform_in(ih, rng);
        const double v = oracle.query(*x);
        if (fi < v && v < fj) return *x;
        ih = v <= fi ? Interval{*x, ih.hi} : Interval{ih.lo, *x};
    }
    return std::nullopt;
}

std::optional<Witness> test_132_gap1(QueryOracle& oracle, double eps, const TesterConfig& cfg,
                                     Rng& rng) {
    cfg.validate();
    const int n = oracle.n();
    const int logn = log_ceil(n);
    const double inner_eps = eps / logn;
    const int i_samples = cfg.c_sample * static_cast<int>(std::ceil(logn / eps));
    const int rounds = cfg.c_outer * ceil_div_inv(eps);
    for (int round = 0; round < rounds; ++round) {
        const int l = uniform_in(Interval{1, n}, rng);
        if (l == n) continue;
        const int t_max = std::max(1, ceil_log2(n - l));
        for (int t = 1; t <= t_max; ++t) {
            const std::int64_t r = std::int64_t{1} << t;
            const auto rt = clamp_interval(l, l + r, n);
            const auto lt = clamp_interval(l - r, l, n);
            if (!rt || !lt) continue;
            auto pr = test_monotone_epoch(oracle, PatternSpec::decr(), l, *rt, inner_eps, cfg, rng);
            if (!pr) continue;
            const int pj = pr->indices[0], pk = pr->indices[1];
            const double fj = oracle.query(pj), fk = oracle.query(pk);
            if (!(fj > fk)) continue;
            for (int rep = 0; rep < i_samples; ++rep) {
                const int pi = uniform_in(*lt, rng);
                const double v = oracle.query(pi);
                if (pi < pj && v < fk) return Witness{{pi, pj, pk}, PatternSpec::one_three_two()};
            }
        }
    }
    return std::nullopt;
}

std::optional<Witness> test_132_gap2(QueryOracle& oracle, double eps, const TesterConfig& cfg,
                                     Rng& rng) {
    cfg.validate();
    const int n = oracle.n();
    const double inner_eps = eps / log_ceil(n);
    const int rounds = cfg.c_outer * ceil_div_inv(eps);
    for (int round = 0; round < rounds; ++round) {
        const int l = uniform_in(Interval{1, n}, rng);
        if (l == n) continue;
        const int t_max = std::max(1, ceil_log2(n - l));
        for (int t = 1; t <= t_max; ++t) {
            const std::int64_t r = std::int64_t{1} << t;
            const auto lt = clamp_interval(l - r, l, n);
            const auto rt = clamp_interval(l, l + r, n);
            if (!lt || !rt) continue;
            auto pr = test_monotone_epoch(oracle, PatternSpec::incr(), l, *lt, inner_eps, cfg, rng);
            if (!pr) continue;
            const int pi = pr->indices[0], pj = pr->indices[1];
            const double fi = oracle.query(pi), fj = oracle.query(pj);
            if (!(fi < fj)) continue;
            auto pk = randomized_binary_search(oracle, l, *lt, *rt, pi, fi, pj, fj, eps, cfg, rng);
            if (pk && *pk > pj) {
                const double fk = oracle.query(*pk);
                if (fi < fk && fk < fj)
                    return Witness{{pi, pj, *pk}, PatternSpec::one_three_two()};
            }
            if (cfg.strict_pseudocode) return std::nullopt;
        }
    }
    return std::nullopt;
}

TestReport test_132(QueryOracle& oracle, double eps, const TesterConfig& cfg) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    TestReport rep;
    rep.epsilon = eps;
    rep.n = oracle.n();
    rep.seed = cfg.seed;
    const std::uint64_t before = oracle.query_count();
    Rng rng(cfg.seed);
    std::optional<Witness> w;
    try {
        w = test_132_gap1(oracle, eps, cfg, rng);
        rep.queries_gap1 = oracle.query_count() - before;
        if (!w) {
            w = test_132_gap2(oracle, eps, cfg, rng);
            rep.queries_gap2 = oracle.query_count() - before - rep.queries_gap1;
        }
    } catch (const BudgetExhausted&) {
        w.reset();
    }
    rep.queries = oracle.query_count() - before;
    rep.verdict = w ? Verdict::reject : Verdict::accept;
    rep.witness = std::move(w);
    rep.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

}  // namespace patfree::testers
