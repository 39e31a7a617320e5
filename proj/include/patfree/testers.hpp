#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "patfree/core.hpp"

namespace patfree::testers {

using Rng = std::mt19937_64;

struct TesterConfig {
    double epsilon = 0.1;
    int c_outer = 20;   // outer anchor rounds per 1/eps
    int c_sample = 20;  // per-block samples per 1/eps
    int c_fc = 20;      // FindCoordinate sample budget per (log log n)/eps
    int c_bs = 3;       // binary-search iterations per log n
    std::uint64_t seed = 0;
    bool strict_pseudocode = false;  // a failed inner binary search aborts the whole run

    void validate() const;
};

int ceil_div_inv(double eps);  // ceil(1/eps)

// Loop-arithmetic query ceilings, used both by the algorithms and by the
// tests that pin them.
std::uint64_t epoch_query_bound(int n, double eps, const TesterConfig& cfg);
std::uint64_t fc_sample_budget(int n, double eps, const TesterConfig& cfg);
std::uint64_t rbs_query_bound(int n, double eps, const TesterConfig& cfg);

// Doubling-window pair hunt anchored at l: blocks [l-2^t, l] and [l, l+2^t]
// clamped to `domain`, per-block sample count c_sample*ceil(1/eps). Returns
// a pair realizing `direction` ((1,2) or (2,1)) among the queried points,
// cross-block pairs included, or nullopt.
std::optional<Witness> test_monotone_epoch(QueryOracle& oracle, const PatternSpec& direction,
                                           int l, Interval domain, double eps,
                                           const TesterConfig& cfg, Rng& rng);
std::optional<Witness> test_monotone_epoch(QueryOracle& oracle, const PatternSpec& direction,
                                           int l, Interval domain, double eps,
                                           const TesterConfig& cfg);

// Outer wrapper: c_outer*ceil(1/eps) fresh uniform anchors over [1,n].
std::optional<Witness> test_monotone(QueryOracle& oracle, const PatternSpec& direction, double eps,
                                     const TesterConfig& cfg);

// Samples the union L cup Ih (length-weighted) on the doubling schedule
// around l, total sample budget fc_sample_budget(n, eps, cfg); returns the
// second element of the first pair realizing `direction`.
std::optional<int> find_coordinate(QueryOracle& oracle, Interval left, Interval ih, double eps,
                                   int l, const TesterConfig& cfg, Rng& rng,
                                   const PatternSpec& direction = PatternSpec::incr());

// Deterministic search over a nondecreasing run: probe x = a + |I|/3, keep
// the side that can still hold a value in (low_val, high_val).
std::optional<int> standard_binary_search(QueryOracle& oracle, Interval i, double low_val,
                                          double high_val, const TesterConfig& cfg);

// Noisy binary search for k in R with f(i) < f(k) < f(j); i, j in L with
// their values already known to the caller. c_bs*ceil(log2 n) iterations,
// each one FindCoordinate call (at eps/ceil(log2 n)) plus at most one
// fallback sample and one probe.
std::optional<int> randomized_binary_search(QueryOracle& oracle, int l, Interval left, Interval r,
                                            int i, double fi, int j, double fj, double eps,
                                            const TesterConfig& cfg, Rng& rng);

// (1,3,2) hunt assuming 1-gap tuples dominate: a (2,1) pair (j,k) from the
// right window, then i sampled from the left window.
std::optional<Witness> test_132_gap1(QueryOracle& oracle, double eps, const TesterConfig& cfg,
                                     Rng& rng);

// (1,3,2) hunt assuming 2-gap tuples dominate: a (1,2) pair (i,j) from the
// left window, then a randomized binary search for k on the right.
std::optional<Witness> test_132_gap2(QueryOracle& oracle, double eps, const TesterConfig& cfg,
                                     Rng& rng);

// Composed one-sided tester: gap-1 phase then gap-2 phase; rejects with a
// witness on the first hit. A budget exhaustion on the oracle yields accept.
TestReport test_132(QueryOracle& oracle, double eps, const TesterConfig& cfg);

}  // namespace patfree::testers
