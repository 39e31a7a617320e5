#include "patfree/generators.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace patfree::gen {

namespace {

using Rng = std::mt19937_64;

// Disjoint value bands keep plants and backbone from interacting except
// through the intended patterns: i-plants in (1M,2M), backbone in (2M,3M)
// decreasing, k-plants in (3M,4M) increasing, j-plants in (4M,5M).
double band_value(int band, std::int64_t idx, std::int64_t count) {
    return band * 1e6 + (idx + 1) / (count + 1.0) * 1e6;
}

std::vector<double> decreasing_backbone(int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int p = 1; p <= n; ++p)
        v[static_cast<std::size_t>(p) - 1] = 3e6 - p / (n + 1.0) * 1e6;
    return v;
}

// m sorted block starts, blocks of length `width`, pairwise disjoint in
// [1, n]: sample m of n - m*(width-1) slots, then re-expand.
std::vector<int> sample_block_starts(int n, int m, int width, Rng& rng) {
    const int slots = n - m * (width - 1);
    std::vector<int> starts;
    starts.reserve(static_cast<std::size_t>(m));
    int picked = 0;
    for (int v = 1; v <= slots && picked < m; ++v) {
        const double p = static_cast<double>(m - picked) / (slots - v + 1);
        if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p) {
            starts.push_back(v + picked * (width - 1));
            ++picked;
        }
    }
    return starts;
}

int planted_count(int n, double eps, int k) {
    if (eps == 0) return 0;
    if (!(eps > 0 && eps <= 1)) throw std::invalid_argument("eps must be in (0,1]");
    const int m = static_cast<int>(std::ceil(eps * n / k));
    if (m < 1 || static_cast<std::int64_t>(m) * k > n)
        throw std::invalid_argument("eps*n too small or too large for planting");
    return m;
}

}  // namespace

InstanceRecord gen_132_avoiding(int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    Rng rng(seed);
    std::vector<double> v(static_cast<std::size_t>(n));
    // segment [lo,hi] holds values (vhi - len + 1 .. vhi); the maximum goes
    // to a uniform slot, the left part takes the larger remaining values
    struct Seg {
        int lo, hi, vhi;
    };
    std::vector<Seg> stack{{1, n, n}};
    while (!stack.empty()) {
        auto [lo, hi, vhi] = stack.back();
        stack.pop_back();
        if (lo > hi) continue;
        const int m = std::uniform_int_distribution<int>(lo, hi)(rng);
        v[static_cast<std::size_t>(m) - 1] = vhi;
        stack.push_back({lo, m - 1, vhi - 1});
        stack.push_back({m + 1, hi, vhi - 1 - (m - lo)});
    }
    return InstanceRecord{Sequence(std::move(v)), 0, std::nullopt, std::nullopt, seed,
                          "avoid132"};
}

InstanceRecord gen_planted_far(int n, double eps, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    Rng rng(seed);
    auto v = decreasing_backbone(n);
    const int m = planted_count(n, eps, 3);
    exact::TupleFamily fam{PatternSpec::one_three_two(), {}};
    if (m > 0) {
        auto starts = sample_block_starts(n, m, 3, rng);
        for (int r = 0; r < m; ++r) {
            const int q = starts[static_cast<std::size_t>(r)];
            v[static_cast<std::size_t>(q) - 1] = band_value(1, r, m);
            v[static_cast<std::size_t>(q)] = band_value(4, r, m);
            v[static_cast<std::size_t>(q) + 1] = band_value(3, r, m);
            fam.tuples.push_back({q, q + 1, q + 2});
        }
    }
    const double far = static_cast<double>(m) / n;
    return InstanceRecord{Sequence(std::move(v)), far,
                          m > 0 ? std::optional(fam) : std::nullopt, std::nullopt, seed,
                          "planted"};
}

InstanceRecord gen_gap_controlled(int n, double eps, int c, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (c != 1 && c != 2) throw std::invalid_argument("gap class must be 1 or 2");
    Rng rng(seed);
    auto v = decreasing_backbone(n);
    const int m = planted_count(n, eps, 3);
    exact::TupleFamily fam{PatternSpec::one_three_two(), {}};
    if (m > 0) {
        // tuples come in groups of up to 8; a group of g tuples occupies a
        // 3g block with the gap placed between pair-run and singleton-run
        if (c == 2 && m < 2)
            throw std::invalid_argument("gap class 2 needs at least 2 planted tuples");
        const int group = std::min(m, 8);
        const int groups = (m + group - 1) / group;
        std::vector<int> sizes(static_cast<std::size_t>(groups), group);
        sizes.back() = m - group * (groups - 1);
        if (c == 2 && sizes.back() < 2 && groups > 1) {
            // keep every group at size >= 2 so the far gap stays dominant
            --sizes[static_cast<std::size_t>(groups) - 2];
            ++sizes.back();
        }
        // spread the leftover length n - 3m randomly between the blocks
        const int slack = n - 3 * m;
        std::vector<int> cuts(static_cast<std::size_t>(groups));
        for (auto& cu : cuts) cu = std::uniform_int_distribution<int>(0, slack)(rng);
        std::sort(cuts.begin(), cuts.end());
        int r = 0;
        int next = 1;
        for (int gidx = 0; gidx < groups; ++gidx) {
            const int p = next + cuts[static_cast<std::size_t>(gidx)] -
                          (gidx > 0 ? cuts[static_cast<std::size_t>(gidx) - 1] : 0);
            next = p + 3 * sizes[static_cast<std::size_t>(gidx)];
            const int g = sizes[static_cast<std::size_t>(gidx)];
            for (int u = 0; u < g; ++u, ++r) {
                int pi, pj, pk;
                if (c == 2) {
                    pi = p + 2 * u;
                    pj = pi + 1;
                    pk = p + 2 * g + u;
                } else {
                    pi = p + u;
                    pj = p + g + 2 * u;
                    pk = pj + 1;
                }
                v[static_cast<std::size_t>(pi) - 1] = band_value(1, r, m);
                v[static_cast<std::size_t>(pj) - 1] = band_value(4, r, m);
                v[static_cast<std::size_t>(pk) - 1] = band_value(3, r, m);
                fam.tuples.push_back({pi, pj, pk});
            }
        }
    }
    const double far = static_cast<double>(m) / n;
    return InstanceRecord{Sequence(std::move(v)), far,
                          m > 0 ? std::optional(fam) : std::nullopt,
                          m > 0 ? std::optional(c) : std::nullopt, seed,
                          c == 1 ? "gap1" : "gap2"};
}

InstanceRecord gen_uniform_random_perm(int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    Rng rng(seed);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int p = 0; p < n; ++p) v[static_cast<std::size_t>(p)] = p + 1;
    for (int p = n - 1; p > 0; --p) {
        const int q = std::uniform_int_distribution<int>(0, p)(rng);
        std::swap(v[static_cast<std::size_t>(p)], v[static_cast<std::size_t>(q)]);
    }
    // certified_far_lower stays 0 here; callers wanting a certificate run
    // distance_bounds on demand
    return InstanceRecord{Sequence(std::move(v)), 0, std::nullopt, std::nullopt, seed, "perm"};
}

InstanceRecord gen_monotone(int n, bool increasing) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int p = 0; p < n; ++p) v[static_cast<std::size_t>(p)] = increasing ? p + 1 : n - p;
    return InstanceRecord{Sequence(std::move(v)), 0, std::nullopt, std::nullopt, 0,
                          increasing ? "inc" : "dec"};
}

InstanceRecord gen_planted_far_12(int n, double eps, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    Rng rng(seed);
    auto v = decreasing_backbone(n);
    const int m = planted_count(n, eps, 2);
    exact::TupleFamily fam{PatternSpec::incr(), {}};
    if (m > 0) {
        auto starts = sample_block_starts(n, m, 2, rng);
        for (int r = 0; r < m; ++r) {
            const int q = starts[static_cast<std::size_t>(r)];
            v[static_cast<std::size_t>(q) - 1] = band_value(1, r, m);
            v[static_cast<std::size_t>(q)] = band_value(4, r, m);
            fam.tuples.push_back({q, q + 1});
        }
    }
    const double far = static_cast<double>(m) / n;
    return InstanceRecord{Sequence(std::move(v)), far,
                          m > 0 ? std::optional(fam) : std::nullopt, std::nullopt, seed,
                          "planted12"};
}

}  // namespace patfree::gen
