#include "patfree/exact_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace patfree::exact {

std::vector<int> TupleFamily::support() const {
    std::vector<int> e;
    for (const auto& t : tuples) e.insert(e.end(), t.begin(), t.end());
    std::sort(e.begin(), e.end());
    return e;
}

bool TupleFamily::valid_for(const Sequence& f) const {
    std::vector<char> seen(static_cast<std::size_t>(f.n()) + 1, 0);
    for (const auto& t : tuples) {
        Witness w{t, pattern};
        if (!w.valid_for(f)) return false;
        for (int i : t) {
            if (seen[static_cast<std::size_t>(i)]) return false;
            seen[static_cast<std::size_t>(i)] = 1;
        }
    }
    return true;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::optional<std::vector<int>> first_pair(const Sequence& f, bool increasing,
                                           const std::vector<char>& usable) {
    const int n = f.n();
    // suffix extreme of f over usable positions > p
    std::vector<double> ext(static_cast<std::size_t>(n) + 2, increasing ? -kInf : kInf);
    for (int p = n; p >= 1; --p) {
        double s = ext[static_cast<std::size_t>(p) + 1];
        if (usable[static_cast<std::size_t>(p)])
            s = increasing ? std::max(s, f.at(p)) : std::min(s, f.at(p));
        ext[static_cast<std::size_t>(p)] = s;
    }
    for (int i = 1; i < n; ++i) {
        if (!usable[static_cast<std::size_t>(i)]) continue;
        double need = ext[static_cast<std::size_t>(i) + 1];
        bool ok = increasing ? need > f.at(i) : need < f.at(i);
        if (!ok) continue;
        for (int j = i + 1; j <= n; ++j) {
            if (!usable[static_cast<std::size_t>(j)]) continue;
            if (increasing ? f.at(j) > f.at(i) : f.at(j) < f.at(i)) return std::vector<int>{i, j};
        }
    }
    return std::nullopt;
}

std::optional<std::vector<int>> first_132(const Sequence& f, const std::vector<char>& usable) {
    const int n = f.n();
    for (int i = 1; i + 2 <= n; ++i) {
        if (!usable[static_cast<std::size_t>(i)]) continue;
        const double fi = f.at(i);
        // feasible iff some later k has f(i) < f(k) < max over usable j in (i,k)
        double maxv = -kInf;
        bool feasible = false;
        for (int p = i + 1; p <= n; ++p) {
            if (!usable[static_cast<std::size_t>(p)]) continue;
            if (maxv > f.at(p) && f.at(p) > fi) {
                feasible = true;
                break;
            }
            maxv = std::max(maxv, f.at(p));
        }
        if (!feasible) continue;
        for (int j = i + 1; j < n; ++j) {
            if (!usable[static_cast<std::size_t>(j)] || !(f.at(j) > fi)) continue;
            for (int k = j + 1; k <= n; ++k) {
                if (!usable[static_cast<std::size_t>(k)]) continue;
                if (fi < f.at(k) && f.at(k) < f.at(j)) return std::vector<int>{i, j, k};
            }
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<std::vector<int>> first_witness_among(const Sequence& f, const PatternSpec& pi,
                                                    const std::vector<char>& usable) {
    if (usable.size() != static_cast<std::size_t>(f.n()) + 1)
        throw std::invalid_argument("usable mask must have size n+1");
    if (pi == PatternSpec::incr()) return first_pair(f, true, usable);
    if (pi == PatternSpec::decr()) return first_pair(f, false, usable);
    return first_132(f, usable);
}

std::optional<Witness> find_pattern_exhaustive(const Sequence& f, const PatternSpec& pi) {
    std::vector<char> usable(static_cast<std::size_t>(f.n()) + 1, 1);
    auto t = first_witness_among(f, pi, usable);
    if (!t) return std::nullopt;
    return Witness{*t, pi};
}

TupleFamily greedy_disjoint_tuples_lr(const Sequence& f, const PatternSpec& pi) {
    TupleFamily out{pi, {}};
    std::vector<char> usable(static_cast<std::size_t>(f.n()) + 1, 1);
    while (auto t = first_witness_among(f, pi, usable)) {
        for (int i : *t) usable[static_cast<std::size_t>(i)] = 0;
        out.tuples.push_back(std::move(*t));
    }
    return out;
}

TupleFamily greedy_disjoint_tuples_plus(const Sequence& f, const TupleFamily& t0,
                                        GreedyPlusVariant variant) {
    if (!(t0.pattern == PatternSpec::one_three_two()))
        throw std::invalid_argument("greedy_disjoint_tuples_plus expects a (1,3,2) family");
    if (!t0.valid_for(f)) throw std::invalid_argument("input family is not a valid disjoint family");

    std::vector<int> avail = t0.support();  // ascending
    std::vector<char> active(avail.size(), 1);
    TupleFamily out{t0.pattern, {}};

    auto index_of = [&](int pos) {
        auto it = std::lower_bound(avail.begin(), avail.end(), pos);
        return static_cast<std::size_t>(it - avail.begin());
    };

    std::size_t top = avail.size();
    while (true) {
        while (top > 0 && !active[top - 1]) --top;
        if (top == 0) break;
        const std::size_t ki = top - 1;
        const int k = avail[ki];
        const double fk = f.at(k);

        std::size_t ji = avail.size();  // sentinel: not found
        std::size_t ii = avail.size();
        if (variant == GreedyPlusVariant::canonical) {
            // prefix minima of f over active positions strictly before each slot
            std::vector<double> prefmin(ki + 1, kInf);
            for (std::size_t p = 0; p < ki; ++p) {
                prefmin[p + 1] =
                    active[p] ? std::min(prefmin[p], f.at(avail[p])) : prefmin[p];
            }
            for (std::size_t p = ki; p-- > 0;) {
                if (active[p] && f.at(avail[p]) > fk && prefmin[p] < fk) {
                    ji = p;
                    break;
                }
            }
            if (ji != avail.size()) {
                for (std::size_t p = ji; p-- > 0;) {
                    if (active[p] && f.at(avail[p]) < fk) {
                        ii = p;
                        break;
                    }
                }
            }
        } else {
            // j restricted to middle elements of input tuples whose first
            // element is also still unused
            int bestJ = -1, bestI = -1;
            for (const auto& t : t0.tuples) {
                const int a = t[0], b = t[1];
                if (b >= k || b <= bestJ) continue;
                std::size_t ai = index_of(a), bi = index_of(b);
                if (!active[ai] || !active[bi]) continue;
                if (f.at(b) > fk && f.at(a) < fk) {
                    bestJ = b;
                    bestI = a;
                }
            }
            if (bestJ > 0) {
                ji = index_of(bestJ);
                ii = index_of(bestI);
            }
        }

        if (ji == avail.size() || ii == avail.size()) {
            active[ki] = 0;
            continue;
        }
        out.tuples.push_back({avail[ii], avail[ji], k});
        active[ii] = active[ji] = active[ki] = 0;
    }
    std::reverse(out.tuples.begin(), out.tuples.end());
    return out;
}

int gap_of_tuple(const std::vector<int>& tuple) {
    if (tuple.size() < 2) throw std::invalid_argument("gap_of_tuple requires k >= 2");
    int best = 1;
    for (std::size_t b = 1; b + 1 < tuple.size(); ++b) {
        if (tuple[b + 1] - tuple[b] > tuple[static_cast<std::size_t>(best)] -
                                          tuple[static_cast<std::size_t>(best) - 1])
            best = static_cast<int>(b) + 1;
    }
    return best;
}

std::map<int, int> classify_gaps(const TupleFamily& family) {
    std::map<int, int> counts;
    for (const auto& t : family.tuples) {
        if (t.size() != 3) throw std::invalid_argument("classify_gaps expects length-3 tuples");
        ++counts[gap_of_tuple(t)];
    }
    return counts;
}

int pair_width(int a, int b) {
    if (b <= a) throw std::invalid_argument("pair_width requires a < b");
    return ceil_log2(b - a);
}

DensityProfile density_profile(const Sequence& f, const TupleFamily& family, int l) {
    if (l < 1 || l > f.n()) throw std::out_of_range("anchor outside [1,n]");
    DensityProfile out;
    out.anchor = l;
    std::map<int, int> counts;
    for (const auto& t : family.tuples) {
        const int m = gap_of_tuple(t);
        const int a = t[static_cast<std::size_t>(m) - 1];
        const int b = t[static_cast<std::size_t>(m)];
        const double g = b - a;
        if (l >= a - g / 3.0 && l <= b + g / 3.0) ++counts[pair_width(a, b)];
    }
    for (auto [t, c] : counts) {
        double delta = c / std::ldexp(1.0, t + 1);
        out.deltas[t] = delta;
        out.cumulative += delta;
    }
    return out;
}

double qualifying_anchor_fraction(const Sequence& f, const TupleFamily& family, double threshold) {
    int hits = 0;
    for (int l = 1; l <= f.n(); ++l) {
        if (density_profile(f, family, l).cumulative >= threshold) ++hits;
    }
    return static_cast<double>(hits) / f.n();
}

double crossing_density(const TupleFamily& family, int l, int t, int n) {
    auto window = clamp_interval(l - (std::int64_t{1} << t), l + (std::int64_t{1} << t), n);
    if (!window) return 0;
    int hits = 0;
    for (const auto& tup : family.tuples) {
        if (tup.size() != 3) throw std::invalid_argument("crossing_density expects length-3 tuples");
        if (tup[1] <= l && l <= tup[2] && window->contains(tup[2])) ++hits;
    }
    return static_cast<double>(hits) / window->length();
}

std::optional<CrossingViolation> crossing_monotone_check(const TupleFamily& family,
                                                         const Sequence& f) {
    for (int l = 1; l <= f.n(); ++l) {
        std::vector<int> thirds;
        for (const auto& t : family.tuples) {
            if (t.size() == 3 && t[1] <= l && l <= t[2]) thirds.push_back(t[2]);
        }
        std::sort(thirds.begin(), thirds.end());
        for (std::size_t a = 1; a < thirds.size(); ++a) {
            if (!(f.at(thirds[a - 1]) < f.at(thirds[a])))
                return CrossingViolation{l, thirds[a - 1], thirds[a]};
        }
    }
    return std::nullopt;
}

std::vector<int> gamma_deserted_indices(const std::vector<int>& s, Interval i, double gamma) {
    if (!(gamma >= 0 && gamma < 1)) throw std::invalid_argument("gamma must be in [0,1)");
    const int len = i.length();
    std::vector<int> members(s);
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    std::vector<char> in_s(static_cast<std::size_t>(len), 0);
    for (int p : members) {
        if (!i.contains(p)) throw std::invalid_argument("S must be a subset of I");
        in_s[static_cast<std::size_t>(p - i.lo)] = 1;
    }
    std::vector<int> prefix(static_cast<std::size_t>(len) + 1, 0);
    for (int o = 0; o < len; ++o) prefix[static_cast<std::size_t>(o) + 1] =
        prefix[static_cast<std::size_t>(o)] + in_s[static_cast<std::size_t>(o)];

    // union of all subintervals J with |S cap J| < gamma |J|, via a diff array
    std::vector<int> mark(static_cast<std::size_t>(len) + 1, 0);
    for (int a = 0; a < len; ++a) {
        for (int b = a; b < len; ++b) {
            const int cnt = prefix[static_cast<std::size_t>(b) + 1] -
                            prefix[static_cast<std::size_t>(a)];
            if (cnt < gamma * (b - a + 1)) {
                ++mark[static_cast<std::size_t>(a)];
                --mark[static_cast<std::size_t>(b) + 1];
            }
        }
    }
    std::vector<int> out;
    int cover = 0;
    for (int o = 0; o < len; ++o) {
        cover += mark[static_cast<std::size_t>(o)];
        if (cover > 0 && in_s[static_cast<std::size_t>(o)]) out.push_back(i.lo + o);
    }
    return out;
}

namespace {

int longest_monotone(const Sequence& f, bool nonincreasing) {
    const int n = f.n();
    std::vector<int> len(static_cast<std::size_t>(n), 1);
    int best = 1;
    for (int b = 1; b < n; ++b) {
        for (int a = 0; a < b; ++a) {
            const bool ok = nonincreasing ? f.at(a + 1) >= f.at(b + 1) : f.at(a + 1) <= f.at(b + 1);
            if (ok)
                len[static_cast<std::size_t>(b)] = std::max(len[static_cast<std::size_t>(b)],
                                                            len[static_cast<std::size_t>(a)] + 1);
        }
        best = std::max(best, len[static_cast<std::size_t>(b)]);
    }
    return best;
}

struct HittingSearch {
    const Sequence& f;
    const PatternSpec& pi;
    std::unordered_map<std::uint32_t, int> failed;  // mask -> largest budget known to fail

    bool solvable(std::uint32_t kept, int budget) {
        std::vector<char> usable(static_cast<std::size_t>(f.n()) + 1, 0);
        for (int p = 1; p <= f.n(); ++p)
            usable[static_cast<std::size_t>(p)] = (kept >> (p - 1)) & 1u;
        auto w = first_witness_among(f, pi, usable);
        if (!w) return true;
        if (budget == 0) return false;
        auto it = failed.find(kept);
        if (it != failed.end() && it->second >= budget) return false;
        for (int p : *w) {
            if (solvable(kept & ~(1u << (p - 1)), budget - 1)) return true;
        }
        auto& slot = failed[kept];
        slot = std::max(slot, budget);
        return false;
    }
};

}  // namespace

int exact_distance_to_free(const Sequence& f, const PatternSpec& pi) {
    const int n = f.n();
    if (n > 20) {
        throw CapabilityError("exact_distance_to_free supports n <= 20; use distance_bounds for n=" +
                              std::to_string(n));
    }
    if (pi.length() == 2) return n - longest_monotone(f, pi == PatternSpec::incr());
    HittingSearch search{f, pi, {}};
    const std::uint32_t full = n == 32 ? ~0u : ((1u << n) - 1u);
    int d = static_cast<int>(greedy_disjoint_tuples_lr(f, pi).size());
    while (!search.solvable(full, d)) ++d;
    return d;
}

std::pair<int, int> distance_bounds(const Sequence& f, const PatternSpec& pi) {
    const int m = static_cast<int>(greedy_disjoint_tuples_lr(f, pi).size());
    return {m, pi.length() * m};
}

Sequence refill_free(const Sequence& f, const TupleFamily& family) {
    std::vector<char> deleted(static_cast<std::size_t>(f.n()) + 1, 0);
    for (int p : family.support()) deleted[static_cast<std::size_t>(p)] = 1;
    const double global_max = *std::max_element(f.values().begin(), f.values().end());
    std::vector<double> g(f.values());
    std::optional<double> last;
    for (int p = 1; p <= f.n(); ++p) {
        if (deleted[static_cast<std::size_t>(p)]) {
            g[static_cast<std::size_t>(p) - 1] = last.value_or(global_max);
        } else {
            last = f.at(p);
        }
    }
    return Sequence(std::move(g));
}

}  // namespace patfree::exact
