#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "patfree/core.hpp"

namespace patfree::exact {

// Requested computation exceeds what the exhaustive implementation can do.
class CapabilityError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A set of pairwise-disjoint pattern occurrences.
struct TupleFamily {
    PatternSpec pattern;
    std::vector<std::vector<int>> tuples;

    std::size_t size() const { return tuples.size(); }
    // E(T): union of member indices, sorted.
    std::vector<int> support() const;
    // All members are valid witnesses and pairwise disjoint.
    bool valid_for(const Sequence& f) const;
};

// Lexicographically-first occurrence of `pi` among positions marked usable.
// `usable` is 1-based (size n+1); positions with usable[i]==0 are skipped.
std::optional<std::vector<int>> first_witness_among(const Sequence& f, const PatternSpec& pi,
                                                    const std::vector<char>& usable);

// Lexicographically-first witness over the whole sequence, if any.
std::optional<Witness> find_pattern_exhaustive(const Sequence& f, const PatternSpec& pi);

// Left-to-right greedy maximal disjoint family. The residual sequence
// f restricted to [n] \ E(T) is pi-free.
TupleFamily greedy_disjoint_tuples_lr(const Sequence& f, const PatternSpec& pi);

// Two readings of the right-to-left greedy's candidate set; `canonical`
// ranges j over all unused indices, `prefix_pairs` restricts j to middle
// elements of surviving input tuples.
enum class GreedyPlusVariant { canonical, prefix_pairs };

// Right-to-left greedy reselection of (1,3,2) tuples inside E(T0). The
// output's crossing third elements form a nondecreasing sequence.
TupleFamily greedy_disjoint_tuples_plus(const Sequence& f, const TupleFamily& t0,
                                        GreedyPlusVariant variant = GreedyPlusVariant::canonical);

// Smallest m maximizing the consecutive index gap i_{m+1} - i_m (1-based).
int gap_of_tuple(const std::vector<int>& tuple);

// Tuple count per gap class c in {1, 2} (k=3 families).
std::map<int, int> classify_gaps(const TupleFamily& family);

// Per-anchor densities delta_{l,t} and their sum v_l.
struct DensityProfile {
    int anchor = 0;
    std::map<int, double> deltas;  // width t -> |A_{l,t}| / 2^{t+1}
    double cumulative = 0;         // v_l
};

// width(a,b) = ceil(log2(b-a)), so adjacent pairs have width 0.
int pair_width(int a, int b);

DensityProfile density_profile(const Sequence& f, const TupleFamily& family, int l);

// Fraction of anchors l in [1,n] with v_l >= threshold.
double qualifying_anchor_fraction(const Sequence& f, const TupleFamily& family, double threshold);

// Density of crossing third elements within [l - 2^t, l + 2^t] (clamped).
double crossing_density(const TupleFamily& family, int l, int t, int n);

struct CrossingViolation {
    int anchor = 0;
    int k1 = 0;
    int k2 = 0;
};

// Checks that for every anchor l the third elements of tuples (i,j,k) with
// j <= l <= k have nondecreasing f-values in position order. Returns the
// first violation, or nullopt when the family has the monotone structure.
std::optional<CrossingViolation> crossing_monotone_check(const TupleFamily& family,
                                                         const Sequence& f);

// Members of S that are gamma-deserted in I: some subinterval J of I
// containing the member has |S cap J| < gamma * |J|. S must be a subset of
// I; 0 <= gamma < 1.
std::vector<int> gamma_deserted_indices(const std::vector<int>& s, Interval i, double gamma);

// Minimum deletions making f pi-free; exhaustive, n <= 20 only.
int exact_distance_to_free(const Sequence& f, const PatternSpec& pi);

// (lower, upper) bounds on the deletion distance at any n: the greedy
// disjoint family forces one deletion per tuple, and deleting its support
// suffices.
std::pair<int, int> distance_bounds(const Sequence& f, const PatternSpec& pi);

// Lemma-4 style repair: every position in E(T) takes the value of its
// nearest non-deleted predecessor (global max when none exists).
Sequence refill_free(const Sequence& f, const TupleFamily& family);

}  // namespace patfree::exact
