#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "patfree/core.hpp"
#include "patfree/exact_oracle.hpp"

namespace patfree::gen {

struct InstanceRecord {
    Sequence sequence;
    double certified_far_lower = 0;  // guaranteed lower bound on distance/n
    std::optional<exact::TupleFamily> planted_family;
    std::optional<int> dominating_gap;  // 1 or 2 when gap-controlled
    std::uint64_t seed = 0;
    std::string generator_name;
};

// Random (1,3,2)-avoiding permutation of {1..n}: the maximum goes to a
// uniform position, everything left of it exceeds everything right of it,
// and both sides recurse.
InstanceRecord gen_132_avoiding(int n, std::uint64_t seed);

// Decreasing backbone with ceil(eps*n/3) disjoint adjacent low-high-mid
// triples planted in separate value bands; certified (eps/3)-far from
// (1,3,2)-free.
InstanceRecord gen_planted_far(int n, double eps, std::uint64_t seed);

// Same planting idea, but triple geometry pins the gap class: c=1 puts the
// large gap between the first two indices, c=2 between the last two.
InstanceRecord gen_gap_controlled(int n, double eps, int c, std::uint64_t seed);

// Uniform random permutation (Fisher-Yates).
InstanceRecord gen_uniform_random_perm(int n, std::uint64_t seed);

// Strictly monotone 1..n; increasing is (1,3,2)- and (2,1)-free, decreasing
// is (1,2)- and (1,3,2)-free.
InstanceRecord gen_monotone(int n, bool increasing);

// Decreasing backbone with ceil(eps*n/2) disjoint adjacent (1,2) pairs
// planted; certified (eps/2)-far from (1,2)-free. Library-only corpus for
// the monotone-tester experiments.
InstanceRecord gen_planted_far_12(int n, double eps, std::uint64_t seed);

}  // namespace patfree::gen
