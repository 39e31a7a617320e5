#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "patfree/exact_oracle.hpp"
#include "patfree/generators.hpp"

using namespace patfree;
using namespace patfree::gen;

TEST_CASE("avoiding generator produces valid, 132-free permutations") {
    auto one = gen_132_avoiding(1, 7);
    CHECK(one.sequence.n() == 1);
    CHECK(one.certified_far_lower == 0.0);

    for (std::uint64_t s = 0; s < 100; ++s) {
        const int n = 2 + static_cast<int>(s % 9);
        auto inst = gen_132_avoiding(n, split_seed(1, s));
        REQUIRE(inst.sequence.n() == n);
        auto vals = inst.sequence.values();
        std::sort(vals.begin(), vals.end());
        for (int i = 0; i < n; ++i) CHECK(vals[static_cast<std::size_t>(i)] == i + 1);
        CHECK_FALSE(
            exact::find_pattern_exhaustive(inst.sequence, PatternSpec::one_three_two()).has_value());
    }
}

TEST_CASE("avoiding generator covers all 14 avoiders at n=4") {
    std::set<std::vector<double>> seen;
    for (std::uint64_t s = 0; s < 4000; ++s) seen.insert(gen_132_avoiding(4, s).sequence.values());
    // Catalan(4) = 14 distinct (1,3,2)-avoiding permutations
    CHECK(seen.size() == 14);
}

TEST_CASE("planted-far certification is honest") {
    auto inst = gen_planted_far(30, 0.3, 11);
    REQUIRE(inst.planted_family.has_value());
    CHECK(inst.planted_family->size() == 3);  // ceil(0.3*30/3)
    CHECK(inst.planted_family->valid_for(inst.sequence));
    CHECK(inst.certified_far_lower == doctest::Approx(3.0 / 30));
    auto [lo, hi] = exact::distance_bounds(inst.sequence, PatternSpec::one_three_two());
    CHECK(lo >= 3);

    auto small = gen_planted_far(18, 0.5, 2);
    REQUIRE(small.planted_family.has_value());
    CHECK(small.planted_family->size() == 3);
    CHECK(exact::exact_distance_to_free(small.sequence, PatternSpec::one_three_two()) >= 3);

    auto none = gen_planted_far(16, 0.0, 4);
    CHECK(none.certified_far_lower == 0.0);
    CHECK_FALSE(
        exact::find_pattern_exhaustive(none.sequence, PatternSpec::one_three_two()).has_value());
}

TEST_CASE("planted tuples are disjoint and certification scales") {
    for (std::uint64_t s = 0; s < 50; ++s) {
        auto inst = gen_planted_far(512, 0.2, split_seed(5, s));
        REQUIRE(inst.planted_family.has_value());
        const auto& fam = *inst.planted_family;
        CHECK(fam.size() >= static_cast<int>(std::ceil(0.2 * 512 / 3)));
        REQUIRE(fam.valid_for(inst.sequence));
        auto sup = fam.support();
        CHECK(std::adjacent_find(sup.begin(), sup.end()) == sup.end());
        CHECK(inst.certified_far_lower >= 0.2 / 3 - 1e-12);
    }
}

TEST_CASE("gap-controlled instances are pure in their class") {
    for (int c : {1, 2}) {
        for (std::uint64_t s = 0; s < 30; ++s) {
            auto inst = gen_gap_controlled(1024, 0.1, c, split_seed(17, s));
            REQUIRE(inst.planted_family.has_value());
            REQUIRE(inst.planted_family->valid_for(inst.sequence));
            CHECK(inst.dominating_gap == c);
            auto classes = exact::classify_gaps(*inst.planted_family);
            REQUIRE(classes.size() == 1);
            CHECK(classes.begin()->first == c);
        }
    }
    CHECK_THROWS_AS(gen_gap_controlled(1024, 0.1, 3, 1), std::invalid_argument);
}

TEST_CASE("gap-2 instances have dense crossing thirds at planted anchors") {
    const int n = 4096;
    const double eps = 0.1;
    auto inst = gen_gap_controlled(n, eps, 2, 23);
    const double need = eps / (36.0 * ceil_log2(n));
    int good = 0, total = 0;
    for (const auto& tup : inst.planted_family->tuples) {
        const int l = tup[1];
        const int g = tup[2] - tup[1];
        const int t = ceil_log2(g);
        ++total;
        if (exact::crossing_density(*inst.planted_family, l, t, n) >= need) ++good;
    }
    CHECK(good == total);
}

TEST_CASE("uniform permutation generator is roughly uniform at n=3") {
    std::map<std::vector<double>, int> counts;
    const int draws = 60000;
    for (std::uint64_t s = 0; s < draws; ++s)
        ++counts[gen_uniform_random_perm(3, split_seed(29, s)).sequence.values()];
    CHECK(counts.size() == 6);
    for (const auto& [perm, cnt] : counts) {
        // expected 10000 per cell, sd ~ 91; 5 sigma corridor
        CHECK(std::abs(cnt - 10000) <= 457);
    }
}

TEST_CASE("monotone generators") {
    auto inc = gen_monotone(5, true);
    CHECK(inc.sequence.values() == std::vector<double>{1, 2, 3, 4, 5});
    CHECK_FALSE(
        exact::find_pattern_exhaustive(inc.sequence, PatternSpec::one_three_two()).has_value());
    auto dec = gen_monotone(4, false);
    CHECK(dec.sequence.values() == std::vector<double>{4, 3, 2, 1});
    CHECK_FALSE(exact::find_pattern_exhaustive(dec.sequence, PatternSpec::incr()).has_value());
}

TEST_CASE("planted (1,2) corpus certification") {
    auto inst = gen_planted_far_12(40, 0.5, 3);
    REQUIRE(inst.planted_family.has_value());
    CHECK(inst.planted_family->size() == 10);  // ceil(0.5*40/2)
    CHECK(inst.planted_family->valid_for(inst.sequence));
    CHECK(inst.certified_far_lower == doctest::Approx(0.25));
}

TEST_CASE("generators are deterministic in the seed") {
    CHECK(gen_132_avoiding(64, 9).sequence.values() == gen_132_avoiding(64, 9).sequence.values());
    CHECK(gen_planted_far(64, 0.2, 9).sequence.values() ==
          gen_planted_far(64, 0.2, 9).sequence.values());
    CHECK(gen_gap_controlled(256, 0.1, 1, 9).sequence.values() ==
          gen_gap_controlled(256, 0.1, 1, 9).sequence.values());
    CHECK(gen_uniform_random_perm(64, 9).sequence.values() ==
          gen_uniform_random_perm(64, 9).sequence.values());
    CHECK(gen_planted_far_12(64, 0.2, 9).sequence.values() ==
          gen_planted_far_12(64, 0.2, 9).sequence.values());
    CHECK(gen_132_avoiding(64, 9).sequence.values() != gen_132_avoiding(64, 10).sequence.values());
}

TEST_CASE("generator argument validation") {
    CHECK_THROWS_AS(gen_132_avoiding(0, 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_planted_far(10, -0.1, 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_planted_far(10, 1.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_gap_controlled(5, 0.9, 2, 1), std::invalid_argument);
}
