#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "patfree/exact_oracle.hpp"
#include "patfree/generators.hpp"

using namespace patfree;
using namespace patfree::exact;

namespace {

Sequence random_perm(int n, std::uint64_t seed) {
    return gen::gen_uniform_random_perm(n, seed).sequence;
}

std::set<std::vector<int>> tuple_set(const TupleFamily& fam) {
    return {fam.tuples.begin(), fam.tuples.end()};
}

// reference O(n^3) scan, for cross-checking the staged search
std::optional<std::vector<int>> brute_first_132(const Sequence& f) {
    for (int i = 1; i <= f.n(); ++i)
        for (int j = i + 1; j <= f.n(); ++j)
            for (int k = j + 1; k <= f.n(); ++k)
                if (f.at(i) < f.at(k) && f.at(k) < f.at(j)) return std::vector<int>{i, j, k};
    return std::nullopt;
}

}  // namespace

TEST_CASE("exhaustive search returns the lexicographically first witness") {
    auto w = find_pattern_exhaustive(Sequence({1, 3, 2}), PatternSpec::one_three_two());
    REQUIRE(w.has_value());
    CHECK(w->indices == std::vector<int>{1, 2, 3});

    CHECK_FALSE(
        find_pattern_exhaustive(Sequence({4, 3, 2, 1}), PatternSpec::incr()).has_value());

    auto w2 = find_pattern_exhaustive(Sequence({2, 1, 4, 6, 3, 5}), PatternSpec::one_three_two());
    REQUIRE(w2.has_value());
    CHECK(w2->indices == std::vector<int>{1, 3, 5});

    auto w3 = find_pattern_exhaustive(Sequence({3, 1, 2}), PatternSpec::incr());
    REQUIRE(w3.has_value());
    CHECK(w3->indices == std::vector<int>{2, 3});
}

TEST_CASE("staged 132 search agrees with the cubic scan") {
    for (std::uint64_t s = 0; s < 300; ++s) {
        const int n = 2 + static_cast<int>(s % 11);
        Sequence f = random_perm(n, split_seed(99, s));
        auto got = find_pattern_exhaustive(f, PatternSpec::one_three_two());
        auto want = brute_first_132(f);
        REQUIRE(got.has_value() == want.has_value());
        if (got) CHECK(got->indices == *want);
    }
}

TEST_CASE("left-to-right greedy family") {
    CHECK(greedy_disjoint_tuples_lr(Sequence({1, 2, 3}), PatternSpec::one_three_two()).size() == 0);
    auto fam = greedy_disjoint_tuples_lr(Sequence({1, 6, 3, 2, 5, 4}), PatternSpec::one_three_two());
    CHECK(fam.size() == 2);
    CHECK(fam.valid_for(Sequence({1, 6, 3, 2, 5, 4})));
}

TEST_CASE("greedy residual is pattern free") {
    for (std::uint64_t s = 0; s < 500; ++s) {
        Sequence f = random_perm(12, split_seed(7, s));
        for (const auto& pi :
             {PatternSpec::incr(), PatternSpec::decr(), PatternSpec::one_three_two()}) {
            auto fam = greedy_disjoint_tuples_lr(f, pi);
            REQUIRE(fam.valid_for(f));
            std::vector<char> usable(static_cast<std::size_t>(f.n()) + 1, 1);
            for (int p : fam.support()) usable[static_cast<std::size_t>(p)] = 0;
            CHECK_FALSE(first_witness_among(f, pi, usable).has_value());
        }
    }
}

TEST_CASE("right-to-left reselection") {
    Sequence f1({1, 3, 2});
    TupleFamily t0{PatternSpec::one_three_two(), {{1, 2, 3}}};
    CHECK(tuple_set(greedy_disjoint_tuples_plus(f1, t0)) ==
          std::set<std::vector<int>>{{1, 2, 3}});

    Sequence f2({2, 1, 6, 5, 4, 3});
    TupleFamily t02{PatternSpec::one_three_two(), {{2, 3, 4}, {1, 5, 6}}};
    auto out = greedy_disjoint_tuples_plus(f2, t02);
    CHECK(tuple_set(out) == std::set<std::vector<int>>{{2, 5, 6}, {1, 3, 4}});
    CHECK(out.valid_for(f2));

    TupleFamily empty{PatternSpec::one_three_two(), {}};
    CHECK(greedy_disjoint_tuples_plus(Sequence({1, 2, 3}), empty).size() == 0);
}

TEST_CASE("reselection stays inside the input support, both variants") {
    for (std::uint64_t s = 0; s < 300; ++s) {
        Sequence f = random_perm(10 + static_cast<int>(s % 40), split_seed(13, s));
        auto t0 = greedy_disjoint_tuples_lr(f, PatternSpec::one_three_two());
        for (auto variant : {GreedyPlusVariant::canonical, GreedyPlusVariant::prefix_pairs}) {
            auto t = greedy_disjoint_tuples_plus(f, t0, variant);
            REQUIRE(t.valid_for(f));
            auto e0 = t0.support();
            for (int p : t.support())
                CHECK(std::binary_search(e0.begin(), e0.end(), p));
            // at least a third of the input tuples survive
            CHECK(3 * t.size() >= t0.size());
        }
    }
}

TEST_CASE("gap index of a tuple") {
    CHECK(gap_of_tuple({1, 2, 10}) == 2);
    CHECK(gap_of_tuple({1, 9, 10}) == 1);
    CHECK(gap_of_tuple({1, 5, 9}) == 1);
    CHECK(gap_of_tuple({3, 4}) == 1);
    CHECK_THROWS_AS(gap_of_tuple({5}), std::invalid_argument);
}

TEST_CASE("gap classification counts") {
    TupleFamily fam{PatternSpec::one_three_two(), {{1, 2, 10}, {3, 4, 20}}};
    auto c = classify_gaps(fam);
    CHECK(c == std::map<int, int>{{2, 2}});
    TupleFamily fam2{PatternSpec::one_three_two(), {{1, 9, 10}}};
    CHECK(classify_gaps(fam2) == std::map<int, int>{{1, 1}});
    TupleFamily mixed{PatternSpec::one_three_two(), {{1, 9, 10}, {1, 2, 10}, {4, 5, 6}}};
    auto cm = classify_gaps(mixed);
    int total = 0;
    for (auto [cls, cnt] : cm) {
        CHECK((cls == 1 || cls == 2));
        total += cnt;
    }
    CHECK(total == 3);
}

TEST_CASE("density profile") {
    Sequence pad({1, 3, 2, 0, 0, 0, 0, 0});
    TupleFamily empty{PatternSpec::one_three_two(), {}};
    CHECK(density_profile(pad, empty, 3).cumulative == 0.0);

    TupleFamily one{PatternSpec::one_three_two(), {{1, 2, 3}}};
    auto prof = density_profile(pad, one, 2);
    REQUIRE(prof.deltas.count(0) == 1);
    CHECK(prof.deltas.at(0) == doctest::Approx(0.5));
    CHECK(prof.cumulative == doctest::Approx(0.5));
    CHECK(density_profile(pad, one, 5).cumulative == 0.0);
    CHECK(pair_width(2, 3) == 0);
    CHECK(pair_width(2, 4) == 1);
    CHECK(pair_width(2, 10) == 3);
}

TEST_CASE("crossing third elements must increase") {
    Sequence f({2, 1, 6, 5, 4, 3});
    TupleFamily fam{PatternSpec::one_three_two(), {{1, 3, 4}, {2, 5, 6}}};
    CHECK_FALSE(crossing_monotone_check(fam, f).has_value());

    TupleFamily single{PatternSpec::one_three_two(), {{2, 5, 6}}};
    CHECK_FALSE(crossing_monotone_check(single, f).has_value());

    Sequence g({1, 5, 1.5, 6, 3, 2});
    TupleFamily bad{PatternSpec::one_three_two(), {{1, 2, 5}, {3, 4, 6}}};
    REQUIRE(bad.valid_for(g));
    auto viol = crossing_monotone_check(bad, g);
    REQUIRE(viol.has_value());
    CHECK(viol->anchor == 4);
    CHECK(viol->k1 == 5);
    CHECK(viol->k2 == 6);
}

TEST_CASE("deserted indices") {
    std::vector<int> all;
    for (int p = 1; p <= 10; ++p) all.push_back(p);
    CHECK(gamma_deserted_indices(all, Interval{1, 10}, 0.9).empty());
    CHECK(gamma_deserted_indices({1}, Interval{1, 10}, 0.5) == std::vector<int>{1});
    CHECK_THROWS_AS(gamma_deserted_indices({1}, Interval{1, 10}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(gamma_deserted_indices({11}, Interval{1, 10}, 0.5), std::invalid_argument);
    // gamma = 0 deserts nobody: |S cap J| < 0 is impossible
    CHECK(gamma_deserted_indices({3, 7}, Interval{1, 10}, 0.0).empty());
}

TEST_CASE("exact distance") {
    std::vector<double> inc;
    for (int i = 1; i <= 10; ++i) inc.push_back(i);
    CHECK(exact_distance_to_free(Sequence(inc), PatternSpec::one_three_two()) == 0);
    CHECK(exact_distance_to_free(Sequence({1, 3, 2}), PatternSpec::one_three_two()) == 1);
    CHECK(exact_distance_to_free(Sequence({1, 2, 3}), PatternSpec::incr()) == 2);
    CHECK(exact_distance_to_free(Sequence({3, 2, 1}), PatternSpec::incr()) == 0);
    CHECK(exact_distance_to_free(Sequence({1, 2, 2, 1}), PatternSpec::decr()) == 1);

    auto planted = gen::gen_planted_far(15, 1.0, 5);
    REQUIRE(planted.planted_family.has_value());
    REQUIRE(planted.planted_family->size() == 5);
    CHECK(exact_distance_to_free(planted.sequence, PatternSpec::one_three_two()) >= 5);

    CHECK_THROWS_AS(exact_distance_to_free(Sequence(std::vector<double>(21, 1.0)),
                                           PatternSpec::one_three_two()),
                    CapabilityError);
}

TEST_CASE("distance bounds sandwich the exact value") {
    CHECK(distance_bounds(Sequence({1, 2, 3}), PatternSpec::one_three_two()) ==
          std::pair<int, int>{0, 0});
    CHECK(distance_bounds(Sequence({1, 3, 2}), PatternSpec::one_three_two()) ==
          std::pair<int, int>{1, 3});
    for (std::uint64_t s = 0; s < 200; ++s) {
        const int n = 4 + static_cast<int>(s % 7);
        Sequence f = random_perm(n, split_seed(21, s));
        for (const auto& pi :
             {PatternSpec::incr(), PatternSpec::decr(), PatternSpec::one_three_two()}) {
            auto [lo, hi] = distance_bounds(f, pi);
            const int exact_d = exact_distance_to_free(f, pi);
            CHECK(lo <= exact_d);
            CHECK(exact_d <= hi);
        }
    }
}

TEST_CASE("refill repairs the sequence to freedom for (1,2) and (1,3,2)") {
    for (std::uint64_t s = 0; s < 200; ++s) {
        const int n = 3 + static_cast<int>(s % 12);
        Sequence f = random_perm(n, split_seed(31, s));
        for (const auto& pi : {PatternSpec::incr(), PatternSpec::one_three_two()}) {
            auto fam = greedy_disjoint_tuples_lr(f, pi);
            Sequence g = refill_free(f, fam);
            CHECK_FALSE(find_pattern_exhaustive(g, pi).has_value());
        }
    }
}

TEST_CASE("refill is direction-asymmetric: the global-max fallback can recreate (2,1)") {
    // left-fill preserves freeness because the source map is nondecreasing,
    // but leading deleted positions take the global max, which sits above
    // the whole residual and so can head a new (2,1) pair
    Sequence f({3, 1, 2});
    auto fam = greedy_disjoint_tuples_lr(f, PatternSpec::decr());
    Sequence g = refill_free(f, fam);
    CHECK(g.values() == std::vector<double>{3, 3, 2});
    CHECK(find_pattern_exhaustive(g, PatternSpec::decr()).has_value());
}
