#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace patfree {

// ceil(log2(x)) for x >= 1; returns 0 for x <= 1.
int ceil_log2(std::int64_t x);

// Derives the seed for trial `index` from a base seed. Injective in `index`
// for a fixed base (splitmix64-style finalizer over an odd-stride ramp).
std::uint64_t split_seed(std::uint64_t base, std::uint64_t index);

// A fixed sequence f: {1..n} -> R. Immutable after construction; positions
// are 1-based throughout.
class Sequence {
  public:
    explicit Sequence(std::vector<double> values);

    int n() const { return static_cast<int>(values_.size()); }
    double at(int i) const;  // 1-based, bounds-checked
    const std::vector<double>& values() const { return values_; }

  private:
    std::vector<double> values_;
};

// Parses the sequence text format: one decimal value per line, or a single
// comma-separated line. Rejects NaN/inf and empty input.
Sequence parse_sequence(const std::string& text);
Sequence read_sequence_file(const std::string& path);
// 17 significant digits so doubles round-trip exactly; integral values are
// rendered without a fractional part.
std::string format_value(double v);
void write_sequence(std::ostream& out, const Sequence& f);
void write_sequence_file(const std::string& path, const Sequence& f);

// One of the supported order patterns: (1,2), (2,1) or (1,3,2).
class PatternSpec {
  public:
    explicit PatternSpec(std::vector<int> perm);

    static PatternSpec incr() { return PatternSpec({1, 2}); }
    static PatternSpec decr() { return PatternSpec({2, 1}); }
    static PatternSpec one_three_two() { return PatternSpec({1, 3, 2}); }
    static PatternSpec from_name(std::string_view name);  // "12" | "21" | "132"

    int length() const { return static_cast<int>(perm_.size()); }
    int rank(int a) const { return perm_.at(a - 1); }  // pi(a), 1-based
    const std::vector<int>& perm() const { return perm_; }
    std::string name() const;

    bool operator==(const PatternSpec& other) const { return perm_ == other.perm_; }

  private:
    std::vector<int> perm_;
};

// An index tuple certifying a pattern occurrence.
struct Witness {
    std::vector<int> indices;  // strictly increasing positions
    PatternSpec pattern;

    // Strict inequalities at the witness indices, checked against full access.
    bool valid_for(const Sequence& f) const;
};

// Closed position interval [lo, hi], 1-based inclusive.
struct Interval {
    int lo = 1;
    int hi = 1;

    int length() const { return hi - lo + 1; }
    bool contains(int i) const { return lo <= i && i <= hi; }
    bool operator==(const Interval& other) const { return lo == other.lo && hi == other.hi; }
};

// Clamps [lo, hi] to [1, n]; nullopt when the result would be empty.
std::optional<Interval> clamp_interval(std::int64_t lo, std::int64_t hi, int n);

class BudgetExhausted : public std::runtime_error {
  public:
    explicit BudgetExhausted(std::uint64_t budget)
        : std::runtime_error("query budget of " + std::to_string(budget) + " exhausted") {}
};

// Query-counting access to a hidden sequence. Every probe counts, including
// repeats, unless memoization is explicitly enabled. Single-owner: not
// shareable across concurrent tasks.
class QueryOracle {
  public:
    explicit QueryOracle(const Sequence& f,
                         std::optional<std::uint64_t> budget = std::nullopt,
                         bool memoize = false)
        : f_(&f), budget_(budget), memoize_(memoize) {}

    double query(int i);
    std::uint64_t query_count() const { return count_; }
    int n() const { return f_->n(); }

    // Full access for witness auditing; never used on a tester's query path.
    const Sequence& reveal() const { return *f_; }

  private:
    const Sequence* f_;
    std::uint64_t count_ = 0;
    std::optional<std::uint64_t> budget_;
    bool memoize_;
    std::unordered_map<int, double> cache_;
};

enum class Verdict { accept, reject };

// Outcome of one tester run.
struct TestReport {
    Verdict verdict = Verdict::accept;
    std::optional<Witness> witness;
    std::uint64_t queries = 0;
    std::uint64_t queries_gap1 = 0;
    std::uint64_t queries_gap2 = 0;
    double epsilon = 0;
    int n = 0;
    std::uint64_t seed = 0;
    double elapsed_seconds = 0;
};

}  // namespace patfree
