#include "patfree/core.hpp"

#include <bit>
#include <cmath>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace patfree {

int ceil_log2(std::int64_t x) {
    if (x <= 1) return 0;
    return std::bit_width(static_cast<std::uint64_t>(x - 1));
}

std::uint64_t split_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t z = base + (index + 1) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Sequence::Sequence(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw std::invalid_argument("sequence must have n >= 1");
    for (double v : values_) {
        if (!std::isfinite(v)) throw std::invalid_argument("sequence entries must be finite");
    }
}

double Sequence::at(int i) const {
    if (i < 1 || i > n()) {
        throw std::out_of_range("sequence index " + std::to_string(i) + " outside [1," +
                                std::to_string(n()) + "]");
    }
    return values_[static_cast<std::size_t>(i) - 1];
}

namespace {

double parse_one(const std::string& token) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(token, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("cannot parse sequence value: '" + token + "'");
    }
    while (pos < token.size() && std::isspace(static_cast<unsigned char>(token[pos]))) ++pos;
    if (pos != token.size()) throw std::invalid_argument("trailing junk in value: '" + token + "'");
    if (!std::isfinite(v)) throw std::invalid_argument("NaN/inf rejected in sequence input");
    return v;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

Sequence parse_sequence(const std::string& text) {
    std::vector<double> values;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        if (line.find(',') != std::string::npos) {
            std::istringstream fields(line);
            std::string tok;
            while (std::getline(fields, tok, ',')) values.push_back(parse_one(trim(tok)));
        } else {
            values.push_back(parse_one(line));
        }
    }
    if (values.empty()) throw std::invalid_argument("empty sequence input");
    return Sequence(std::move(values));
}

Sequence read_sequence_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open sequence file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_sequence(buf.str());
}

std::string format_value(double v) {
    if (v == std::floor(v) && std::abs(v) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.0f", v);
        return buf;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_sequence(std::ostream& out, const Sequence& f) {
    for (double v : f.values()) out << format_value(v) << '\n';
}

void write_sequence_file(const std::string& path, const Sequence& f) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    write_sequence(out, f);
}

PatternSpec::PatternSpec(std::vector<int> perm) : perm_(std::move(perm)) {
    const bool is12 = perm_ == std::vector<int>{1, 2};
    const bool is21 = perm_ == std::vector<int>{2, 1};
    const bool is132 = perm_ == std::vector<int>{1, 3, 2};
    if (!is12 && !is21 && !is132) {
        throw std::invalid_argument("unsupported pattern; supported: (1,2), (2,1), (1,3,2)");
    }
}

PatternSpec PatternSpec::from_name(std::string_view name) {
    if (name == "12") return incr();
    if (name == "21") return decr();
    if (name == "132") return one_three_two();
    throw std::invalid_argument("unknown pattern name: " + std::string(name));
}

std::string PatternSpec::name() const {
    std::string s;
    for (int p : perm_) s += static_cast<char>('0' + p);
    return s;
}

bool Witness::valid_for(const Sequence& f) const {
    const int k = pattern.length();
    if (static_cast<int>(indices.size()) != k) return false;
    for (int a = 0; a < k; ++a) {
        if (indices[a] < 1 || indices[a] > f.n()) return false;
        if (a > 0 && indices[a] <= indices[a - 1]) return false;
    }
    for (int a = 1; a <= k; ++a) {
        for (int b = 1; b <= k; ++b) {
            if (pattern.rank(a) < pattern.rank(b) && !(f.at(indices[a - 1]) < f.at(indices[b - 1])))
                return false;
        }
    }
    return true;
}

std::optional<Interval> clamp_interval(std::int64_t lo, std::int64_t hi, int n) {
    if (n < 1) throw std::invalid_argument("clamp_interval requires n >= 1");
    std::int64_t a = std::max<std::int64_t>(lo, 1);
    std::int64_t b = std::min<std::int64_t>(hi, n);
    if (a > b) return std::nullopt;
    return Interval{static_cast<int>(a), static_cast<int>(b)};
}

double QueryOracle::query(int i) {
    if (i < 1 || i > n()) {
        throw std::out_of_range("oracle query index " + std::to_string(i) + " outside [1," +
                                std::to_string(n()) + "]");
    }
    if (memoize_) {
        auto it = cache_.find(i);
        if (it != cache_.end()) return it->second;
    }
    if (budget_ && count_ >= *budget_) throw BudgetExhausted(*budget_);
    ++count_;
    double v = f_->at(i);
    if (memoize_) cache_.emplace(i, v);
    return v;
}

}  // namespace patfree
