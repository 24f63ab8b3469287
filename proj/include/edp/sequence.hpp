#pragma once

#include <cassert>
#include <cstdint>
#include <cstdlib>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace edp {

/// A finite word over {+1, -1}. Public indices are 1-based, so x(1) is the
/// first symbol, matching the usual mathematical convention.
class Sequence {
public:
    Sequence() = default;

    Sequence(std::initializer_list<int> symbols) {
        x_.reserve(symbols.size());
        for (int s : symbols) append(s);
    }

    int length() const { return static_cast<int>(x_.size()); }
    bool empty() const { return x_.empty(); }

    int at(int i) const {
        assert(i >= 1 && i <= length());
        return x_[static_cast<std::size_t>(i) - 1];
    }

    void append(int symbol) {
        if (symbol != 1 && symbol != -1)
            throw std::invalid_argument("sequence symbol must be +1 or -1");
        x_.push_back(static_cast<std::int8_t>(symbol));
    }

    Sequence prefix(int m) const {
        assert(m >= 0 && m <= length());
        Sequence p;
        p.x_.assign(x_.begin(), x_.begin() + m);
        return p;
    }

    auto begin() const { return x_.begin(); }
    auto end() const { return x_.end(); }

    friend bool operator==(const Sequence&, const Sequence&) = default;

private:
    std::vector<std::int8_t> x_;
};

struct SequenceParseError : std::runtime_error {
    SequenceParseError(std::size_t position, char found)
        : std::runtime_error("invalid sequence character '" + std::string(1, found) +
                             "' at position " + std::to_string(position)),
          position(position) {}
    std::size_t position;  // 1-based byte offset of the offending character
};

/// Reads a sequence written as '+' and '-' characters; whitespace is ignored.
inline Sequence parse_sequence(std::string_view text) {
    Sequence s;
    for (std::size_t k = 0; k < text.size(); ++k) {
        char c = text[k];
        if (c == '+')
            s.append(+1);
        else if (c == '-')
            s.append(-1);
        else if (c != ' ' && c != '\t' && c != '\n' && c != '\r' && c != '\v' && c != '\f')
            throw SequenceParseError(k + 1, c);
    }
    return s;
}

/// Renders a sequence in the same shape parse_sequence reads: symbols
/// separated by spaces, thirty per line.
inline std::string format_sequence(const Sequence& s) {
    std::string out;
    for (int i = 1; i <= s.length(); ++i) {
        out += s.at(i) > 0 ? '+' : '-';
        if (i == s.length() || i % 30 == 0)
            out += '\n';
        else
            out += ' ';
    }
    return out;
}

inline Sequence negate(const Sequence& s) {
    Sequence n;
    for (int i = 1; i <= s.length(); ++i) n.append(-s.at(i));
    return n;
}

/// The subsequence x_d, x_2d, x_3d, ... as its own sequence.
inline Sequence homogeneous_subsequence(const Sequence& s, int d) {
    if (d < 1) throw std::invalid_argument("step d must be positive");
    Sequence sub;
    for (int i = d; i <= s.length(); i += d) sub.append(s.at(i));
    return sub;
}

/// Partial sums S_k = x_d + x_2d + ... + x_kd for k = 1..floor(l/d).
inline std::vector<int> partial_sums(const Sequence& s, int d) {
    if (d < 1 || d > s.length())
        throw std::invalid_argument("step d out of range 1..length");
    std::vector<int> sums;
    sums.reserve(static_cast<std::size_t>(s.length() / d));
    int acc = 0;
    for (int i = d; i <= s.length(); i += d) {
        acc += s.at(i);
        sums.push_back(acc);
    }
    return sums;
}

/// Discrepancy of a finite sequence together with the (d, k) pair attaining
/// it. The witness is the lexicographically smallest such pair; it is absent
/// (zeros) exactly when the sequence is empty.
struct DiscrepancyReport {
    int value = 0;
    int witness_d = 0;
    int witness_k = 0;

    bool has_witness() const { return value > 0; }
};

/// max over d and k of |x_d + x_2d + ... + x_kd|, by direct summation.
inline DiscrepancyReport discrepancy(const Sequence& s) {
    DiscrepancyReport report;
    const int l = s.length();
    for (int d = 1; d <= l; ++d) {
        int sum = 0;
        for (int k = 1; k <= l / d; ++k) {
            sum += s.at(k * d);
            if (std::abs(sum) > report.value) {
                report.value = std::abs(sum);
                report.witness_d = d;
                report.witness_k = k;
            }
        }
    }
    return report;
}

}  // namespace edp
