#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "edp/cnf.hpp"

namespace edp {

enum class Encoding { unary, binary };

inline std::string_view to_string(Encoding e) {
    return e == Encoding::unary ? "unary" : "binary";
}

inline std::optional<Encoding> encoding_from_string(std::string_view s) {
    if (s == "unary") return Encoding::unary;
    if (s == "binary") return Encoding::binary;
    return std::nullopt;
}

/// Number of bits used to store one counter state in the binary encoding:
/// one sign bit plus enough bits for a magnitude in 0..bound.
inline int state_width(int bound) {
    int magnitude_bits = 0;
    while ((1 << magnitude_bits) < bound + 1) ++magnitude_bits;
    return magnitude_bits + 1;
}

/// Bit `bit` of the sign/magnitude pattern for counter value `j`. The top
/// bit (width - 1) is the sign; the rest hold |j| in the usual order, least
/// significant first.
inline bool state_bit_value(int j, int bit, int width) {
    assert(bit >= 0 && bit < width);
    if (bit == width - 1) return j < 0;
    unsigned magnitude = static_cast<unsigned>(j < 0 ? -j : j);
    return ((magnitude >> bit) & 1u) != 0;
}

/// Counter value for a raw bit pattern, or nullopt if the pattern matches no
/// state: a "negated zero" (sign set, magnitude zero) or a magnitude above
/// `bound`.
inline std::optional<int> counter_from_pattern(std::uint32_t pattern, int width, int bound) {
    bool sign = ((pattern >> (width - 1)) & 1u) != 0;
    int magnitude = static_cast<int>(pattern & ((1u << (width - 1)) - 1u));
    if (magnitude > bound) return std::nullopt;
    if (sign && magnitude == 0) return std::nullopt;
    return sign ? -magnitude : magnitude;
}

/// The meaning of one CNF variable, as decoded from a VarMap.
struct Prop {
    enum class Kind { symbol, sink, state, state_bit };

    Kind kind;
    int i = 0;    // symbol index, or trace position for states
    int d = 0;    // trace step (states only)
    int j = 0;    // counter value (unary states only)
    int bit = 0;  // bit index (binary states only)

    friend bool operator==(const Prop&, const Prop&) = default;
};

/// Deterministic variable layout shared by both encodings:
///
///   1..l      p_i, true iff symbol i of the sequence is +1
///   l+1       the shared sink flag, true iff some trace accepts
///   l+2...    state variables, ordered by step d ascending, then trace
///             position ascending, then counter value (unary) or bit index
///             (binary) ascending
///
/// Keeping p_i at index i means any model is readable without the map.
class VarMap {
public:
    VarMap(int length, int bound, int max_d, Encoding encoding)
        : length_(length), bound_(bound), max_d_(max_d), encoding_(encoding) {
        if (length < 1) throw std::invalid_argument("sequence length must be >= 1");
        if (bound < 1) throw std::invalid_argument("discrepancy bound must be >= 1");
        if (max_d < 0 || max_d > length / (bound + 1))
            throw std::invalid_argument("max_d out of range 0..floor(l/(C+1))");
        block_start_.reserve(static_cast<std::size_t>(max_d) + 1);
        int next = length + 2;  // first state variable
        for (int d = 1; d <= max_d; ++d) {
            block_start_.push_back(next);
            next += positions(d) * vars_per_position();
        }
        block_start_.push_back(next);  // one past the last variable
    }

    int length() const { return length_; }
    int bound() const { return bound_; }
    int max_d() const { return max_d_; }
    Encoding encoding() const { return encoding_; }

    int num_vars() const { return block_start_.back() - 1; }

    /// Trace positions per step d: floor(l/d) symbols plus the initial state.
    int positions(int d) const {
        assert(d >= 1 && d <= max_d_);
        return length_ / d + 1;
    }

    int bits_per_state() const { return state_width(bound_); }

    int symbol_var(int i) const {
        assert(i >= 1 && i <= length_);
        return i;
    }

    int sink_var() const { return length_ + 1; }

    int state_var(int d, int i, int j) const {
        assert(encoding_ == Encoding::unary);
        assert(j >= -bound_ && j <= bound_);
        return position_base(d, i) + (j + bound_);
    }

    int state_bit_var(int d, int i, int bit) const {
        assert(encoding_ == Encoding::binary);
        assert(bit >= 0 && bit < bits_per_state());
        return position_base(d, i) + bit;
    }

    Prop decode_var(int v) const {
        if (v < 1 || v > num_vars()) throw std::invalid_argument("variable out of range");
        if (v <= length_) return {Prop::Kind::symbol, v};
        if (v == length_ + 1) return {Prop::Kind::sink};
        auto it = std::upper_bound(block_start_.begin(), block_start_.end(), v);
        int d = static_cast<int>(it - block_start_.begin());  // first block start > v
        int offset = v - block_start_[static_cast<std::size_t>(d) - 1];
        int stride = vars_per_position();
        Prop p;
        p.d = d;
        p.i = offset / stride + 1;
        if (encoding_ == Encoding::unary) {
            p.kind = Prop::Kind::state;
            p.j = offset % stride - bound_;
        } else {
            p.kind = Prop::Kind::state_bit;
            p.bit = offset % stride;
        }
        return p;
    }

    /// One-line metadata record embedded as a DIMACS comment so instances can
    /// be decoded from the CNF file alone.
    std::string metadata_comment() const {
        std::ostringstream out;
        out << "edp l=" << length_ << " C=" << bound_ << " max-d=" << max_d_
            << " encoding=" << to_string(encoding_) << " layout=1";
        return out.str();
    }

    static std::optional<VarMap> from_metadata(std::span<const std::string> comments) {
        for (const std::string& line : comments) {
            std::istringstream in(line);
            std::string tag;
            in >> tag;
            if (tag != "edp") continue;
            int l = 0, c = 0, max_d = -1, layout = 0;
            std::optional<Encoding> enc;
            std::string field;
            while (in >> field) {
                auto eq = field.find('=');
                if (eq == std::string::npos) continue;
                std::string key = field.substr(0, eq);
                std::string value = field.substr(eq + 1);
                if (key == "l") l = std::atoi(value.c_str());
                else if (key == "C") c = std::atoi(value.c_str());
                else if (key == "max-d") max_d = std::atoi(value.c_str());
                else if (key == "encoding") enc = encoding_from_string(value);
                else if (key == "layout") layout = std::atoi(value.c_str());
            }
            if (l >= 1 && c >= 1 && max_d >= 0 && enc && layout == 1)
                return VarMap(l, c, max_d, *enc);
        }
        return std::nullopt;
    }

    friend bool operator==(const VarMap&, const VarMap&) = default;

private:
    int vars_per_position() const {
        return encoding_ == Encoding::unary ? 2 * bound_ + 1 : bits_per_state();
    }

    int position_base(int d, int i) const {
        assert(d >= 1 && d <= max_d_);
        assert(i >= 1 && i <= positions(d));
        return block_start_[static_cast<std::size_t>(d) - 1] + (i - 1) * vars_per_position();
    }

    int length_;
    int bound_;
    int max_d_;
    Encoding encoding_;
    std::vector<int> block_start_;
};

}  // namespace edp
