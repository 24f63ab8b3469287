#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "edp/cnf.hpp"
#include "edp/varmap.hpp"

namespace edp {

/// Parameters of one CNF instance: sequence length l, discrepancy bound C,
/// how many homogeneous subsequences to trace (max_d), and which state
/// encoding to use. The default max_d is floor(l/(C+1)): a subsequence with
/// fewer than C+1 elements can never push a partial sum past C, so larger
/// steps carry no constraint.
struct EncodeParams {
    int length = 0;
    int bound = 1;
    Encoding encoding = Encoding::binary;
    std::optional<int> max_d;

    int default_max_d() const { return length / (bound + 1); }
    int effective_max_d() const { return max_d.value_or(default_max_d()); }

    void validate() const {
        if (length < 1) throw std::invalid_argument("sequence length must be >= 1");
        if (bound < 1) throw std::invalid_argument("discrepancy bound must be >= 1");
        if (max_d && (*max_d < 0 || *max_d > default_max_d()))
            throw std::invalid_argument("max_d out of range 0..floor(l/(C+1))");
    }
};

/// One-hot encoding: per step d, one Boolean per counter value per trace
/// position, transition implications clausified directly, and exactly-one
/// constraints (at-least-one plus pairwise at-most-one) on every position.
/// The traces all share the sink flag, which a single unit clause forbids.
inline std::pair<Formula, VarMap> encode_unary(const EncodeParams& params) {
    params.validate();
    VarMap map(params.length, params.bound, params.effective_max_d(), Encoding::unary);
    Formula f(map.num_vars());
    const int C = params.bound;

    f.add_clause({neg(map.sink_var())});
    for (int d = 1; d <= map.max_d(); ++d) {
        const int steps = params.length / d;
        f.add_clause({pos(map.state_var(d, 1, 0))});  // every trace starts at counter 0
        for (int i = 1; i <= steps; ++i) {
            const Lit symbol = pos(map.symbol_var(i * d));
            for (int j = -C; j < C; ++j)
                f.add_clause({neg(map.state_var(d, i, j)), ~symbol,
                              pos(map.state_var(d, i + 1, j + 1))});
            for (int j = -C + 1; j <= C; ++j)
                f.add_clause({neg(map.state_var(d, i, j)), symbol,
                              pos(map.state_var(d, i + 1, j - 1))});
            f.add_clause({neg(map.state_var(d, i, C)), ~symbol, pos(map.sink_var())});
            f.add_clause({neg(map.state_var(d, i, -C)), symbol, pos(map.sink_var())});
        }
        for (int i = 1; i <= steps + 1; ++i) {
            std::vector<Lit> at_least_one;
            at_least_one.reserve(static_cast<std::size_t>(2 * C + 1));
            for (int j = -C; j <= C; ++j) at_least_one.push_back(pos(map.state_var(d, i, j)));
            f.add_clause(at_least_one);
            for (int j1 = -C; j1 <= C; ++j1)
                for (int j2 = j1 + 1; j2 <= C; ++j2)
                    f.add_clause({neg(map.state_var(d, i, j1)), neg(map.state_var(d, i, j2))});
        }
    }
    return {std::move(f), std::move(map)};
}

namespace detail {

/// Literals falsifying the bit pattern of counter value j at (d, i); any
/// clause containing them is vacuous unless the position holds exactly j.
inline std::vector<Lit> pattern_guard(const VarMap& map, int d, int i, int j) {
    const int width = map.bits_per_state();
    std::vector<Lit> guard;
    guard.reserve(static_cast<std::size_t>(width) + 2);
    for (int b = 0; b < width; ++b)
        guard.push_back(Lit(map.state_bit_var(d, i, b), !state_bit_value(j, b, width)));
    return guard;
}

}  // namespace detail

/// Binary encoding: each trace position holds one sign/magnitude bit vector
/// instead of a one-hot block. Every transition implication becomes one
/// clause per target bit; patterns that match no counter state (the negated
/// zero, and magnitudes above the bound) are forbidden at every position.
inline std::pair<Formula, VarMap> encode_binary(const EncodeParams& params) {
    params.validate();
    VarMap map(params.length, params.bound, params.effective_max_d(), Encoding::binary);
    Formula f(map.num_vars());
    const int C = params.bound;
    const int width = map.bits_per_state();

    f.add_clause({neg(map.sink_var())});
    for (int d = 1; d <= map.max_d(); ++d) {
        const int steps = params.length / d;
        for (int b = 0; b < width; ++b)
            f.add_clause({neg(map.state_bit_var(d, 1, b))});  // counter 0 is all-bits-false
        for (int i = 1; i <= steps; ++i) {
            const Lit symbol = pos(map.symbol_var(i * d));
            for (int j = -C; j <= C; ++j) {
                std::vector<Lit> guard = detail::pattern_guard(map, d, i, j);
                if (j < C) {
                    for (int b = 0; b < width; ++b) {
                        std::vector<Lit> clause = guard;
                        clause.push_back(~symbol);
                        clause.push_back(
                            Lit(map.state_bit_var(d, i + 1, b), state_bit_value(j + 1, b, width)));
                        f.add_clause(clause);
                    }
                } else {
                    std::vector<Lit> clause = guard;
                    clause.push_back(~symbol);
                    clause.push_back(pos(map.sink_var()));
                    f.add_clause(clause);
                }
                if (j > -C) {
                    for (int b = 0; b < width; ++b) {
                        std::vector<Lit> clause = guard;
                        clause.push_back(symbol);
                        clause.push_back(
                            Lit(map.state_bit_var(d, i + 1, b), state_bit_value(j - 1, b, width)));
                        f.add_clause(clause);
                    }
                } else {
                    std::vector<Lit> clause = guard;
                    clause.push_back(symbol);
                    clause.push_back(pos(map.sink_var()));
                    f.add_clause(clause);
                }
            }
        }
        for (int i = 1; i <= steps + 1; ++i) {
            for (std::uint32_t pattern = 0; pattern < (1u << width); ++pattern) {
                if (counter_from_pattern(pattern, width, C)) continue;
                std::vector<Lit> clause;
                clause.reserve(static_cast<std::size_t>(width));
                for (int b = 0; b < width; ++b) {
                    bool bit_set = ((pattern >> b) & 1u) != 0;
                    clause.push_back(Lit(map.state_bit_var(d, i, b), !bit_set));
                }
                f.add_clause(clause);
            }
        }
    }
    return {std::move(f), std::move(map)};
}

inline std::pair<Formula, VarMap> encode(const EncodeParams& params) {
    return params.encoding == Encoding::unary ? encode_unary(params) : encode_binary(params);
}

struct FormulaStats {
    int num_vars = 0;
    std::size_t num_clauses = 0;
};

inline FormulaStats stats(const Formula& f) {
    return {f.num_vars(), f.num_clauses()};
}

}  // namespace edp
