#pragma once

#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "edp/automaton.hpp"
#include "edp/cnf.hpp"
#include "edp/sequence.hpp"
#include "edp/varmap.hpp"

namespace edp {

/// Read the sequence straight off the symbol variables of a model:
/// variable i true means x_i = +1.
inline Sequence decode_model(const VarMap& map, const Assignment& a) {
    Sequence s;
    for (int i = 1; i <= map.length(); ++i) s.append(a.value(map.symbol_var(i)) ? 1 : -1);
    return s;
}

/// Build the canonical satisfying assignment for a sequence: symbol
/// variables from the signs, every trace replayed through the counter
/// automaton, sink flag false. Throws if some subsequence drives a counter
/// out of [-C, C], i.e. if the sequence does not actually satisfy the bound.
inline Assignment assignment_from_sequence(const VarMap& map, const Sequence& s) {
    if (s.length() != map.length())
        throw std::invalid_argument("sequence length does not match variable layout");
    Assignment a(map.num_vars());
    for (int i = 1; i <= map.length(); ++i) a.set(map.symbol_var(i), s.at(i) > 0);
    a.set(map.sink_var(), false);
    for (int d = 1; d <= map.max_d(); ++d) {
        Trace trace = run(map.bound(), homogeneous_subsequence(s, d));
        if (trace.accepted)
            throw std::invalid_argument("sequence exceeds the bound at step " + std::to_string(d));
        for (int i = 1; i <= map.positions(d); ++i) {
            const int value = trace.states[static_cast<std::size_t>(i) - 1].counter_value();
            if (map.encoding() == Encoding::unary) {
                for (int j = -map.bound(); j <= map.bound(); ++j)
                    a.set(map.state_var(d, i, j), j == value);
            } else {
                const int width = map.bits_per_state();
                for (int b = 0; b < width; ++b)
                    a.set(map.state_bit_var(d, i, b), state_bit_value(value, b, width));
            }
        }
    }
    return a;
}

/// One inconsistency found while auditing a model against the automaton
/// semantics, located by trace step d and position i.
struct AuditViolation {
    int d = 0;
    int i = 0;
    std::string detail;
};

struct AuditReport {
    std::vector<AuditViolation> violations;
    bool ok() const { return violations.empty(); }
};

namespace detail {

/// Counter value claimed by the state variables at (d, i), or nullopt if
/// the assignment picks no state, several states, or a junk bit pattern.
inline std::optional<int> claimed_counter(const VarMap& map, const Assignment& a, int d, int i) {
    if (map.encoding() == Encoding::unary) {
        std::optional<int> found;
        for (int j = -map.bound(); j <= map.bound(); ++j) {
            if (!a.value(map.state_var(d, i, j))) continue;
            if (found) return std::nullopt;
            found = j;
        }
        return found;
    }
    const int width = map.bits_per_state();
    std::uint32_t pattern = 0;
    for (int b = 0; b < width; ++b)
        if (a.value(map.state_bit_var(d, i, b))) pattern |= 1u << b;
    return counter_from_pattern(pattern, width, map.bound());
}

}  // namespace detail

/// Re-derive every trace from the symbol variables alone and compare it to
/// the state variables, independently of the clauses the model came from.
/// A clean report means the model is a faithful automaton execution with
/// the sink unreached; any decode of such a model respects the bound.
inline AuditReport audit_model(const VarMap& map, const Assignment& a) {
    AuditReport report;
    if (a.value(map.sink_var()))
        report.violations.push_back({0, 0, "sink flag is set"});
    for (int d = 1; d <= map.max_d(); ++d) {
        int counter = 0;
        for (int i = 1; i <= map.positions(d); ++i) {
            const std::optional<int> claimed = detail::claimed_counter(map, a, d, i);
            if (!claimed) {
                report.violations.push_back({d, i, "state variables encode no single counter value"});
                break;
            }
            if (*claimed != counter) {
                std::ostringstream msg;
                msg << "state claims counter " << *claimed << " but replay gives " << counter;
                report.violations.push_back({d, i, msg.str()});
                break;
            }
            if (i > map.length() / d) break;
            counter += a.value(map.symbol_var(i * d)) ? 1 : -1;
            if (counter > map.bound() || counter < -map.bound()) {
                std::ostringstream msg;
                msg << "symbol at index " << i * d << " drives the counter to " << counter;
                report.violations.push_back({d, i, msg.str()});
                break;
            }
        }
    }
    return report;
}

}  // namespace edp
