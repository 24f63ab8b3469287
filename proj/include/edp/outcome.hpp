#pragma once

#include <string_view>
#include <utility>

#include "edp/cnf.hpp"

namespace edp {

enum class SolveStatus { sat, unsat, unknown };

enum class UnknownReason { budget, parse, crash };

inline std::string_view to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::sat: return "SAT";
        case SolveStatus::unsat: return "UNSAT";
        default: return "UNKNOWN";
    }
}

inline std::string_view to_string(UnknownReason r) {
    switch (r) {
        case UnknownReason::budget: return "budget";
        case UnknownReason::parse: return "parse";
        default: return "crash";
    }
}

/// Verdict of a solving attempt. A sat outcome always carries a total
/// assignment; an unknown outcome says why no verdict was reached.
struct SolveOutcome {
    SolveStatus status = SolveStatus::unknown;
    UnknownReason reason = UnknownReason::parse;
    Assignment model;

    static SolveOutcome sat(Assignment m) {
        SolveOutcome o;
        o.status = SolveStatus::sat;
        o.model = std::move(m);
        return o;
    }

    static SolveOutcome unsat() {
        SolveOutcome o;
        o.status = SolveStatus::unsat;
        return o;
    }

    static SolveOutcome unknown(UnknownReason r) {
        SolveOutcome o;
        o.status = SolveStatus::unknown;
        o.reason = r;
        return o;
    }
};

}  // namespace edp
