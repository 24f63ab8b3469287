#pragma once

#include <cassert>
#include <vector>

#include "edp/sequence.hpp"

namespace edp {

/// State of the bounded-counter acceptor for a bound C: either a counter
/// value in [-C, C] or the absorbing accepting sink that is entered the
/// moment a prefix sum leaves that window.
class AutomatonState {
public:
    static AutomatonState counter(int value) { return AutomatonState(false, value); }
    static AutomatonState sink() { return AutomatonState(true, 0); }

    bool is_sink() const { return sink_; }

    int counter_value() const {
        assert(!sink_);
        return value_;
    }

    friend bool operator==(const AutomatonState&, const AutomatonState&) = default;

private:
    AutomatonState(bool sink, int value) : sink_(sink), value_(value) {}

    bool sink_;
    int value_;
};

/// All states visited while reading a word, one per position; states[k] is
/// the state after k symbols, so states[0] is always counter(0).
struct Trace {
    std::vector<AutomatonState> states;
    bool accepted = false;
};

inline AutomatonState step(int bound, AutomatonState state, int symbol) {
    assert(bound >= 1);
    assert(symbol == 1 || symbol == -1);
    if (state.is_sink()) return AutomatonState::sink();
    int j = state.counter_value();
    assert(j >= -bound && j <= bound);
    if (symbol > 0)
        return j == bound ? AutomatonState::sink() : AutomatonState::counter(j + 1);
    return j == -bound ? AutomatonState::sink() : AutomatonState::counter(j - 1);
}

inline Trace run(int bound, const Sequence& word) {
    Trace trace;
    trace.states.reserve(static_cast<std::size_t>(word.length()) + 1);
    AutomatonState state = AutomatonState::counter(0);
    trace.states.push_back(state);
    for (int i = 1; i <= word.length(); ++i) {
        state = step(bound, state, word.at(i));
        trace.states.push_back(state);
    }
    trace.accepted = state.is_sink();
    return trace;
}

}  // namespace edp
