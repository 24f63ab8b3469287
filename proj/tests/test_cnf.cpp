#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <string>
#include <vector>

#include "edp/cnf.hpp"
#include "edp/dimacs.hpp"
#include "edp/varmap.hpp"

using edp::Assignment;
using edp::DimacsError;
using edp::DimacsFile;
using edp::emit_dimacs;
using edp::Encoding;
using edp::Formula;
using edp::Lit;
using edp::neg;
using edp::parse_dimacs;
using edp::parse_model_text;
using edp::parse_solver_output;
using edp::ParsedSolverOutput;
using edp::pos;
using edp::Prop;
using edp::require_mentioned;
using edp::SolveStatus;
using edp::UnknownReason;
using edp::VarMap;

TEST_CASE("literals keep the DIMACS sign convention") {
    CHECK(pos(3).to_dimacs() == 3);
    CHECK(neg(3).to_dimacs() == -3);
    CHECK(pos(3).var() == 3);
    CHECK(neg(3).var() == 3);
    CHECK(pos(3).positive());
    CHECK_FALSE(neg(3).positive());
    CHECK((~pos(3)) == neg(3));
    CHECK((~neg(3)) == pos(3));
    CHECK(Lit::from_dimacs(-7) == neg(7));
}

TEST_CASE("formulas validate clauses as they are added") {
    Formula f(2);
    f.add_clause({pos(1), neg(2)});
    f.add_clause({pos(2)});
    REQUIRE(f.num_clauses() == 2);
    CHECK(f.num_vars() == 2);
    CHECK(f.num_literals() == 3);
    REQUIRE(f.clause(0).size() == 2);
    CHECK(f.clause(0)[0] == pos(1));
    CHECK(f.clause(0)[1] == neg(2));
    CHECK(f.clause(1)[0] == pos(2));

    CHECK_THROWS_AS(f.add_clause(std::initializer_list<Lit>{}), std::invalid_argument);
    CHECK_THROWS_AS(f.add_clause({pos(3)}), std::invalid_argument);
    CHECK_THROWS_AS(Formula(-1), std::invalid_argument);
}

TEST_CASE("assignments evaluate literals and formulas") {
    Assignment a(3);
    a.set(1, true);
    a.set(3, true);
    CHECK(a.value(1));
    CHECK_FALSE(a.value(2));
    CHECK(a.value(pos(1)));
    CHECK(a.value(neg(2)));
    CHECK_FALSE(a.value(neg(3)));

    Formula f(3);
    f.add_clause({pos(1), pos(2)});
    f.add_clause({neg(2), pos(3)});
    CHECK(a.satisfies(f));
    f.add_clause({pos(2)});
    CHECK_FALSE(a.satisfies(f));
}

TEST_CASE("DIMACS text is emitted byte for byte") {
    Formula f(2);
    f.add_clause({pos(1), neg(2)});
    f.add_clause({pos(2)});
    CHECK(emit_dimacs(f) == "p cnf 2 2\n1 -2 0\n2 0\n");
    CHECK(emit_dimacs(Formula(0)) == "p cnf 0 0\n");

    const std::string comments[] = {"first", "second"};
    CHECK(emit_dimacs(Formula(1), comments) == "c first\nc second\np cnf 1 0\n");
}

TEST_CASE("DIMACS parsing accepts comments, blank lines and split clauses") {
    const DimacsFile file = parse_dimacs("c hello\np cnf 3 2\n1 -2\n0\n\nc mid\n2 3 0\n");
    CHECK(file.comments == std::vector<std::string>{"hello", "mid"});
    REQUIRE(file.formula.num_clauses() == 2);
    CHECK(file.formula.num_vars() == 3);
    CHECK(file.formula.clause(0)[1] == neg(2));
    CHECK(file.formula.clause(1)[1] == pos(3));
}

TEST_CASE("DIMACS parse errors carry the offending line number") {
    auto line_of = [](const std::string& text) -> int {
        try {
            parse_dimacs(text);
        } catch (const DimacsError& e) {
            return e.line;
        }
        return -1;
    };
    CHECK(line_of("p cnf 1 1\np cnf 1 1\n") == 2);          // duplicate header
    CHECK(line_of("1 0\np cnf 1 1\n") == 1);                 // clause before header
    CHECK(line_of("p cnf x 1\n") == 1);                      // malformed header
    CHECK(line_of("p cnf 2 1\n1 two 0\n") == 2);             // invalid token
    CHECK(line_of("p cnf 2 1\n0\n") == 2);                   // empty clause
    CHECK(line_of("p cnf 2 1\n1 0\n2 0\n") == 3);            // more clauses than declared
    CHECK(line_of("p cnf 2 2\n1 0\n") == 3);                 // fewer clauses: noticed at EOF
    CHECK(line_of("p cnf 2 1\n3 0\n") == 2);                 // literal beyond declared count
    CHECK(line_of("p cnf 2 1\n1 2\n") == 3);                 // missing final 0: noticed at EOF
    CHECK(line_of("1 0\n") == 1);                            // no header at all
}

TEST_CASE("emit and parse are inverse on random formulas") {
    std::mt19937 rng(20260825u);
    for (int round = 0; round < 1000; ++round) {
        const int num_vars = 1 + static_cast<int>(rng() % 30);
        Formula f(num_vars);
        const int num_clauses = static_cast<int>(rng() % 20);
        for (int c = 0; c < num_clauses; ++c) {
            std::vector<Lit> clause;
            const int len = 1 + static_cast<int>(rng() % 6);
            for (int k = 0; k < len; ++k) {
                const int var = 1 + static_cast<int>(rng() % static_cast<unsigned>(num_vars));
                clause.push_back(Lit(var, rng() % 2 == 0));
            }
            f.add_clause(clause);
        }
        const DimacsFile back = parse_dimacs(emit_dimacs(f));
        REQUIRE(back.formula == f);
        REQUIRE(back.comments.empty());
    }
}

TEST_CASE("solver output: SAT with model") {
    const ParsedSolverOutput out = parse_solver_output("s SATISFIABLE\nv 1 -2 0\n", 2);
    REQUIRE(out.outcome.status == SolveStatus::sat);
    CHECK(out.outcome.model.value(1));
    CHECK_FALSE(out.outcome.model.value(2));
    CHECK(out.mentioned[1] == 1);
    CHECK(out.mentioned[2] == 1);
}

TEST_CASE("solver output: model spread over several v-lines") {
    const ParsedSolverOutput out =
        parse_solver_output("c preamble\ns SATISFIABLE\nv -1 2\nv 3\nv 0\n", 3);
    REQUIRE(out.outcome.status == SolveStatus::sat);
    CHECK_FALSE(out.outcome.model.value(1));
    CHECK(out.outcome.model.value(2));
    CHECK(out.outcome.model.value(3));
}

TEST_CASE("solver output: omitted variables default to false but are flagged") {
    const ParsedSolverOutput out = parse_solver_output("s SATISFIABLE\nv 1 0\n", 3);
    REQUIRE(out.outcome.status == SolveStatus::sat);
    CHECK_FALSE(out.outcome.model.value(2));
    CHECK(out.mentioned[1] == 1);
    CHECK(out.mentioned[2] == 0);
    CHECK_NOTHROW(require_mentioned(out, 1));
    CHECK_THROWS_AS(require_mentioned(out, 2), std::runtime_error);
}

TEST_CASE("solver output: UNSAT and failure shapes") {
    CHECK(parse_solver_output("s UNSATISFIABLE\n", 2).outcome.status == SolveStatus::unsat);

    auto unknown_with = [](const std::string& text) {
        const ParsedSolverOutput out = parse_solver_output(text, 2);
        REQUIRE(out.outcome.status == SolveStatus::unknown);
        return out.outcome.reason;
    };
    CHECK(unknown_with("") == UnknownReason::parse);
    CHECK(unknown_with("c timeout\n") == UnknownReason::parse);
    CHECK(unknown_with("s MAYBE\n") == UnknownReason::parse);
    CHECK(unknown_with("s SATISFIABLE\nv 1 -1 0\n") == UnknownReason::parse);   // contradictory
    CHECK(unknown_with("s SATISFIABLE\nv 9 0\n") == UnknownReason::parse);      // out of range
    CHECK(unknown_with("s SATISFIABLE\nv one 0\n") == UnknownReason::parse);    // junk token
}

TEST_CASE("solver output: the first s-line wins") {
    const ParsedSolverOutput out =
        parse_solver_output("s SATISFIABLE\ns UNSATISFIABLE\nv 1 2 0\n", 2);
    CHECK(out.outcome.status == SolveStatus::sat);
}

TEST_CASE("model files accept bare literals, comments, and v prefixes") {
    const ParsedSolverOutput bare = parse_model_text("c a comment\n1 -2\n3 0\n", 3);
    REQUIRE(bare.outcome.status == SolveStatus::sat);
    CHECK(bare.outcome.model.value(1));
    CHECK_FALSE(bare.outcome.model.value(2));
    CHECK(bare.outcome.model.value(3));

    const ParsedSolverOutput prefixed = parse_model_text("v 1 -2 0\n", 2);
    REQUIRE(prefixed.outcome.status == SolveStatus::sat);
    CHECK(prefixed.outcome.model.value(1));

    const ParsedSolverOutput full = parse_model_text("s UNSATISFIABLE\n", 2);
    CHECK(full.outcome.status == SolveStatus::unsat);

    CHECK_THROWS_AS(parse_model_text("1 junk 0\n", 2), DimacsError);
    CHECK_THROWS_AS(parse_model_text("5 0\n", 2), DimacsError);
}

TEST_CASE("binary state widths cover bound plus sign") {
    CHECK(edp::state_width(1) == 2);
    CHECK(edp::state_width(2) == 3);
    CHECK(edp::state_width(3) == 3);
    CHECK(edp::state_width(4) == 4);
}

TEST_CASE("sign/magnitude bit patterns round-trip through counter values") {
    for (int bound : {1, 2, 3, 5}) {
        const int width = edp::state_width(bound);
        for (int j = -bound; j <= bound; ++j) {
            std::uint32_t pattern = 0;
            for (int b = 0; b < width; ++b)
                if (edp::state_bit_value(j, b, width)) pattern |= 1u << b;
            INFO("bound=" << bound << " j=" << j);
            REQUIRE(edp::counter_from_pattern(pattern, width, bound) == j);
        }
    }
    // patterns that decode to nothing: negated zero and oversized magnitudes
    CHECK_FALSE(edp::counter_from_pattern(0b10, 2, 1).has_value());
    CHECK_FALSE(edp::counter_from_pattern(0b100, 3, 2).has_value());
    CHECK_FALSE(edp::counter_from_pattern(0b011, 3, 2).has_value());
    CHECK_FALSE(edp::counter_from_pattern(0b111, 3, 2).has_value());
}

TEST_CASE("variable layout is a bijection") {
    for (Encoding enc : {Encoding::unary, Encoding::binary}) {
        for (int l : {1, 4, 9}) {
            for (int C : {1, 2}) {
                const VarMap map(l, C, l / (C + 1), enc);
                std::vector<bool> hit(static_cast<std::size_t>(map.num_vars()) + 1, false);
                auto claim = [&](int v) {
                    REQUIRE(v >= 1);
                    REQUIRE(v <= map.num_vars());
                    REQUIRE_FALSE(hit[static_cast<std::size_t>(v)]);
                    hit[static_cast<std::size_t>(v)] = true;
                };
                for (int i = 1; i <= l; ++i) {
                    claim(map.symbol_var(i));
                    REQUIRE(map.decode_var(i) == Prop{Prop::Kind::symbol, i});
                }
                claim(map.sink_var());
                REQUIRE(map.decode_var(map.sink_var()).kind == Prop::Kind::sink);
                for (int d = 1; d <= map.max_d(); ++d) {
                    for (int i = 1; i <= map.positions(d); ++i) {
                        if (enc == Encoding::unary) {
                            for (int j = -C; j <= C; ++j) {
                                const int v = map.state_var(d, i, j);
                                claim(v);
                                const Prop p = map.decode_var(v);
                                REQUIRE(p.kind == Prop::Kind::state);
                                REQUIRE(p.d == d);
                                REQUIRE(p.i == i);
                                REQUIRE(p.j == j);
                            }
                        } else {
                            for (int b = 0; b < map.bits_per_state(); ++b) {
                                const int v = map.state_bit_var(d, i, b);
                                claim(v);
                                const Prop p = map.decode_var(v);
                                REQUIRE(p.kind == Prop::Kind::state_bit);
                                REQUIRE(p.d == d);
                                REQUIRE(p.i == i);
                                REQUIRE(p.bit == b);
                            }
                        }
                    }
                }
                for (std::size_t v = 1; v < hit.size(); ++v) REQUIRE(hit[v]);
            }
        }
    }
}

TEST_CASE("symbol variables are the sequence indices; the sink follows them") {
    const VarMap map(10, 1, 5, Encoding::binary);
    for (int i = 1; i <= 10; ++i) CHECK(map.symbol_var(i) == i);
    CHECK(map.sink_var() == 11);
    CHECK(map.decode_var(12).kind == Prop::Kind::state_bit);  // first state variable
}

TEST_CASE("metadata comment round-trips through a DIMACS file") {
    const VarMap map(12, 2, 4, Encoding::unary);
    Formula f(map.num_vars());
    f.add_clause({neg(map.sink_var())});
    const std::string comment[] = {map.metadata_comment()};
    const DimacsFile file = parse_dimacs(emit_dimacs(f, comment));
    const std::optional<VarMap> back = VarMap::from_metadata(file.comments);
    REQUIRE(back.has_value());
    CHECK(*back == map);
    CHECK(back->metadata_comment() == "edp l=12 C=2 max-d=4 encoding=unary layout=1");

    const std::vector<std::string> junk = {"not metadata", "edp l=0 C=1 max-d=0 layout=1"};
    CHECK_FALSE(VarMap::from_metadata(junk).has_value());
}

TEST_CASE("variable layout rejects out-of-range construction") {
    CHECK_THROWS_AS(VarMap(0, 1, 0, Encoding::unary), std::invalid_argument);
    CHECK_THROWS_AS(VarMap(4, 0, 1, Encoding::unary), std::invalid_argument);
    CHECK_THROWS_AS(VarMap(4, 1, 3, Encoding::unary), std::invalid_argument);  // > floor(4/2)
    CHECK_NOTHROW(VarMap(4, 1, 0, Encoding::unary));
    CHECK_NOTHROW(VarMap(1, 2, 0, Encoding::binary));
}
