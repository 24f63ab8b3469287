#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>

#include "edp/decoder.hpp"
#include "edp/encoder.hpp"
#include "edp/external.hpp"
#include "edp/solver.hpp"

using edp::ExternalResult;
using edp::Formula;
using edp::Lit;
using edp::neg;
using edp::pos;
using edp::SolveStatus;
using edp::UnknownReason;

namespace {

namespace fs = std::filesystem;

Formula contradictory_pair() {
    Formula f(1);
    f.add_clause({pos(1)});
    f.add_clause({neg(1)});
    return f;
}

// Drop a tiny executable script into the temp directory and return a command
// line that runs it. The CNF path the adapter appends is ignored via "$1".
std::string make_stub(const std::string& name, const std::string& body) {
    const fs::path dir = fs::temp_directory_path() / "edp-solver-stubs";
    fs::create_directories(dir);
    const fs::path path = dir / name;
    {
        std::ofstream out(path);
        out << "#!/bin/sh\n" << body;
    }
    fs::permissions(path, fs::perms::owner_all, fs::perm_options::add);
    return path.string();
}

Formula random_formula(std::mt19937& rng) {
    const int vars = std::uniform_int_distribution<int>(1, 10)(rng);
    const int clauses = std::uniform_int_distribution<int>(1, 3 * vars)(rng);
    Formula f(vars);
    std::vector<Lit> clause;
    for (int c = 0; c < clauses; ++c) {
        const int len = std::uniform_int_distribution<int>(1, 4)(rng);
        clause.clear();
        for (int k = 0; k < len; ++k)
            clause.push_back(Lit(std::uniform_int_distribution<int>(1, vars)(rng), rng() & 1));
        f.add_clause(clause);
    }
    return f;
}

}  // namespace

TEST_CASE("a real subprocess solver decides tiny formulas") {
    Formula sat(3);
    sat.add_clause({pos(1), pos(2)});
    const ExternalResult found = edp::solve_external(EDP_TOY_SOLVER_PATH, sat);
    REQUIRE(found.outcome.status == SolveStatus::sat);
    CHECK(found.outcome.model.satisfies(sat));
    CHECK(found.exit_code == 10);
    CHECK_FALSE(found.timed_out);

    const ExternalResult refuted = edp::solve_external(EDP_TOY_SOLVER_PATH, contradictory_pair());
    CHECK(refuted.outcome.status == SolveStatus::unsat);
    CHECK(refuted.exit_code == 20);
}

TEST_CASE("subprocess verdicts agree with the internal solver") {
    std::mt19937 rng(7u);
    for (int round = 0; round < 40; ++round) {
        const Formula f = random_formula(rng);
        const ExternalResult external = edp::solve_external(EDP_TOY_SOLVER_PATH, f);
        const edp::SolveOutcome internal = edp::solve_internal(f);
        INFO("round " << round);
        REQUIRE(external.outcome.status == internal.status);
        if (external.outcome.status == SolveStatus::sat)
            REQUIRE(external.outcome.model.satisfies(f));
    }
}

TEST_CASE("subprocess solving handles an encoded instance end to end") {
    edp::EncodeParams params;
    params.length = 8;
    params.bound = 1;
    params.encoding = edp::Encoding::binary;
    const auto [f, map] = edp::encode(params);
    const ExternalResult r = edp::solve_external(EDP_TOY_SOLVER_PATH, f);
    REQUIRE(r.outcome.status == SolveStatus::sat);
    CHECK(edp::discrepancy(edp::decode_model(map, r.outcome.model)).value <= 1);
}

TEST_CASE("an unsat claim is taken at face value") {
    const std::string stub = make_stub("always_unsat.sh", "echo 's UNSATISFIABLE'\nexit 20\n");
    Formula f(1);
    f.add_clause({pos(1)});
    const ExternalResult r = edp::solve_external(stub, f);
    CHECK(r.outcome.status == SolveStatus::unsat);
}

TEST_CASE("a sat claim is never taken at face value") {
    const std::string stub =
        make_stub("liar.sh", "echo 's SATISFIABLE'\necho 'v 1 0'\nexit 10\n");
    CHECK_THROWS_WITH(edp::solve_external(stub, contradictory_pair()),
                      Catch::Matchers::ContainsSubstring("non-satisfying model"));
}

TEST_CASE("unparseable output from a clean exit is reported as such") {
    const std::string stub = make_stub("garbage.sh", "echo 'no status here'\nexit 0\n");
    const ExternalResult r = edp::solve_external(stub, contradictory_pair());
    CHECK(r.outcome.status == SolveStatus::unknown);
    CHECK(r.outcome.reason == UnknownReason::parse);
    CHECK(r.exit_code == 0);
    CHECK(r.raw_output == "no status here\n");
}

TEST_CASE("a crash without a status line is distinguished from garbage") {
    const std::string stub = make_stub("crash.sh", "exit 3\n");
    const ExternalResult r = edp::solve_external(stub, contradictory_pair());
    CHECK(r.outcome.status == SolveStatus::unknown);
    CHECK(r.outcome.reason == UnknownReason::crash);
    CHECK(r.exit_code == 3);
}

TEST_CASE("a hung solver is killed at the deadline") {
    const std::string stub = make_stub("sleeper.sh", "sleep 30\n");
    const auto start = std::chrono::steady_clock::now();
    const ExternalResult r =
        edp::solve_external(stub, contradictory_pair(), std::chrono::milliseconds(200));
    const auto elapsed = std::chrono::steady_clock::now() - start;
    CHECK(r.timed_out);
    CHECK(r.outcome.status == SolveStatus::unknown);
    CHECK(r.outcome.reason == UnknownReason::budget);
    CHECK(elapsed < std::chrono::seconds(10));
}

TEST_CASE("command problems raise instead of masquerading as verdicts") {
    CHECK_THROWS_AS(edp::solve_external("", contradictory_pair()), std::invalid_argument);
    CHECK_THROWS_WITH(edp::solve_external("/no/such/binary", contradictory_pair()),
                      Catch::Matchers::ContainsSubstring("cannot execute"));
}

TEST_CASE("commands may carry their own arguments") {
    const std::string stub = make_stub("arg_check.sh",
                                       "if [ \"$1\" = 'expected-arg' ]; then\n"
                                       "  echo 's UNSATISFIABLE'\n"
                                       "else\n"
                                       "  echo 's SATISFIABLE'\n"
                                       "fi\n");
    const ExternalResult r = edp::solve_external(stub + " expected-arg", contradictory_pair());
    CHECK(r.outcome.status == SolveStatus::unsat);
}
