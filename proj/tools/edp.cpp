// Command-line front end: encode instances to DIMACS, solve them with the
// built-in CDCL solver or an external one, decode and verify models, run the
// exhaustive search oracle, and check DRUP certificates.
//
// Results go to stdout so pipelines can consume them; run headers and
// diagnostics go to stderr. Exit codes: 0 affirmative, 1 definitive negative
// (UNSAT, bound exceeded, proof rejected), 2 usage or input error, 3 no
// verdict (budget or solver failure).

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "edp/edp.hpp"

namespace {

constexpr int kAffirmative = 0;
constexpr int kNegative = 1;
constexpr int kUsage = 2;
constexpr int kNoVerdict = 3;

constexpr const char* kSolverEnvVar = "EDP_SOLVER";

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << contents;
    if (!out) throw std::runtime_error("failed writing " + path);
}

struct EncodeArgs {
    int length = 0;
    int disc = 0;
    std::string encoding = "binary";
    std::optional<int> max_d;
    std::string out;
};

edp::EncodeParams to_params(int length, int disc, const std::string& encoding,
                            std::optional<int> max_d) {
    edp::EncodeParams params;
    params.length = length;
    params.bound = disc;
    params.encoding = *edp::encoding_from_string(encoding);  // membership pre-checked
    params.max_d = max_d;
    return params;
}

int run_encode(const EncodeArgs& args) {
    const edp::EncodeParams params = to_params(args.length, args.disc, args.encoding, args.max_d);
    params.validate();
    std::cerr << "encode: length=" << params.length << " disc=" << params.bound
              << " encoding=" << args.encoding << " max-d=" << params.effective_max_d()
              << " out=" << args.out << '\n';
    const auto [formula, map] = edp::encode(params);
    const std::string comment[] = {map.metadata_comment()};
    write_file(args.out, edp::emit_dimacs(formula, comment));
    std::cout << "variables=" << formula.num_vars() << '\n'
              << "clauses=" << formula.num_clauses() << '\n';
    return kAffirmative;
}

struct SolveArgs {
    int length = 0;
    int disc = 0;
    std::string encoding = "binary";
    std::optional<int> max_d;
    std::string solver = "internal";
    std::optional<std::uint64_t> budget;
    std::optional<double> timeout_secs;
    std::string proof_out;
};

int report_outcome(const edp::SolveOutcome& outcome, const edp::VarMap& map, int disc) {
    switch (outcome.status) {
        case edp::SolveStatus::unsat:
            std::cout << "UNSAT\n";
            return kNegative;
        case edp::SolveStatus::unknown:
            std::cout << "UNKNOWN " << edp::to_string(outcome.reason) << '\n';
            return kNoVerdict;
        case edp::SolveStatus::sat:
            break;
    }
    const edp::Sequence seq = edp::decode_model(map, outcome.model);
    const edp::DiscrepancyReport report = edp::discrepancy(seq);
    std::cout << edp::format_sequence(seq) << '\n';
    std::cerr << "verified discrepancy=" << report.value;
    if (report.has_witness())
        std::cerr << " (witness d=" << report.witness_d << " k=" << report.witness_k << ")";
    std::cerr << '\n';
    if (report.value > disc)
        std::cerr << "warning: discrepancy exceeds bound " << disc
                  << "; steps above max-d were not constrained\n";
    return kAffirmative;
}

int run_solve(const SolveArgs& args) {
    const edp::EncodeParams params = to_params(args.length, args.disc, args.encoding, args.max_d);
    params.validate();

    std::string exec_command;
    bool external = false;
    if (args.solver != "internal") {
        external = true;
        if (args.solver == "exec" || args.solver == "exec:") {
            const char* env = std::getenv(kSolverEnvVar);
            if (env == nullptr || *env == '\0')
                throw std::runtime_error(std::string("--solver exec needs a command or ") +
                                         kSolverEnvVar + " set");
            exec_command = env;
        } else if (args.solver.rfind("exec:", 0) == 0) {
            exec_command = args.solver.substr(5);
        } else {
            throw std::runtime_error("unknown solver '" + args.solver +
                                     "' (expected internal or exec:CMD)");
        }
    }

    std::cerr << "solve: length=" << params.length << " disc=" << params.bound
              << " encoding=" << args.encoding << " max-d=" << params.effective_max_d()
              << " solver=" << (external ? "exec:" + exec_command : std::string("internal"))
              << " budget=";
    if (args.budget)
        std::cerr << *args.budget;
    else
        std::cerr << "none";
    std::cerr << " timeout=";
    if (args.timeout_secs)
        std::cerr << *args.timeout_secs << 's';
    else
        std::cerr << "none";
    std::cerr << '\n';

    const auto [formula, map] = edp::encode(params);
    if (external) {
        std::optional<std::chrono::milliseconds> timeout;
        if (args.timeout_secs)
            timeout = std::chrono::milliseconds(std::llround(*args.timeout_secs * 1000.0));
        const edp::ExternalResult result = edp::solve_external(exec_command, formula, timeout);
        if (result.timed_out) std::cerr << "external solver timed out and was killed\n";
        return report_outcome(result.outcome, map, args.disc);
    }

    edp::CdclConfig config;
    if (args.budget) config.max_conflicts = *args.budget;
    config.log_proof = !args.proof_out.empty();
    edp::CdclSolver solver(formula, config);
    const edp::SolveOutcome outcome = solver.solve();
    std::cerr << "conflicts=" << solver.stats().conflicts
              << " decisions=" << solver.stats().decisions
              << " propagations=" << solver.stats().propagations << '\n';
    if (!args.proof_out.empty()) {
        if (outcome.status == edp::SolveStatus::unsat) {
            write_file(args.proof_out, edp::emit_drup(solver.proof()));
            std::cerr << "proof written to " << args.proof_out << '\n';
        } else {
            std::cerr << "no proof written: outcome is not UNSAT\n";
        }
    }
    return report_outcome(outcome, map, args.disc);
}

struct VerifyArgs {
    std::string seq;
    int disc = 0;
};

int run_verify(const VerifyArgs& args) {
    std::cerr << "verify: seq=" << args.seq << " disc=" << args.disc << '\n';
    edp::Sequence s;
    try {
        s = edp::parse_sequence(read_file(args.seq));
    } catch (const edp::SequenceParseError& e) {
        std::cerr << "error: bad sequence character at byte " << e.position << '\n';
        return kUsage;
    }
    const edp::DiscrepancyReport report = edp::discrepancy(s);
    std::cout << "discrepancy=" << report.value << '\n';
    if (report.has_witness())
        std::cout << "witness d=" << report.witness_d << " k=" << report.witness_k << '\n';
    else
        std::cout << "witness none\n";
    return report.value <= args.disc ? kAffirmative : kNegative;
}

struct DecodeArgs {
    std::string cnf;
    std::string model;
};

int run_decode(const DecodeArgs& args) {
    std::cerr << "decode: cnf=" << args.cnf << " model=" << args.model << '\n';
    const edp::DimacsFile file = edp::parse_dimacs(read_file(args.cnf));
    const std::optional<edp::VarMap> map = edp::VarMap::from_metadata(file.comments);
    if (!map)
        throw std::runtime_error("CNF has no instance metadata comment; cannot locate "
                                 "sequence variables");
    const edp::ParsedSolverOutput parsed =
        edp::parse_model_text(read_file(args.model), map->num_vars());
    if (parsed.outcome.status != edp::SolveStatus::sat)
        throw std::runtime_error("model file contains no satisfying assignment");
    edp::require_mentioned(parsed, map->length());
    std::cout << edp::format_sequence(edp::decode_model(*map, parsed.outcome.model)) << '\n';
    return kAffirmative;
}

struct OracleArgs {
    int disc = 0;
    std::optional<int> length;
    std::optional<int> max_length_cap;
    std::uint64_t budget = edp::kDefaultNodeBudget;
};

int run_oracle(const OracleArgs& args) {
    std::cerr << "oracle: disc=" << args.disc;
    if (args.length) std::cerr << " length=" << *args.length;
    if (args.max_length_cap) std::cerr << " max-length=" << *args.max_length_cap;
    std::cerr << " budget=" << args.budget << '\n';

    if (args.length) {
        const edp::SearchResult result = edp::exists_sequence(*args.length, args.disc, args.budget);
        std::cerr << "nodes=" << result.nodes << '\n';
        std::cout << edp::to_string(result.status) << '\n';
        switch (result.status) {
            case edp::SearchStatus::found:
                std::cout << edp::format_sequence(*result.witness) << '\n';
                return kAffirmative;
            case edp::SearchStatus::none:
                return kNegative;
            case edp::SearchStatus::budget_exceeded:
                return kNoVerdict;
        }
    }
    const edp::MaxLengthResult result = edp::max_length(args.disc, *args.max_length_cap, args.budget);
    std::cerr << "nodes=" << result.nodes << '\n';
    if (result.status == edp::SearchStatus::budget_exceeded) {
        std::cout << "budget-exceeded\n";
        return kNoVerdict;
    }
    std::cout << "max-length=" << result.value << '\n';
    if (result.witness && result.witness->length() > 0)
        std::cout << edp::format_sequence(*result.witness) << '\n';
    return kAffirmative;
}

struct CheckRupArgs {
    std::string cnf;
    std::string proof;
};

int run_check_rup(const CheckRupArgs& args) {
    std::cerr << "check-rup: cnf=" << args.cnf << " proof=" << args.proof << '\n';
    const edp::DimacsFile file = edp::parse_dimacs(read_file(args.cnf));
    const edp::RupProof proof = edp::parse_drup(read_file(args.proof));
    const edp::RupCheckResult result = edp::check_rup(file.formula, proof);
    if (result.accepted) {
        std::cout << "accepted\n";
        return kAffirmative;
    }
    if (result.failed_step > 0)
        std::cout << "rejected step=" << result.failed_step << '\n';
    else
        std::cout << "rejected: " << result.detail << '\n';
    return kNegative;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Erdős discrepancy sequences: SAT encodings, solving, and verification"};
    app.require_subcommand(1);

    EncodeArgs encode_args;
    CLI::App* encode = app.add_subcommand("encode", "Write an instance as DIMACS CNF");
    encode->add_option("--length", encode_args.length, "sequence length")->required();
    encode->add_option("--disc", encode_args.disc, "discrepancy bound")->required();
    encode->add_option("--encoding", encode_args.encoding, "state encoding")
        ->check(CLI::IsMember({"unary", "binary"}));
    encode->add_option("--max-d", encode_args.max_d, "largest step to trace");
    encode->add_option("--out", encode_args.out, "output CNF path")->required();

    SolveArgs solve_args;
    CLI::App* solve = app.add_subcommand("solve", "Encode and solve an instance");
    solve->add_option("--length", solve_args.length, "sequence length")->required();
    solve->add_option("--disc", solve_args.disc, "discrepancy bound")->required();
    solve->add_option("--encoding", solve_args.encoding, "state encoding")
        ->check(CLI::IsMember({"unary", "binary"}));
    solve->add_option("--max-d", solve_args.max_d, "largest step to trace");
    solve->add_option("--solver", solve_args.solver,
                      "internal, or exec:CMD for an external solver");
    solve->add_option("--budget", solve_args.budget, "internal solver conflict limit");
    solve->add_option("--timeout", solve_args.timeout_secs, "external solver timeout (seconds)");
    solve->add_option("--proof", solve_args.proof_out,
                      "write a DRUP certificate here when the internal solver proves UNSAT");

    VerifyArgs verify_args;
    CLI::App* verify = app.add_subcommand("verify", "Compute the discrepancy of a sequence file");
    verify->add_option("--seq", verify_args.seq, "sequence file (+/- text)")->required();
    verify->add_option("--disc", verify_args.disc, "bound to compare against")->required();

    DecodeArgs decode_args;
    CLI::App* decode = app.add_subcommand("decode", "Extract the sequence from a model");
    decode->add_option("--cnf", decode_args.cnf, "instance CNF (with metadata comment)")
        ->required();
    decode->add_option("--model", decode_args.model, "model / solver output file")->required();

    OracleArgs oracle_args;
    CLI::App* oracle = app.add_subcommand("oracle", "Exhaustive branch-and-prune search");
    oracle->add_option("--disc", oracle_args.disc, "discrepancy bound")->required();
    CLI::Option* opt_len = oracle->add_option("--length", oracle_args.length, "test one length");
    CLI::Option* opt_cap =
        oracle->add_option("--max-length", oracle_args.max_length_cap, "scan lengths up to cap");
    opt_len->excludes(opt_cap);
    opt_cap->excludes(opt_len);
    oracle->add_option("--budget", oracle_args.budget, "search node budget");

    CheckRupArgs check_args;
    CLI::App* check = app.add_subcommand("check-rup", "Check a DRUP unsatisfiability certificate");
    check->add_option("--cnf", check_args.cnf, "formula the proof refutes")->required();
    check->add_option("--proof", check_args.proof, "DRUP proof file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    try {
        if (encode->parsed()) return run_encode(encode_args);
        if (solve->parsed()) return run_solve(solve_args);
        if (verify->parsed()) return run_verify(verify_args);
        if (decode->parsed()) return run_decode(decode_args);
        if (oracle->parsed()) {
            if (!oracle_args.length && !oracle_args.max_length_cap) {
                std::cerr << "oracle needs --length or --max-length\n";
                return kUsage;
            }
            return run_oracle(oracle_args);
        }
        if (check->parsed()) return run_check_rup(check_args);
    } catch (const edp::DimacsError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
