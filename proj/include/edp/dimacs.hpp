#pragma once

#include <cctype>
#include <charconv>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "edp/cnf.hpp"
#include "edp/outcome.hpp"

namespace edp {

struct DimacsError : std::runtime_error {
    DimacsError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
    int line;
};

/// Serializes a formula in DIMACS CNF. Comment lines, if any, are written
/// first, each prefixed with "c ". The body is byte-stable: single spaces,
/// every clause 0-terminated on its own line.
inline std::string emit_dimacs(const Formula& f, std::span<const std::string> comments = {}) {
    std::string out;
    for (const std::string& c : comments) {
        out += "c ";
        out += c;
        out += '\n';
    }
    out += "p cnf " + std::to_string(f.num_vars()) + ' ' + std::to_string(f.num_clauses()) + '\n';
    for (std::size_t i = 0; i < f.num_clauses(); ++i) {
        for (Lit l : f.clause(i)) {
            out += std::to_string(l.to_dimacs());
            out += ' ';
        }
        out += "0\n";
    }
    return out;
}

struct DimacsFile {
    Formula formula;
    std::vector<std::string> comments;
};

namespace detail {

inline bool parse_int(std::string_view token, long long& value) {
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    return ec == std::errc() && ptr == token.data() + token.size();
}

}  // namespace detail

/// Parses DIMACS CNF text. Comments may appear before the header and between
/// clauses; clause and variable counts are cross-checked against the header.
inline DimacsFile parse_dimacs(std::string_view text) {
    DimacsFile result;
    long long declared_vars = -1;
    long long declared_clauses = -1;
    std::vector<Lit> current;
    std::size_t clauses_done = 0;
    int line_no = 0;

    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        if (!line.empty() && line[0] == 'c') {
            std::string_view body = line.substr(1);
            if (!body.empty() && body[0] == ' ') body.remove_prefix(1);
            result.comments.emplace_back(body);
        } else if (!line.empty() && line[0] == 'p') {
            if (declared_vars >= 0) throw DimacsError(line_no, "duplicate header");
            std::string_view rest = line;
            std::vector<std::string_view> tokens;
            while (!rest.empty()) {
                std::size_t start = rest.find_first_not_of(" \t");
                if (start == std::string_view::npos) break;
                rest.remove_prefix(start);
                std::size_t end = rest.find_first_of(" \t");
                if (end == std::string_view::npos) end = rest.size();
                tokens.push_back(rest.substr(0, end));
                rest.remove_prefix(end);
            }
            if (tokens.size() != 4 || tokens[0] != "p" || tokens[1] != "cnf" ||
                !detail::parse_int(tokens[2], declared_vars) ||
                !detail::parse_int(tokens[3], declared_clauses) || declared_vars < 0 ||
                declared_clauses < 0)
                throw DimacsError(line_no, "malformed header, expected 'p cnf <vars> <clauses>'");
            result.formula = Formula(static_cast<int>(declared_vars));
        } else {
            std::string_view rest = line;
            while (!rest.empty()) {
                std::size_t start = rest.find_first_not_of(" \t");
                if (start == std::string_view::npos) break;
                rest.remove_prefix(start);
                std::size_t end = rest.find_first_of(" \t");
                if (end == std::string_view::npos) end = rest.size();
                std::string_view token = rest.substr(0, end);
                rest.remove_prefix(end);

                if (declared_vars < 0) throw DimacsError(line_no, "clause before header");
                long long value = 0;
                if (!detail::parse_int(token, value))
                    throw DimacsError(line_no, "invalid literal token");
                if (value == 0) {
                    if (current.empty()) throw DimacsError(line_no, "empty clause");
                    if (static_cast<long long>(clauses_done) == declared_clauses)
                        throw DimacsError(line_no, "more clauses than declared");
                    result.formula.add_clause(current);
                    current.clear();
                    ++clauses_done;
                } else {
                    long long var = value < 0 ? -value : value;
                    if (var > declared_vars)
                        throw DimacsError(line_no, "literal exceeds declared variable count");
                    current.push_back(Lit::from_dimacs(static_cast<std::int32_t>(value)));
                }
            }
        }

        if (eol == text.size()) break;
        pos = eol + 1;
    }

    if (declared_vars < 0) throw DimacsError(line_no, "missing header");
    if (!current.empty()) throw DimacsError(line_no, "clause missing terminating 0");
    if (static_cast<long long>(clauses_done) != declared_clauses)
        throw DimacsError(line_no, "fewer clauses than declared");
    return result;
}

/// Result of scanning solver output: the verdict, a total assignment
/// (unmentioned variables defaulted to false), and which variables the
/// v-lines actually mentioned.
struct ParsedSolverOutput {
    SolveOutcome outcome;
    std::vector<std::uint8_t> mentioned;  // indexed by variable, entry 0 unused
};

/// Interprets SAT-competition style output: an "s" status line plus, for
/// satisfiable results, "v" lines of signed literals terminated by 0.
/// Anything that fits no case comes back as unknown.
inline ParsedSolverOutput parse_solver_output(std::string_view text, int num_vars) {
    ParsedSolverOutput result;
    result.mentioned.assign(static_cast<std::size_t>(num_vars) + 1, 0);

    std::optional<SolveStatus> status;
    Assignment model(num_vars);
    std::vector<std::int8_t> sign(static_cast<std::size_t>(num_vars) + 1, 0);
    bool model_done = false;
    bool garbage = false;

    std::size_t pos = 0;
    while (pos <= text.size() && !garbage) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        if (line.rfind("s ", 0) == 0 && !status) {
            std::string_view verdict = line.substr(2);
            while (!verdict.empty() && verdict.back() == ' ') verdict.remove_suffix(1);
            if (verdict == "SATISFIABLE")
                status = SolveStatus::sat;
            else if (verdict == "UNSATISFIABLE")
                status = SolveStatus::unsat;
            else
                garbage = true;
        } else if (line.rfind("v", 0) == 0 && (line.size() == 1 || line[1] == ' ')) {
            std::string_view rest = line.substr(1);
            while (!rest.empty() && !model_done) {
                std::size_t start = rest.find_first_not_of(" \t");
                if (start == std::string_view::npos) break;
                rest.remove_prefix(start);
                std::size_t end = rest.find_first_of(" \t");
                if (end == std::string_view::npos) end = rest.size();
                std::string_view token = rest.substr(0, end);
                rest.remove_prefix(end);

                long long value = 0;
                if (!detail::parse_int(token, value)) {
                    garbage = true;
                    break;
                }
                if (value == 0) {
                    model_done = true;
                    break;
                }
                long long var = value < 0 ? -value : value;
                if (var > num_vars) {
                    garbage = true;
                    break;
                }
                std::int8_t s = value > 0 ? 1 : -1;
                if (sign[static_cast<std::size_t>(var)] != 0 &&
                    sign[static_cast<std::size_t>(var)] != s) {
                    garbage = true;  // contradictory v-lines
                    break;
                }
                sign[static_cast<std::size_t>(var)] = s;
                result.mentioned[static_cast<std::size_t>(var)] = 1;
                model.set(static_cast<int>(var), value > 0);
            }
        }

        if (eol == text.size()) break;
        pos = eol + 1;
    }

    if (garbage || !status) {
        result.outcome = SolveOutcome::unknown(UnknownReason::parse);
        return result;
    }
    if (*status == SolveStatus::unsat) {
        result.outcome = SolveOutcome::unsat();
        return result;
    }
    result.outcome = SolveOutcome::sat(std::move(model));
    return result;
}

/// Reads a model file: either raw solver output (with an "s" line) or a bare
/// list of signed literals, 0 terminators and comment lines ignored.
inline ParsedSolverOutput parse_model_text(std::string_view text, int num_vars) {
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        if (line.rfind("s ", 0) == 0) return parse_solver_output(text, num_vars);
        if (eol == text.size()) break;
        pos = eol + 1;
    }

    ParsedSolverOutput result;
    result.mentioned.assign(static_cast<std::size_t>(num_vars) + 1, 0);
    Assignment model(num_vars);

    std::size_t line_start = 0;
    int line_no = 0;
    while (line_start <= text.size()) {
        std::size_t eol = text.find('\n', line_start);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(line_start, eol - line_start);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty() && line[0] != 'c') {
            std::string_view rest = line;
            if (line[0] == 'v') rest = line.substr(1);
            while (!rest.empty()) {
                std::size_t start = rest.find_first_not_of(" \t");
                if (start == std::string_view::npos) break;
                rest.remove_prefix(start);
                std::size_t end = rest.find_first_of(" \t");
                if (end == std::string_view::npos) end = rest.size();
                std::string_view token = rest.substr(0, end);
                rest.remove_prefix(end);

                long long value = 0;
                if (!detail::parse_int(token, value))
                    throw DimacsError(line_no, "invalid literal in model file");
                if (value == 0) continue;
                long long var = value < 0 ? -value : value;
                if (var > num_vars)
                    throw DimacsError(line_no, "model literal exceeds variable count");
                result.mentioned[static_cast<std::size_t>(var)] = 1;
                model.set(static_cast<int>(var), value > 0);
            }
        }
        if (eol == text.size()) break;
        line_start = eol + 1;
    }

    result.outcome = SolveOutcome::sat(std::move(model));
    return result;
}

/// Fails unless every variable 1..upto was explicitly mentioned; used before
/// decoding so an omitted symbol variable can never silently default.
inline void require_mentioned(const ParsedSolverOutput& parsed, int upto) {
    for (int v = 1; v <= upto; ++v) {
        if (!parsed.mentioned[static_cast<std::size_t>(v)])
            throw std::runtime_error("model does not assign variable " + std::to_string(v) +
                                     "; sequence would be ambiguous");
    }
}

}  // namespace edp
