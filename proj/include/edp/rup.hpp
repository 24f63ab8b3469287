#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "edp/cnf.hpp"
#include "edp/dimacs.hpp"

namespace edp {

/// One line of a DRUP certificate: a clause learned by the solver, or a
/// deletion of a clause that is no longer needed for propagation.
struct RupStep {
    bool deletion = false;
    std::vector<Lit> lits;

    bool operator==(const RupStep&) const = default;
};

using RupProof = std::vector<RupStep>;

inline std::string emit_drup(const RupProof& proof) {
    std::string out;
    for (const RupStep& step : proof) {
        if (step.deletion) out += "d ";
        for (Lit l : step.lits) {
            out += std::to_string(l.to_dimacs());
            out += ' ';
        }
        out += "0\n";
    }
    return out;
}

/// Parse DRUP text: one step per line, literals terminated by 0, optional
/// leading "d" for deletions, comment lines starting with 'c' and blank
/// lines skipped. Malformed lines raise DimacsError with the line number.
inline RupProof parse_drup(const std::string& text) {
    RupProof proof;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream tokens(line);
        std::string token;
        if (!(tokens >> token) || token == "c") continue;
        RupStep step;
        if (token == "d") {
            step.deletion = true;
            if (!(tokens >> token)) throw DimacsError(line_no, "deletion line has no literals");
        }
        bool terminated = false;
        while (true) {
            long long value = 0;
            if (!detail::parse_int(token, value) || value < std::numeric_limits<std::int32_t>::min() ||
                value > std::numeric_limits<std::int32_t>::max())
                throw DimacsError(line_no, "invalid literal token '" + token + "'");
            if (value == 0) {
                terminated = true;
                if (tokens >> token) throw DimacsError(line_no, "tokens after terminating 0");
                break;
            }
            step.lits.push_back(Lit::from_dimacs(static_cast<std::int32_t>(value)));
            if (!(tokens >> token)) break;
        }
        if (!terminated) throw DimacsError(line_no, "proof line does not end with 0");
        proof.push_back(std::move(step));
    }
    return proof;
}

struct RupCheckResult {
    bool accepted = false;
    std::size_t failed_step = 0;  // 1-based index of the first failing step; 0 if structural
    std::string detail;
};

struct RupAnalysis {
    RupCheckResult result;
    // For each addition step, the earlier addition steps whose clauses took
    // part in its verification (transitively, via propagation reasons).
    std::vector<std::vector<std::size_t>> step_deps;
    std::optional<std::size_t> first_empty_step;
};

namespace detail {

/// Forward certificate checker. Each step is verified from scratch: assert
/// the negation of its literals on top of the unit clauses of the active
/// database and unit-propagate with occurrence lists and per-clause false
/// counters; the step holds exactly when propagation hits a conflict.
class RupEngine {
    static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  public:
    RupEngine(const Formula& f, const RupProof& proof, bool honor_deletions, bool record_deps)
        : proof_(proof), honor_deletions_(honor_deletions), record_deps_(record_deps) {
        int max_var = f.num_vars();
        for (const RupStep& step : proof)
            for (Lit l : step.lits) max_var = std::max(max_var, l.var());
        occ_.resize(2 * static_cast<std::size_t>(max_var) + 2);
        value_.resize(static_cast<std::size_t>(max_var) + 1, 0);
        reason_.resize(static_cast<std::size_t>(max_var) + 1, kNone);
        for (std::size_t c = 0; c < f.num_clauses(); ++c) {
            auto clause = f.clause(c);
            add_to_pool(std::vector<Lit>(clause.begin(), clause.end()), kNone);
        }
    }

    RupAnalysis run() {
        RupAnalysis out;
        if (record_deps_) out.step_deps.resize(proof_.size());
        if (proof_.empty()) {
            out.result = {false, 0, "proof contains no steps"};
            return out;
        }
        std::optional<std::size_t> last_addition;
        for (std::size_t k = 0; k < proof_.size(); ++k) {
            const RupStep& step = proof_[k];
            if (step.deletion) {
                if (honor_deletions_) deactivate_first_match(step.lits);
                continue;
            }
            last_addition = k;
            if (!verify(step.lits)) {
                out.result = {false, k + 1, "clause is not derivable by unit propagation"};
                return out;
            }
            if (record_deps_) out.step_deps[k] = collect_deps();
            if (step.lits.empty()) {
                if (!out.first_empty_step) out.first_empty_step = k;
            } else {
                add_to_pool(step.lits, k);
            }
        }
        if (!last_addition) {
            out.result = {false, 0, "proof adds no clauses"};
            return out;
        }
        if (!proof_[*last_addition].lits.empty()) {
            out.result = {false, 0, "final proof clause is not the empty clause"};
            return out;
        }
        out.result.accepted = true;
        return out;
    }

  private:
    static std::size_t lit_index(Lit l) {
        return 2 * static_cast<std::size_t>(l.var()) + (l.positive() ? 0 : 1);
    }

    static std::string pool_key(std::vector<Lit> lits) {
        std::sort(lits.begin(), lits.end(),
                  [](Lit a, Lit b) { return a.to_dimacs() < b.to_dimacs(); });
        std::string key;
        key.reserve(lits.size() * sizeof(std::int32_t));
        for (Lit l : lits) {
            const std::int32_t code = l.to_dimacs();
            key.append(reinterpret_cast<const char*>(&code), sizeof(code));
        }
        return key;
    }

    void add_to_pool(std::vector<Lit> lits, std::size_t step) {
        const std::size_t id = pool_.size();
        by_key_[pool_key(lits)].push_back(id);
        for (Lit l : lits) occ_[lit_index(l)].push_back(id);
        pool_.push_back(std::move(lits));
        active_.push_back(1);
        pool_step_.push_back(step);
    }

    void deactivate_first_match(const std::vector<Lit>& lits) {
        auto found = by_key_.find(pool_key(lits));
        if (found == by_key_.end()) return;  // deleting an absent clause is a no-op
        for (std::size_t id : found->second) {
            if (!active_[id]) continue;
            active_[id] = 0;
            return;
        }
    }

    int value_of(Lit l) const {
        const int v = value_[static_cast<std::size_t>(l.var())];
        return l.positive() ? v : -v;
    }

    // Make the literal true; report a conflict when it is already false.
    bool assert_literal(Lit l, std::size_t reason) {
        const int v = value_of(l);
        if (v > 0) return false;
        if (v < 0) {
            conflict_sources_.clear();
            if (reason != kNone) conflict_sources_.push_back(reason);
            const std::size_t prior = reason_[static_cast<std::size_t>(l.var())];
            if (prior != kNone) conflict_sources_.push_back(prior);
            return true;
        }
        value_[static_cast<std::size_t>(l.var())] = l.positive() ? 1 : -1;
        reason_[static_cast<std::size_t>(l.var())] = reason;
        trail_.push_back(l);
        return false;
    }

    bool verify(const std::vector<Lit>& lits) {
        std::fill(value_.begin(), value_.end(), 0);
        std::fill(reason_.begin(), reason_.end(), kNone);
        false_count_.assign(pool_.size(), 0);
        trail_.clear();
        for (std::size_t c = 0; c < pool_.size(); ++c)
            if (active_[c] && pool_[c].size() == 1 && assert_literal(pool_[c][0], c)) return true;
        for (Lit l : lits)
            if (assert_literal(~l, kNone)) return true;
        return propagate();
    }

    bool propagate() {
        for (std::size_t head = 0; head < trail_.size(); ++head) {
            const Lit made_false = ~trail_[head];
            for (std::size_t c : occ_[lit_index(made_false)]) {
                if (!active_[c]) continue;
                const std::size_t size = pool_[c].size();
                if (++false_count_[c] == size) {
                    conflict_sources_.assign(1, c);
                    return true;
                }
                if (false_count_[c] != size - 1) continue;
                Lit unassigned{};
                bool satisfied = false, found = false;
                for (Lit x : pool_[c]) {
                    const int v = value_of(x);
                    if (v > 0) {
                        satisfied = true;
                        break;
                    }
                    if (v == 0 && !found) {
                        unassigned = x;
                        found = true;
                    }
                }
                if (satisfied) continue;
                if (!found) {
                    conflict_sources_.assign(1, c);
                    return true;
                }
                if (assert_literal(unassigned, c)) return true;
            }
        }
        return false;
    }

    // Walk propagation reasons from the conflict to the clauses that carried
    // it, and report which of those were added by earlier proof steps.
    std::vector<std::size_t> collect_deps() const {
        std::vector<std::uint8_t> seen(pool_.size(), 0);
        std::vector<std::size_t> stack = conflict_sources_;
        std::vector<std::size_t> steps;
        while (!stack.empty()) {
            const std::size_t id = stack.back();
            stack.pop_back();
            if (seen[id]) continue;
            seen[id] = 1;
            if (pool_step_[id] != kNone) steps.push_back(pool_step_[id]);
            for (Lit l : pool_[id]) {
                const std::size_t r = reason_[static_cast<std::size_t>(l.var())];
                if (r != kNone && !seen[r]) stack.push_back(r);
            }
        }
        std::sort(steps.begin(), steps.end());
        steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
        return steps;
    }

    const RupProof& proof_;
    bool honor_deletions_;
    bool record_deps_;
    std::vector<std::vector<Lit>> pool_;
    std::vector<std::uint8_t> active_;
    std::vector<std::size_t> pool_step_;
    std::unordered_map<std::string, std::vector<std::size_t>> by_key_;
    std::vector<std::vector<std::size_t>> occ_;
    std::vector<std::int8_t> value_;
    std::vector<std::size_t> reason_;
    std::vector<std::uint32_t> false_count_;
    std::vector<Lit> trail_;
    std::vector<std::size_t> conflict_sources_;
};

}  // namespace detail

inline RupAnalysis analyze_rup(const Formula& f, const RupProof& proof,
                               bool honor_deletions = true) {
    return detail::RupEngine(f, proof, honor_deletions, true).run();
}

/// Accepts exactly when every step checks under reverse unit propagation
/// and the certificate ends by deriving the empty clause.
inline RupCheckResult check_rup(const Formula& f, const RupProof& proof,
                                bool honor_deletions = true) {
    return detail::RupEngine(f, proof, honor_deletions, false).run().result;
}

/// Shrink an accepted certificate to a 1-minimal core: first restrict it to
/// the dependency cone of the empty clause, then repeatedly drop any single
/// step whose removal leaves the certificate accepted, until none remains.
/// Every step of the result is load-bearing by construction. Deletion lines
/// are discarded; dropping them never invalidates a step, since propagation
/// only gains clauses.
inline RupProof trim_proof(const Formula& f, const RupProof& proof) {
    const RupAnalysis analysis = analyze_rup(f, proof, true);
    if (!analysis.result.accepted)
        throw std::invalid_argument("cannot trim a rejected proof: " + analysis.result.detail);
    const std::size_t empty_step = *analysis.first_empty_step;

    std::vector<std::uint8_t> keep(proof.size(), 0);
    std::vector<std::size_t> stack{empty_step};
    keep[empty_step] = 1;
    while (!stack.empty()) {
        const std::size_t k = stack.back();
        stack.pop_back();
        for (std::size_t dep : analysis.step_deps[k]) {
            if (keep[dep]) continue;
            keep[dep] = 1;
            stack.push_back(dep);
        }
    }
    RupProof current;
    for (std::size_t k = 0; k <= empty_step; ++k)
        if (keep[k] && !proof[k].deletion) current.push_back(proof[k]);

    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = current.size(); i-- > 0;) {
            if (current.size() == 1) break;
            RupProof candidate;
            candidate.reserve(current.size() - 1);
            for (std::size_t j = 0; j < current.size(); ++j)
                if (j != i) candidate.push_back(current[j]);
            if (check_rup(f, candidate).accepted) {
                current = std::move(candidate);
                changed = true;
            }
        }
    }
    return current;
}

}  // namespace edp
