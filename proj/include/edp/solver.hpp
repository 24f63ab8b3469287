#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "edp/cnf.hpp"
#include "edp/outcome.hpp"
#include "edp/rup.hpp"

namespace edp {

struct CdclConfig {
    std::uint64_t max_conflicts = std::numeric_limits<std::uint64_t>::max();
    bool log_proof = false;
};

struct CdclStats {
    std::uint64_t conflicts = 0;
    std::uint64_t decisions = 0;
    std::uint64_t propagations = 0;
    std::uint64_t restarts = 0;
    std::uint64_t learned = 0;
    std::uint64_t deleted = 0;
};

/// Conflict-driven clause learning solver: two watched literals with
/// blockers, first-UIP learning with self-subsumption minimization,
/// activity-ordered decisions (decay 0.95, ties to the smaller variable),
/// phase saving, geometric restarts, and activity-based learned-clause
/// collection. Fully deterministic: no randomization anywhere, so verdicts,
/// models, and logged proofs are identical across runs.
///
/// The formula must outlive the solver; solve() may be called once.
class CdclSolver {
    static constexpr std::uint32_t kNoClause = std::numeric_limits<std::uint32_t>::max();

  public:
    explicit CdclSolver(const Formula& f, CdclConfig config = {})
        : formula_(f), config_(config), num_vars_(f.num_vars()) {
        watches_.resize(2 * static_cast<std::size_t>(num_vars_) + 2);
        assign_.resize(static_cast<std::size_t>(num_vars_) + 1, 0);
        level_.resize(static_cast<std::size_t>(num_vars_) + 1, 0);
        reason_.resize(static_cast<std::size_t>(num_vars_) + 1, kNoClause);
        activity_.resize(static_cast<std::size_t>(num_vars_) + 1, 0.0);
        saved_phase_.resize(static_cast<std::size_t>(num_vars_) + 1, 0);
        seen_.resize(static_cast<std::size_t>(num_vars_) + 1, 0);
        heap_pos_.resize(static_cast<std::size_t>(num_vars_) + 1, -1);
        for (int v = 1; v <= num_vars_; ++v) heap_insert(v);
        for (std::size_t c = 0; c < f.num_clauses() && ok_; ++c) ingest(f.clause(c));
        max_learned_ = std::max<std::size_t>(1000, f.num_clauses() / 3);
    }

    SolveOutcome solve() {
        if (started_) throw std::logic_error("solver instances are single-use");
        started_ = true;
        if (!ok_) {
            log_addition({});
            return SolveOutcome::unsat();
        }
        std::uint64_t restart_limit = 100;
        std::uint64_t conflicts_since_restart = 0;
        std::vector<Lit> learnt;
        for (;;) {
            const std::uint32_t confl = propagate();
            if (confl != kNoClause) {
                ++stats_.conflicts;
                ++conflicts_since_restart;
                if (decision_level() == 0) {
                    log_addition({});
                    return SolveOutcome::unsat();
                }
                int backjump = 0;
                analyze(confl, learnt, backjump);
                cancel_until(backjump);
                record_learned(learnt);
                decay_activities();
                if (stats_.conflicts >= config_.max_conflicts)
                    return SolveOutcome::unknown(UnknownReason::budget);
                if (num_learned_ >= max_learned_) reduce_db();
                if (conflicts_since_restart >= restart_limit) {
                    restart_limit += restart_limit / 2;
                    conflicts_since_restart = 0;
                    ++stats_.restarts;
                    cancel_until(0);
                }
            } else {
                const int v = pick_branch_var();
                if (v == 0) return build_model();
                ++stats_.decisions;
                trail_lim_.push_back(trail_.size());
                unchecked_enqueue(Lit(v, saved_phase_[static_cast<std::size_t>(v)] != 0),
                                  kNoClause);
            }
        }
    }

    const CdclStats& stats() const { return stats_; }
    const RupProof& proof() const { return proof_; }

  private:
    struct Clause {
        std::vector<Lit> lits;
        double activity = 0.0;
        bool learned = false;
        bool removed = false;
    };

    struct Watcher {
        std::uint32_t clause;
        Lit blocker;
    };

    static std::size_t lit_index(Lit l) {
        return 2 * static_cast<std::size_t>(l.var()) + (l.positive() ? 0 : 1);
    }

    int value_of(Lit l) const {
        const int v = assign_[static_cast<std::size_t>(l.var())];
        return l.positive() ? v : -v;
    }

    int decision_level() const { return static_cast<int>(trail_lim_.size()); }

    // --- clause database ---

    void ingest(std::span<const Lit> clause) {
        std::vector<Lit> lits(clause.begin(), clause.end());
        std::sort(lits.begin(), lits.end(), [](Lit a, Lit b) {
            return a.var() != b.var() ? a.var() < b.var() : a.positive() < b.positive();
        });
        std::vector<Lit> cleaned;
        cleaned.reserve(lits.size());
        for (Lit l : lits) {
            if (!cleaned.empty() && cleaned.back() == l) continue;
            if (!cleaned.empty() && cleaned.back().var() == l.var()) return;  // tautology
            cleaned.push_back(l);
        }
        if (cleaned.size() == 1) {
            const int v = value_of(cleaned[0]);
            if (v < 0)
                ok_ = false;
            else if (v == 0)
                unchecked_enqueue(cleaned[0], kNoClause);
            return;
        }
        const auto id = static_cast<std::uint32_t>(clauses_.size());
        clauses_.push_back({std::move(cleaned), 0.0, false, false});
        attach(id);
    }

    void attach(std::uint32_t id) {
        const Clause& c = clauses_[id];
        watches_[lit_index(c.lits[0])].push_back({id, c.lits[1]});
        watches_[lit_index(c.lits[1])].push_back({id, c.lits[0]});
    }

    void detach(std::uint32_t id) {
        const Clause& c = clauses_[id];
        for (int w = 0; w < 2; ++w) {
            auto& list = watches_[lit_index(c.lits[static_cast<std::size_t>(w)])];
            for (std::size_t i = 0; i < list.size(); ++i) {
                if (list[i].clause != id) continue;
                list[i] = list.back();
                list.pop_back();
                break;
            }
        }
    }

    bool locked(std::uint32_t id) const {
        const Clause& c = clauses_[id];
        return value_of(c.lits[0]) > 0 &&
               reason_[static_cast<std::size_t>(c.lits[0].var())] == id;
    }

    void reduce_db() {
        std::vector<std::uint32_t> ids;
        ids.reserve(num_learned_);
        for (std::uint32_t id = 0; id < clauses_.size(); ++id)
            if (clauses_[id].learned && !clauses_[id].removed) ids.push_back(id);
        std::sort(ids.begin(), ids.end(), [this](std::uint32_t a, std::uint32_t b) {
            return clauses_[a].activity != clauses_[b].activity
                       ? clauses_[a].activity < clauses_[b].activity
                       : a < b;
        });
        std::size_t removed = 0;
        const std::size_t target = ids.size() / 2;
        for (std::uint32_t id : ids) {
            if (removed >= target) break;
            Clause& c = clauses_[id];
            if (c.lits.size() <= 2 || locked(id)) continue;
            detach(id);
            c.removed = true;
            log_deletion(c.lits);
            ++removed;
            ++stats_.deleted;
            --num_learned_;
        }
        max_learned_ += max_learned_ / 2;
    }

    // --- trail ---

    void unchecked_enqueue(Lit l, std::uint32_t reason) {
        assign_[static_cast<std::size_t>(l.var())] = l.positive() ? 1 : -1;
        level_[static_cast<std::size_t>(l.var())] = decision_level();
        reason_[static_cast<std::size_t>(l.var())] = reason;
        trail_.push_back(l);
    }

    void cancel_until(int target_level) {
        if (decision_level() <= target_level) return;
        const std::size_t floor = trail_lim_[static_cast<std::size_t>(target_level)];
        for (std::size_t i = trail_.size(); i-- > floor;) {
            const int v = trail_[i].var();
            saved_phase_[static_cast<std::size_t>(v)] = assign_[static_cast<std::size_t>(v)] > 0;
            assign_[static_cast<std::size_t>(v)] = 0;
            reason_[static_cast<std::size_t>(v)] = kNoClause;
            if (heap_pos_[static_cast<std::size_t>(v)] < 0) heap_insert(v);
        }
        trail_.resize(floor);
        trail_lim_.resize(static_cast<std::size_t>(target_level));
        qhead_ = floor;
    }

    std::uint32_t propagate() {
        std::uint32_t conflict = kNoClause;
        while (qhead_ < trail_.size()) {
            const Lit p = trail_[qhead_++];
            ++stats_.propagations;
            auto& ws = watches_[lit_index(~p)];
            std::size_t keep = 0;
            for (std::size_t i = 0; i < ws.size(); ++i) {
                const Watcher w = ws[i];
                if (value_of(w.blocker) > 0) {
                    ws[keep++] = w;
                    continue;
                }
                Clause& c = clauses_[w.clause];
                if (c.removed) continue;
                if (c.lits[0] == ~p) std::swap(c.lits[0], c.lits[1]);
                const Lit first = c.lits[0];
                if (value_of(first) > 0) {
                    ws[keep++] = {w.clause, first};
                    continue;
                }
                bool moved = false;
                for (std::size_t k = 2; k < c.lits.size(); ++k) {
                    if (value_of(c.lits[k]) < 0) continue;
                    std::swap(c.lits[1], c.lits[k]);
                    watches_[lit_index(c.lits[1])].push_back({w.clause, first});
                    moved = true;
                    break;
                }
                if (moved) continue;
                ws[keep++] = {w.clause, first};
                if (value_of(first) < 0) {
                    conflict = w.clause;
                    qhead_ = trail_.size();
                    for (++i; i < ws.size(); ++i) ws[keep++] = ws[i];
                    break;
                }
                unchecked_enqueue(first, w.clause);
            }
            ws.resize(keep);
            if (conflict != kNoClause) break;
        }
        return conflict;
    }

    // --- learning ---

    void analyze(std::uint32_t conflict, std::vector<Lit>& out_learnt, int& out_level) {
        out_learnt.assign(1, Lit());
        std::vector<int> to_clear;
        int path = 0;
        std::size_t index = trail_.size();
        Lit pivot{};
        bool first_pass = true;
        for (;;) {
            const Clause& c = clauses_[conflict];
            if (c.learned) bump_clause(conflict);
            for (std::size_t k = first_pass ? 0 : 1; k < c.lits.size(); ++k) {
                const Lit q = c.lits[k];
                const auto v = static_cast<std::size_t>(q.var());
                if (seen_[v] || level_[v] == 0) continue;
                bump_var(q.var());
                seen_[v] = 1;
                to_clear.push_back(q.var());
                if (level_[v] >= decision_level())
                    ++path;
                else
                    out_learnt.push_back(q);
            }
            while (!seen_[static_cast<std::size_t>(trail_[--index].var())]) {}
            pivot = trail_[index];
            seen_[static_cast<std::size_t>(pivot.var())] = 0;
            if (--path == 0) break;
            conflict = reason_[static_cast<std::size_t>(pivot.var())];
            first_pass = false;
        }
        out_learnt[0] = ~pivot;

        // Self-subsumption: drop any literal whose whole reason already lies
        // inside the clause (or was dropped the same way, or holds at root).
        std::size_t kept = 1;
        for (std::size_t i = 1; i < out_learnt.size(); ++i) {
            const auto v = static_cast<std::size_t>(out_learnt[i].var());
            const std::uint32_t r = reason_[v];
            bool redundant = r != kNoClause;
            if (redundant) {
                const Clause& rc = clauses_[r];
                for (std::size_t k = 1; k < rc.lits.size(); ++k) {
                    const auto rv = static_cast<std::size_t>(rc.lits[k].var());
                    if (!seen_[rv] && level_[rv] > 0) {
                        redundant = false;
                        break;
                    }
                }
            }
            if (!redundant) out_learnt[kept++] = out_learnt[i];
        }
        out_learnt.resize(kept);

        if (out_learnt.size() == 1) {
            out_level = 0;
        } else {
            std::size_t max_i = 1;
            for (std::size_t i = 2; i < out_learnt.size(); ++i)
                if (level_[static_cast<std::size_t>(out_learnt[i].var())] >
                    level_[static_cast<std::size_t>(out_learnt[max_i].var())])
                    max_i = i;
            std::swap(out_learnt[1], out_learnt[max_i]);
            out_level = level_[static_cast<std::size_t>(out_learnt[1].var())];
        }
        for (int v : to_clear) seen_[static_cast<std::size_t>(v)] = 0;
    }

    void record_learned(const std::vector<Lit>& learnt) {
        ++stats_.learned;
        log_addition(learnt);
        if (learnt.size() == 1) {
            unchecked_enqueue(learnt[0], kNoClause);
            return;
        }
        const auto id = static_cast<std::uint32_t>(clauses_.size());
        clauses_.push_back({learnt, cla_inc_, true, false});
        attach(id);
        ++num_learned_;
        unchecked_enqueue(learnt[0], id);
    }

    // --- heuristics ---

    void bump_var(int v) {
        double& a = activity_[static_cast<std::size_t>(v)];
        a += var_inc_;
        if (a > 1e100) {
            for (int u = 1; u <= num_vars_; ++u) activity_[static_cast<std::size_t>(u)] *= 1e-100;
            var_inc_ *= 1e-100;
        }
        if (heap_pos_[static_cast<std::size_t>(v)] >= 0)
            heap_up(static_cast<std::size_t>(heap_pos_[static_cast<std::size_t>(v)]));
    }

    void bump_clause(std::uint32_t id) {
        double& a = clauses_[id].activity;
        a += cla_inc_;
        if (a > 1e20) {
            for (Clause& c : clauses_)
                if (c.learned) c.activity *= 1e-20;
            cla_inc_ *= 1e-20;
        }
    }

    void decay_activities() {
        var_inc_ /= 0.95;
        cla_inc_ /= 0.999;
    }

    int pick_branch_var() {
        while (heap_.size() > 0) {
            const int v = heap_pop();
            if (assign_[static_cast<std::size_t>(v)] == 0) return v;
        }
        return 0;
    }

    // Max-heap on activity; equal activities go to the smaller variable so
    // runs are reproducible.
    bool heap_before(int a, int b) const {
        const double aa = activity_[static_cast<std::size_t>(a)];
        const double ab = activity_[static_cast<std::size_t>(b)];
        return aa != ab ? aa > ab : a < b;
    }

    void heap_insert(int v) {
        heap_pos_[static_cast<std::size_t>(v)] = static_cast<int>(heap_.size());
        heap_.push_back(v);
        heap_up(heap_.size() - 1);
    }

    int heap_pop() {
        const int top = heap_[0];
        heap_pos_[static_cast<std::size_t>(top)] = -1;
        heap_[0] = heap_.back();
        heap_.pop_back();
        if (!heap_.empty()) {
            heap_pos_[static_cast<std::size_t>(heap_[0])] = 0;
            heap_down(0);
        }
        return top;
    }

    void heap_up(std::size_t i) {
        const int v = heap_[i];
        while (i > 0) {
            const std::size_t parent = (i - 1) / 2;
            if (!heap_before(v, heap_[parent])) break;
            heap_[i] = heap_[parent];
            heap_pos_[static_cast<std::size_t>(heap_[i])] = static_cast<int>(i);
            i = parent;
        }
        heap_[i] = v;
        heap_pos_[static_cast<std::size_t>(v)] = static_cast<int>(i);
    }

    void heap_down(std::size_t i) {
        const int v = heap_[i];
        for (;;) {
            std::size_t child = 2 * i + 1;
            if (child >= heap_.size()) break;
            if (child + 1 < heap_.size() && heap_before(heap_[child + 1], heap_[child])) ++child;
            if (!heap_before(heap_[child], v)) break;
            heap_[i] = heap_[child];
            heap_pos_[static_cast<std::size_t>(heap_[i])] = static_cast<int>(i);
            i = child;
        }
        heap_[i] = v;
        heap_pos_[static_cast<std::size_t>(v)] = static_cast<int>(i);
    }

    // --- results ---

    SolveOutcome build_model() {
        Assignment model(num_vars_);
        for (int v = 1; v <= num_vars_; ++v)
            model.set(v, assign_[static_cast<std::size_t>(v)] > 0);
        if (!model.satisfies(formula_))
            throw std::logic_error("internal solver produced a non-satisfying model");
        return SolveOutcome::sat(std::move(model));
    }

    void log_addition(const std::vector<Lit>& lits) {
        if (config_.log_proof) proof_.push_back({false, lits});
    }

    void log_deletion(const std::vector<Lit>& lits) {
        if (config_.log_proof) proof_.push_back({true, lits});
    }

    const Formula& formula_;
    CdclConfig config_;
    int num_vars_;
    bool ok_ = true;
    bool started_ = false;

    std::vector<Clause> clauses_;
    std::vector<std::vector<Watcher>> watches_;
    std::size_t num_learned_ = 0;
    std::size_t max_learned_ = 1000;

    std::vector<std::int8_t> assign_;
    std::vector<int> level_;
    std::vector<std::uint32_t> reason_;
    std::vector<Lit> trail_;
    std::vector<std::size_t> trail_lim_;
    std::size_t qhead_ = 0;

    std::vector<double> activity_;
    double var_inc_ = 1.0;
    double cla_inc_ = 1.0;
    std::vector<std::uint8_t> saved_phase_;
    std::vector<std::uint8_t> seen_;
    std::vector<int> heap_;
    std::vector<int> heap_pos_;

    CdclStats stats_;
    RupProof proof_;
};

/// One-shot convenience wrapper around CdclSolver.
inline SolveOutcome solve_internal(const Formula& f, CdclConfig config = {}) {
    CdclSolver solver(f, config);
    return solver.solve();
}

}  // namespace edp
