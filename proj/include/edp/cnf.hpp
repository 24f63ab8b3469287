#pragma once

#include <cassert>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace edp {

/// A CNF literal over variable indices >= 1, stored in the signed DIMACS
/// convention (+v / -v).
class Lit {
public:
    /// Placeholder value; holds no variable and must be assigned before use.
    constexpr Lit() : code_(0) {}

    constexpr Lit(int variable, bool positive)
        : code_(positive ? variable : -variable) {
        assert(variable >= 1);
    }

    static constexpr Lit from_dimacs(std::int32_t code) {
        assert(code != 0);
        return Lit(code);
    }

    constexpr int var() const { return code_ < 0 ? -code_ : code_; }
    constexpr bool positive() const { return code_ > 0; }
    constexpr std::int32_t to_dimacs() const { return code_; }
    constexpr Lit operator~() const { return Lit(-code_); }

    friend constexpr auto operator<=>(const Lit&, const Lit&) = default;

private:
    constexpr explicit Lit(std::int32_t code) : code_(code) {}

    std::int32_t code_;
};

constexpr Lit pos(int variable) { return Lit(variable, true); }
constexpr Lit neg(int variable) { return Lit(variable, false); }

/// A CNF formula over a fixed variable count. Clauses are kept exactly as
/// added, in order, duplicates included; literals are stored in one flat
/// array. Empty clauses are not representable here.
class Formula {
public:
    Formula() = default;
    explicit Formula(int num_vars) : num_vars_(num_vars) {
        if (num_vars < 0) throw std::invalid_argument("negative variable count");
    }

    int num_vars() const { return num_vars_; }
    std::size_t num_clauses() const { return ends_.size(); }
    std::size_t num_literals() const { return lits_.size(); }

    std::span<const Lit> clause(std::size_t idx) const {
        assert(idx < ends_.size());
        std::size_t begin = idx == 0 ? 0 : ends_[idx - 1];
        return {lits_.data() + begin, ends_[idx] - begin};
    }

    void add_clause(std::span<const Lit> lits) {
        if (lits.empty()) throw std::invalid_argument("empty clause");
        for (Lit l : lits) {
            if (l.var() > num_vars_)
                throw std::invalid_argument("literal variable exceeds declared count");
        }
        lits_.insert(lits_.end(), lits.begin(), lits.end());
        ends_.push_back(lits_.size());
    }

    void add_clause(std::initializer_list<Lit> lits) {
        add_clause(std::span<const Lit>(lits.begin(), lits.size()));
    }

    friend bool operator==(const Formula&, const Formula&) = default;

private:
    int num_vars_ = 0;
    std::vector<Lit> lits_;
    std::vector<std::size_t> ends_;
};

/// A total truth assignment over variables 1..num_vars.
class Assignment {
public:
    Assignment() = default;
    explicit Assignment(int num_vars, bool fill = false)
        : values_(static_cast<std::size_t>(num_vars), fill ? 1 : 0) {}

    int num_vars() const { return static_cast<int>(values_.size()); }

    bool value(int variable) const {
        assert(variable >= 1 && variable <= num_vars());
        return values_[static_cast<std::size_t>(variable) - 1] != 0;
    }

    bool value(Lit l) const { return value(l.var()) == l.positive(); }

    void set(int variable, bool v) {
        assert(variable >= 1 && variable <= num_vars());
        values_[static_cast<std::size_t>(variable) - 1] = v ? 1 : 0;
    }

    bool satisfies(const Formula& f) const {
        assert(f.num_vars() <= num_vars());
        for (std::size_t c = 0; c < f.num_clauses(); ++c) {
            bool sat = false;
            for (Lit l : f.clause(c)) {
                if (value(l)) {
                    sat = true;
                    break;
                }
            }
            if (!sat) return false;
        }
        return true;
    }

    friend bool operator==(const Assignment&, const Assignment&) = default;

private:
    std::vector<std::uint8_t> values_;
};

}  // namespace edp
