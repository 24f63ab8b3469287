#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "edp/sequence.hpp"

namespace edp {

enum class SearchStatus { found, none, budget_exceeded };

inline const char* to_string(SearchStatus s) {
    switch (s) {
        case SearchStatus::found: return "found";
        case SearchStatus::none: return "none";
        case SearchStatus::budget_exceeded: return "budget-exceeded";
    }
    return "?";
}

/// Which sign to try first at each position. Search results must not depend
/// on this (negating a sequence preserves its discrepancy); exposing the
/// choice lets tests verify that symmetry instead of assuming it.
enum class BranchOrder { plus_first, minus_first };

struct SearchResult {
    SearchStatus status = SearchStatus::none;
    std::optional<Sequence> witness;
    std::uint64_t nodes = 0;
};

inline constexpr std::uint64_t kDefaultNodeBudget = 50'000'000;

namespace detail {

class Searcher {
  public:
    Searcher(int length, int bound, std::uint64_t node_budget, BranchOrder order)
        : length_(length),
          bound_(bound),
          budget_(node_budget),
          first_value_(order == BranchOrder::plus_first ? 1 : -1),
          divisors_(static_cast<std::size_t>(length) + 1),
          sums_(static_cast<std::size_t>(length) + 1, 0),
          signs_(static_cast<std::size_t>(length) + 1, 0) {
        for (int d = 1; d <= length; ++d)
            for (int n = d; n <= length; n += d)
                divisors_[static_cast<std::size_t>(n)].push_back(d);
    }

    SearchResult run() {
        SearchResult result;
        const bool found = dfs(1);
        result.nodes = nodes_;
        if (found) {
            result.status = SearchStatus::found;
            Sequence s;
            for (int i = 1; i <= length_; ++i) s.append(signs_[static_cast<std::size_t>(i)]);
            result.witness = std::move(s);
        } else {
            result.status = exceeded_ ? SearchStatus::budget_exceeded : SearchStatus::none;
        }
        return result;
    }

  private:
    // One node per attempted sign placement. Every partial sum over a
    // homogeneous subsequence through the new position is updated; the
    // branch dies as soon as any of them leaves [-C, C].
    bool dfs(int i) {
        if (i > length_) return true;
        const auto& divs = divisors_[static_cast<std::size_t>(i)];
        for (int attempt = 0; attempt < 2; ++attempt) {
            const int value = attempt == 0 ? first_value_ : -first_value_;
            if (nodes_ >= budget_) {
                exceeded_ = true;
                return false;
            }
            ++nodes_;
            bool viable = true;
            for (int d : divs) {
                int& sum = sums_[static_cast<std::size_t>(d)];
                sum += value;
                if (sum > bound_ || sum < -bound_) viable = false;
            }
            if (viable) {
                signs_[static_cast<std::size_t>(i)] = static_cast<std::int8_t>(value);
                if (dfs(i + 1)) return true;
            }
            for (int d : divs) sums_[static_cast<std::size_t>(d)] -= value;
            if (exceeded_) return false;
        }
        return false;
    }

    int length_;
    int bound_;
    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;
    int first_value_;
    bool exceeded_ = false;
    std::vector<std::vector<int>> divisors_;
    std::vector<int> sums_;
    std::vector<std::int8_t> signs_;
};

}  // namespace detail

/// Exhaustively decide whether any ±1 sequence of the given length keeps
/// every homogeneous partial sum within [-bound, bound]. Never wrong when
/// it answers; reports budget_exceeded instead of guessing once the node
/// budget runs out.
inline SearchResult exists_sequence(int length, int bound,
                                    std::uint64_t node_budget = kDefaultNodeBudget,
                                    BranchOrder order = BranchOrder::plus_first) {
    if (length < 0) throw std::invalid_argument("length must be >= 0");
    if (bound < 1) throw std::invalid_argument("bound must be >= 1");
    if (length == 0) return {SearchStatus::found, Sequence{}, 0};
    return detail::Searcher(length, bound, node_budget, order).run();
}

struct MaxLengthResult {
    SearchStatus status = SearchStatus::budget_exceeded;  // found or budget_exceeded
    int value = 0;
    std::optional<Sequence> witness;
    std::uint64_t nodes = 0;
};

/// Longest l <= cap admitting a sequence of discrepancy <= bound. Because a
/// prefix of a compliant sequence is compliant, the lengths that work form
/// an initial segment, so a single upward scan to the first failure (or to
/// the cap) settles the answer. All probes share one node budget.
inline MaxLengthResult max_length(int bound, int cap,
                                  std::uint64_t node_budget = kDefaultNodeBudget,
                                  BranchOrder order = BranchOrder::plus_first) {
    if (cap < 0) throw std::invalid_argument("cap must be >= 0");
    MaxLengthResult result;
    result.status = SearchStatus::found;
    result.value = 0;
    result.witness = Sequence{};
    for (int l = 1; l <= cap; ++l) {
        const std::uint64_t remaining = node_budget - result.nodes;
        SearchResult probe = exists_sequence(l, bound, remaining, order);
        result.nodes += probe.nodes;
        if (probe.status == SearchStatus::budget_exceeded) {
            result.status = SearchStatus::budget_exceeded;
            return result;
        }
        if (probe.status == SearchStatus::none) break;
        result.value = l;
        result.witness = std::move(probe.witness);
    }
    return result;
}

}  // namespace edp
