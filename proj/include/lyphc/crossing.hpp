#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace lyphc {

/// Items placed in slots 0..n-1 on a line; edges join two items and are drawn
/// as arcs on one side of the line. Item -1 is a fixed entry point left of
/// every slot and item n a fixed exit point right of every slot.
struct CrossingProblem {
    std::size_t n = 0;
    std::vector<std::pair<long, long>> edges;
};

/// order[slot] = item. Two edges cross when their end positions interleave.
std::size_t count_crossings(const CrossingProblem& p, const std::vector<std::size_t>& order);

/// Ordering with the fewest crossings. Up to `exact_limit` slots every
/// permutation is tried (ties: least total displacement from `initial`, then
/// lexicographically smallest); above that a barycenter pass followed by
/// adjacent swaps, never worse than `initial`.
std::vector<std::size_t> order_chain_in_host(const CrossingProblem& p, const std::vector<std::size_t>& initial,
                                             std::size_t exact_limit = 8);

/// Problem for a chain of `levels` links: consecutive levels are joined, the
/// first to the entry and the last to the exit.
CrossingProblem chain_problem(std::size_t levels);

}  // namespace lyphc
