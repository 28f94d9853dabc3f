#include "lyphc/crossing.hpp"

#include <algorithm>
#include <numeric>

namespace lyphc {

namespace {

std::vector<long> positions(const CrossingProblem& p, const std::vector<std::size_t>& order) {
    std::vector<long> pos(p.n);
    for (std::size_t s = 0; s < order.size(); ++s) pos[order[s]] = static_cast<long>(s);
    return pos;
}

long place(const std::vector<long>& pos, long item, std::size_t n) {
    if (item < 0) return -1;
    if (static_cast<std::size_t>(item) >= n) return static_cast<long>(n);
    return pos[static_cast<std::size_t>(item)];
}

std::size_t displacement(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    std::size_t d = 0;
    std::vector<long> pa(a.size()), pb(b.size());
    for (std::size_t s = 0; s < a.size(); ++s) pa[a[s]] = static_cast<long>(s);
    for (std::size_t s = 0; s < b.size(); ++s) pb[b[s]] = static_cast<long>(s);
    for (std::size_t i = 0; i < a.size(); ++i) d += static_cast<std::size_t>(std::abs(pa[i] - pb[i]));
    return d;
}

}  // namespace

std::size_t count_crossings(const CrossingProblem& p, const std::vector<std::size_t>& order) {
    auto pos = positions(p, order);
    std::vector<std::pair<long, long>> arcs;
    for (auto [u, v] : p.edges) {
        long a = place(pos, u, p.n), b = place(pos, v, p.n);
        if (a == b) continue;
        arcs.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::size_t crossings = 0;
    for (std::size_t i = 0; i < arcs.size(); ++i)
        for (std::size_t j = i + 1; j < arcs.size(); ++j) {
            auto [a, b] = arcs[i];
            auto [c, d] = arcs[j];
            if ((a < c && c < b && b < d) || (c < a && a < d && d < b)) ++crossings;
        }
    return crossings;
}

std::vector<std::size_t> order_chain_in_host(const CrossingProblem& p, const std::vector<std::size_t>& initial,
                                             std::size_t exact_limit) {
    if (p.n <= 1) return initial;
    if (p.n <= exact_limit) {
        std::vector<std::size_t> perm(p.n);
        std::iota(perm.begin(), perm.end(), 0);
        std::vector<std::size_t> best = initial;
        std::size_t best_c = count_crossings(p, initial), best_d = 0;
        do {
            std::size_t c = count_crossings(p, perm);
            if (c > best_c) continue;
            std::size_t d = displacement(perm, initial);
            if (c < best_c || d < best_d || (d == best_d && perm < best)) {
                best = perm;
                best_c = c;
                best_d = d;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        return best;
    }

    // Barycenter: each item moves to the mean position of its neighbours.
    auto pos = positions(p, initial);
    std::vector<double> bary(p.n, 0.0);
    std::vector<std::size_t> degree(p.n, 0);
    for (auto [u, v] : p.edges) {
        for (auto [x, y] : {std::pair{u, v}, std::pair{v, u}}) {
            if (x < 0 || static_cast<std::size_t>(x) >= p.n) continue;
            bary[static_cast<std::size_t>(x)] += static_cast<double>(place(pos, y, p.n));
            ++degree[static_cast<std::size_t>(x)];
        }
    }
    for (std::size_t i = 0; i < p.n; ++i)
        bary[i] = degree[i] ? bary[i] / static_cast<double>(degree[i]) : static_cast<double>(pos[i]);
    std::vector<std::size_t> order = initial;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return bary[a] < bary[b]; });

    std::size_t current = count_crossings(p, order);
    for (bool improved = true; improved;) {
        improved = false;
        for (std::size_t s = 0; s + 1 < order.size(); ++s) {
            std::swap(order[s], order[s + 1]);
            std::size_t c = count_crossings(p, order);
            if (c < current) {
                current = c;
                improved = true;
            } else {
                std::swap(order[s], order[s + 1]);
            }
        }
    }
    return current <= count_crossings(p, initial) ? order : initial;
}

CrossingProblem chain_problem(std::size_t levels) {
    CrossingProblem p;
    p.n = levels;
    if (levels == 0) return p;
    long n = static_cast<long>(levels);
    p.edges.emplace_back(-1, 0);
    for (long i = 0; i + 1 < n; ++i) p.edges.emplace_back(i, i + 1);
    p.edges.emplace_back(n - 1, n);
    return p;
}

}  // namespace lyphc
