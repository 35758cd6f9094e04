#include "uvplan/mpsp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace uvplan {

WorldSample sample_world(const BeliefGraph &belief, SplitMix64 &rng) {
    const std::size_t n = belief.network().edge_count();
    WorldSample world{std::vector<char>(n, 0)};
    for (EdgeId e = 0; e < n; ++e) {
        switch (belief.status(e)) {
            case EdgeStatus::Safe: world.present[e] = 1; break;
            case EdgeStatus::Damaged: world.present[e] = 0; break;
            case EdgeStatus::Uninspected: world.present[e] = rng.uniform01() < belief.probability(e); break;
        }
    }
    return world;
}

CandidateSet generate_candidates(const BeliefGraph &belief, const GraphPosition &from, VertexId to, std::size_t m,
                                 SplitMix64 &rng) {
    if (m == 0) throw std::invalid_argument("candidate count must be at least 1");
    const auto &network = belief.network();
    const auto origin = resolve_origin(belief, from);
    const auto host = origin.host_edge;

    std::vector<Path> paths;
    for (std::size_t s = 0; s < m; ++s) {
        const auto world = sample_world(belief, rng);
        auto path = shortest_path(network, origin, to,
                                  [&](EdgeId e) { return world.present[e] && (!host || *host != e); });
        if (path && std::find(paths.begin(), paths.end(), *path) == paths.end()) paths.push_back(std::move(*path));
    }
    std::sort(paths.begin(), paths.end(), path_less);

    CandidateSet set;
    for (auto &p : paths) {
        Candidate c;
        c.edges = p.edges(network);
        c.existence = 1.0;
        for (const EdgeId e : c.edges) c.existence *= belief.probability(e);
        c.path = std::move(p);
        set.items.push_back(std::move(c));
    }
    return set;
}

SpProbabilityEstimate estimate_sp_probability_with_error(const CandidateSet &candidates, std::size_t j,
                                                         const BeliefGraph &belief, std::size_t trials,
                                                         SplitMix64 &rng) {
    if (j >= candidates.size()) throw std::out_of_range("candidate index out of range");
    const auto &target = candidates.items[j];
    const double p_target = target.existence;
    if (j == 0 || p_target == 0.0) return {p_target, 0.0};
    if (trials == 0) throw std::invalid_argument("trial count must be at least 1");

    // Local numbering of the edges that matter: those of earlier candidates
    // that are not already forced present by candidate j.
    std::unordered_map<EdgeId, std::size_t> local;
    std::vector<EdgeId> free_edges;
    auto on_target = [&](EdgeId e) { return std::find(target.edges.begin(), target.edges.end(), e) != target.edges.end(); };

    std::vector<std::vector<std::size_t>> rest(j);  // edges of candidate i outside candidate j
    std::vector<double> weight(j, 1.0);             // Pr[E_i | E_j]
    for (std::size_t i = 0; i < j; ++i) {
        for (const EdgeId e : candidates.items[i].edges) {
            if (on_target(e)) continue;
            auto [it, inserted] = local.try_emplace(e, free_edges.size());
            if (inserted) free_edges.push_back(e);
            rest[i].push_back(it->second);
            weight[i] *= belief.probability(e);
        }
    }
    std::vector<double> cumulative(j);
    double union_bound = 0.0;
    for (std::size_t i = 0; i < j; ++i) {
        union_bound += weight[i];
        cumulative[i] = union_bound;
    }
    if (union_bound == 0.0) return {p_target, 0.0};

    std::vector<double> p_free(free_edges.size());
    for (std::size_t k = 0; k < free_edges.size(); ++k) p_free[k] = belief.probability(free_edges[k]);

    std::vector<char> present(free_edges.size());
    std::size_t hits = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        const double pick = rng.uniform01() * union_bound;
        auto chosen_it = std::upper_bound(cumulative.begin(), cumulative.end(), pick);
        const auto chosen = std::min(static_cast<std::size_t>(chosen_it - cumulative.begin()), j - 1);

        for (std::size_t k = 0; k < free_edges.size(); ++k) present[k] = rng.uniform01() < p_free[k];
        for (const auto k : rest[chosen]) present[k] = 1;

        std::size_t first_existing = chosen;
        for (std::size_t i = 0; i < chosen; ++i) {
            const bool exists = std::all_of(rest[i].begin(), rest[i].end(), [&](std::size_t k) { return present[k]; });
            if (exists) {
                first_existing = i;
                break;
            }
        }
        if (first_existing == chosen) ++hits;
    }

    const double n = static_cast<double>(trials);
    const double ratio = static_cast<double>(hits) / n;
    const double union_estimate = std::clamp(union_bound * ratio, 0.0, 1.0);
    const double se = p_target * union_bound * std::sqrt(ratio * (1.0 - ratio) / n);
    return {p_target * (1.0 - union_estimate), se};
}

double estimate_sp_probability(const CandidateSet &candidates, std::size_t j, const BeliefGraph &belief,
                               std::size_t trials, SplitMix64 &rng) {
    return estimate_sp_probability_with_error(candidates, j, belief, trials, rng).value;
}

std::optional<Path> mpsp_path(const BeliefGraph &belief, const GraphPosition &from, VertexId to,
                              const MpspOptions &options, SplitMix64 &rng) {
    if (options.mc_runs == 0) throw std::invalid_argument("Monte Carlo run count must be at least 1");
    const auto candidates = generate_candidates(belief, from, to, options.candidates, rng);
    if (candidates.empty()) return std::nullopt;
    std::size_t best = 0;
    double best_value = -1.0;
    for (std::size_t j = 0; j < candidates.size(); ++j) {
        const double value = estimate_sp_probability(candidates, j, belief, options.mc_runs, rng);
        if (value > best_value) {
            best = j;
            best_value = value;
        }
    }
    return candidates.items[best].path;
}

std::optional<EdgeId> least_probable_uninspected(const Path &path, const BeliefGraph &belief) {
    std::optional<EdgeId> best;
    double best_value = 2.0;
    for (const EdgeId e : path.edges(belief.network())) {
        if (!belief.uninspected(e)) continue;
        const double p = belief.probability(e);
        if (!best || p < best_value) {
            best = e;
            best_value = p;
        }
    }
    return best;
}

}  // namespace uvplan
