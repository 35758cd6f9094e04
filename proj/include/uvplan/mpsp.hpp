#pragma once

#include <optional>
#include <vector>

#include "uvplan/belief.hpp"
#include "uvplan/paths.hpp"
#include "uvplan/rng.hpp"

namespace uvplan {

/// One realization of edge presence. Safe edges are always present, Damaged
/// edges never; every other edge is an independent Bernoulli draw.
struct WorldSample {
    std::vector<char> present;
};

WorldSample sample_world(const BeliefGraph &belief, SplitMix64 &rng);

struct Candidate {
    Path path;
    std::vector<EdgeId> edges;
    /// Probability that every edge of the path exists.
    double existence = 0.0;
};

/// Distinct sampled shortest paths, sorted by path_less.
struct CandidateSet {
    std::vector<Candidate> items;

    std::size_t size() const { return items.size(); }
    bool empty() const { return items.empty(); }
};

/// Samples `m` worlds and collects the shortest path of every world in which
/// the destination is reachable.
CandidateSet generate_candidates(const BeliefGraph &belief, const GraphPosition &from, VertexId to, std::size_t m,
                                 SplitMix64 &rng);

struct SpProbabilityEstimate {
    double value = 0.0;
    double standard_error = 0.0;
};

// Pr[candidate j exists and no earlier (shorter) candidate exists]
//   = Pr[E_j] * (1 - Pr[union_{i<j} E_i | E_j]),
// with the union probability estimated by the Karp-Luby coverage estimator:
// pick i with probability proportional to Pr[E_i | E_j], sample a world
// conditioned on E_i and E_j, and count the trial when i is the smallest
// index whose candidate exists in it. j = 0 is exact.
SpProbabilityEstimate estimate_sp_probability_with_error(const CandidateSet &candidates, std::size_t j,
                                                         const BeliefGraph &belief, std::size_t trials,
                                                         SplitMix64 &rng);
double estimate_sp_probability(const CandidateSet &candidates, std::size_t j, const BeliefGraph &belief,
                               std::size_t trials, SplitMix64 &rng);

struct MpspOptions {
    std::size_t candidates = 20;  // m
    std::size_t mc_runs = 1000;   // N
};

/// Candidate with the highest estimated shortest-path probability; ties go to
/// the earlier (shorter) candidate.
std::optional<Path> mpsp_path(const BeliefGraph &belief, const GraphPosition &from, VertexId to,
                              const MpspOptions &options, SplitMix64 &rng);

/// First Uninspected edge of `path` with the lowest existence probability.
std::optional<EdgeId> least_probable_uninspected(const Path &path, const BeliefGraph &belief);

}  // namespace uvplan
