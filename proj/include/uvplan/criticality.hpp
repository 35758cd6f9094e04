#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uvplan/belief.hpp"
#include "uvplan/paths.hpp"
#include "uvplan/road_graph.hpp"

namespace uvplan {

enum class WalkWeighting {
    Uniform,        // each incident edge equally likely
    InverseLength,  // conductance 1 / length
};

enum class CriticalityMethod {
    RankOneUpdate,  // one pseudo-inverse of the Laplacian, O(n) per removed edge
    DenseSolve,     // a fresh fundamental-matrix inverse per removed edge
};

struct CriticalityOptions {
    WalkWeighting weighting = WalkWeighting::Uniform;
    CriticalityMethod method = CriticalityMethod::RankOneUpdate;
};

/// Kemeny constant of the random walk on `network` restricted to the edges
/// for which `keep` is true (all edges when empty), computed as
/// trace(Z) - 1 with Z = (I - P + 1 pi^T)^{-1}.
/// Throws GraphError when that subgraph is disconnected or has < 2 vertices.
double kemeny_constant(const RoadNetwork &network, std::span<const char> keep = {},
                       WalkWeighting weighting = WalkWeighting::Uniform);

/// Bridges of the network (Tarjan low-link), as a per-edge flag.
std::vector<char> find_bridges(const RoadNetwork &network);

// Kemeny constant of the network with each edge removed; +infinity for
// bridges. Computed once per network and never updated during a run.
class CriticalityTable {
   public:
    CriticalityTable() = default;
    explicit CriticalityTable(std::vector<double> values) : values_(std::move(values)) {}

    double operator[](EdgeId e) const { return values_.at(e); }
    std::size_t size() const { return values_.size(); }
    const std::vector<double> &values() const { return values_; }

   private:
    std::vector<double> values_;
};

CriticalityTable edge_criticalities(const RoadNetwork &network, CriticalityOptions options = {});

/// First Uninspected edge of `path` (scanned from its start) with the highest
/// criticality; nullopt when every edge on the path is inspected.
std::optional<EdgeId> most_critical_uninspected(const CriticalityTable &table, const Path &path,
                                                const BeliefGraph &belief);

/// Cache document: {"graph_hash": "<hex>", "weighting": "...", "values": [x | null]}.
/// null encodes +infinity.
void save_criticality_cache(const std::string &path, const RoadNetwork &network, const CriticalityTable &table,
                            WalkWeighting weighting);
/// Returns nullopt when the file is missing or was computed for another graph.
std::optional<CriticalityTable> load_criticality_cache(const std::string &path, const RoadNetwork &network,
                                                       WalkWeighting weighting);

}  // namespace uvplan
