#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "uvplan/belief.hpp"
#include "uvplan/road_graph.hpp"

namespace uvplan {

/// A route over whole edges. When it starts from an interior point,
/// `access_length` is the distance from that point to vertices.front() and
/// total_length = access_length + sum of edge lengths along `vertices`.
struct Path {
    std::vector<VertexId> vertices;
    double access_length = 0.0;
    double total_length = 0.0;

    std::vector<EdgeId> edges(const RoadNetwork &network) const;
    bool operator==(const Path &) const = default;
};

/// Ordering used for every tie-break: total length, then vertex sequence.
bool path_less(const Path &a, const Path &b);

struct Entry {
    VertexId vertex;
    double access;
};

/// Start of a query: the vertices it may enter the graph through. For an
/// interior origin these are the endpoints of `host_edge` not cut off by a
/// known damage point; the host edge itself is then excluded from the search.
struct Origin {
    std::vector<Entry> entries;
    std::optional<EdgeId> host_edge;
};

Origin resolve_origin(const BeliefGraph &belief, const GraphPosition &from);

using EdgeFilter = std::function<bool(EdgeId)>;

/// Minimum-length path over edges accepted by `allowed`; ties go to the
/// lexicographically smallest vertex sequence.
std::optional<Path> shortest_path(const RoadNetwork &network, const Origin &origin, VertexId to,
                                  const EdgeFilter &allowed);

/// Yen's loopless k shortest paths under the same ordering.
std::vector<Path> k_shortest_paths(const RoadNetwork &network, const Origin &origin, VertexId to,
                                   std::size_t k, const EdgeFilter &allowed);

std::optional<Path> shortest_path(const BeliefGraph &belief, const GraphPosition &from, VertexId to);
std::vector<Path> k_shortest_paths(const BeliefGraph &belief, const GraphPosition &from, VertexId to,
                                   std::size_t k);

/// Filter accepting non-Damaged edges other than the origin's host edge.
EdgeFilter belief_filter(const BeliefGraph &belief, const Origin &origin);

}  // namespace uvplan
