#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace uvplan {

using VertexId = std::uint32_t;
/// Dense index into RoadNetwork::edges(). The edge itself stores its
/// canonical endpoint pair (u < v).
using EdgeId = std::uint32_t;

struct Point2D {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Point2D &) const = default;
};

double distance(const Point2D &a, const Point2D &b);

struct Edge {
    VertexId u;
    VertexId v;
    double length;

    VertexId other(VertexId end) const { return end == u ? v : u; }
    bool has_end(VertexId end) const { return end == u || end == v; }
};

struct Adjacent {
    VertexId neighbor;
    EdgeId edge;
};

class GraphError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// File could not be read or written.
class IoError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct NetworkOptions {
    /// An edge may be longer than the straight chord between its endpoints,
    /// but not shorter by more than this many meters.
    double chord_tolerance = 0.05;
};

// Immutable undirected road network. Adjacency lists are sorted by neighbor
// id so every traversal order is reproducible.
class RoadNetwork {
   public:
    RoadNetwork(std::vector<Point2D> vertices, std::vector<Edge> edges, NetworkOptions options = {});

    std::size_t vertex_count() const { return points_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    const Point2D &point(VertexId v) const { return points_.at(v); }
    const std::vector<Point2D> &points() const { return points_; }
    const Edge &edge(EdgeId e) const { return edges_.at(e); }
    const std::vector<Edge> &edges() const { return edges_; }
    std::span<const Adjacent> neighbors(VertexId v) const;

    std::optional<EdgeId> find_edge(VertexId a, VertexId b) const;
    std::size_t degree(VertexId v) const { return neighbors(v).size(); }

    /// FNV-1a over the exact vertex coordinates and edge list.
    std::uint64_t content_hash() const;

   private:
    std::vector<Point2D> points_;
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_;
    std::vector<Adjacent> adjacency_;
};

/// Parses the graph document `{"vertices": [...], "edges": [...]}`.
RoadNetwork load_network(std::string_view document, NetworkOptions options = {});
RoadNetwork load_network_file(const std::string &path, NetworkOptions options = {});
std::string network_to_json(const RoadNetwork &network);

struct AtVertex {
    VertexId vertex;

    bool operator==(const AtVertex &) const = default;
};

/// Interior point of an edge. `fraction` is the arc-length fraction measured
/// from the canonical endpoint edge.u; `heading` is the endpoint the vehicle
/// faces.
struct OnEdge {
    EdgeId edge;
    double fraction;
    VertexId heading;

    bool operator==(const OnEdge &) const = default;
};

using GraphPosition = std::variant<AtVertex, OnEdge>;

/// Vertex coordinates, or straight-chord interpolation for interior points.
Point2D euclidean_point(const RoadNetwork &network, const GraphPosition &position);

/// Stable string form, e.g. "v12" or "e7@0.25->3".
std::string to_string(const GraphPosition &position);

}  // namespace uvplan
