#include "uvplan/road_graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace uvplan {

double distance(const Point2D &a, const Point2D &b) { return std::hypot(a.x - b.x, a.y - b.y); }

RoadNetwork::RoadNetwork(std::vector<Point2D> vertices, std::vector<Edge> edges, NetworkOptions options)
    : points_(std::move(vertices)), edges_(std::move(edges)) {
    const std::size_t n = points_.size();
    if (n == 0) throw GraphError("network has no vertices");
    for (const auto &p : points_) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw GraphError("non-finite vertex coordinate");
    }

    std::vector<std::size_t> degree(n, 0);
    for (auto &e : edges_) {
        if (e.u >= n || e.v >= n) throw GraphError("edge endpoint out of range");
        if (e.u == e.v) throw GraphError("self-loop at vertex " + std::to_string(e.u));
        if (e.u > e.v) std::swap(e.u, e.v);
        if (!(e.length > 0.0) || !std::isfinite(e.length)) throw GraphError("nonpositive length");
        const double chord = distance(points_[e.u], points_[e.v]);
        if (e.length < chord - options.chord_tolerance) {
            throw GraphError("edge " + std::to_string(e.u) + "-" + std::to_string(e.v) +
                             " is shorter than its chord");
        }
        ++degree[e.u];
        ++degree[e.v];
    }

    offsets_.assign(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
    adjacency_.resize(offsets_[n]);
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (EdgeId id = 0; id < edges_.size(); ++id) {
        const auto &e = edges_[id];
        adjacency_[fill[e.u]++] = {e.v, id};
        adjacency_[fill[e.v]++] = {e.u, id};
    }
    for (std::size_t v = 0; v < n; ++v) {
        auto first = adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]);
        auto last = adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]);
        std::sort(first, last, [](const Adjacent &a, const Adjacent &b) { return a.neighbor < b.neighbor; });
        auto dup = std::adjacent_find(
            first, last, [](const Adjacent &a, const Adjacent &b) { return a.neighbor == b.neighbor; });
        if (dup != last) {
            throw GraphError("duplicate edge " + std::to_string(v) + "-" + std::to_string(dup->neighbor));
        }
    }

    // BFS from vertex 0.
    std::vector<char> seen(n, 0);
    std::vector<VertexId> frontier{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!frontier.empty()) {
        const VertexId v = frontier.back();
        frontier.pop_back();
        for (const auto &adj : neighbors(v)) {
            if (!seen[adj.neighbor]) {
                seen[adj.neighbor] = 1;
                ++reached;
                frontier.push_back(adj.neighbor);
            }
        }
    }
    if (reached != n) throw GraphError("disconnected graph");
}

std::span<const Adjacent> RoadNetwork::neighbors(VertexId v) const {
    if (v >= points_.size()) throw std::out_of_range("vertex id out of range");
    return {adjacency_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

std::optional<EdgeId> RoadNetwork::find_edge(VertexId a, VertexId b) const {
    if (a >= points_.size() || b >= points_.size()) return std::nullopt;
    const auto adj = neighbors(a);
    auto it = std::lower_bound(adj.begin(), adj.end(), b,
                               [](const Adjacent &x, VertexId target) { return x.neighbor < target; });
    if (it == adj.end() || it->neighbor != b) return std::nullopt;
    return it->edge;
}

std::uint64_t RoadNetwork::content_hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](std::uint64_t word) {
        for (int i = 0; i < 8; ++i) {
            h ^= (word >> (8 * i)) & 0xffU;
            h *= 0x100000001b3ULL;
        }
    };
    feed(points_.size());
    for (const auto &p : points_) {
        feed(std::bit_cast<std::uint64_t>(p.x));
        feed(std::bit_cast<std::uint64_t>(p.y));
    }
    feed(edges_.size());
    for (const auto &e : edges_) {
        feed(e.u);
        feed(e.v);
        feed(std::bit_cast<std::uint64_t>(e.length));
    }
    return h;
}

RoadNetwork load_network(std::string_view document, NetworkOptions options) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(document);
    } catch (const nlohmann::json::parse_error &err) {
        throw GraphError(std::string("parse failure: ") + err.what());
    }
    try {
        const auto &jv = doc.at("vertices");
        const auto &je = doc.at("edges");
        if (!jv.is_array() || !je.is_array()) throw GraphError("parse failure: vertices/edges must be arrays");

        std::vector<Point2D> points(jv.size());
        std::vector<char> present(jv.size(), 0);
        for (const auto &item : jv) {
            const auto id = item.at("id").get<std::int64_t>();
            if (id < 0 || static_cast<std::size_t>(id) >= jv.size() || present[static_cast<std::size_t>(id)]) {
                throw GraphError("vertex ids must be dense 0..n-1");
            }
            present[static_cast<std::size_t>(id)] = 1;
            points[static_cast<std::size_t>(id)] = {item.at("x").get<double>(), item.at("y").get<double>()};
        }

        std::vector<Edge> edges;
        edges.reserve(je.size());
        for (const auto &item : je) {
            const auto u = item.at("u").get<std::int64_t>();
            const auto v = item.at("v").get<std::int64_t>();
            if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= points.size() ||
                static_cast<std::size_t>(v) >= points.size()) {
                throw GraphError("edge endpoint out of range");
            }
            edges.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v), item.at("length").get<double>()});
        }
        return RoadNetwork(std::move(points), std::move(edges), options);
    } catch (const nlohmann::json::exception &err) {
        throw GraphError(std::string("parse failure: ") + err.what());
    }
}

RoadNetwork load_network_file(const std::string &path, NetworkOptions options) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open graph file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return load_network(buffer.str(), options);
}

std::string network_to_json(const RoadNetwork &network) {
    nlohmann::json doc;
    auto &jv = doc["vertices"] = nlohmann::json::array();
    for (VertexId v = 0; v < network.vertex_count(); ++v) {
        jv.push_back({{"id", v}, {"x", network.point(v).x}, {"y", network.point(v).y}});
    }
    auto &je = doc["edges"] = nlohmann::json::array();
    for (const auto &e : network.edges()) je.push_back({{"u", e.u}, {"v", e.v}, {"length", e.length}});
    return doc.dump();
}

Point2D euclidean_point(const RoadNetwork &network, const GraphPosition &position) {
    if (const auto *at = std::get_if<AtVertex>(&position)) return network.point(at->vertex);
    const auto &on = std::get<OnEdge>(position);
    const auto &e = network.edge(on.edge);
    const auto &a = network.point(e.u);
    const auto &b = network.point(e.v);
    return {a.x + on.fraction * (b.x - a.x), a.y + on.fraction * (b.y - a.y)};
}

std::string to_string(const GraphPosition &position) {
    if (const auto *at = std::get_if<AtVertex>(&position)) return "v" + std::to_string(at->vertex);
    const auto &on = std::get<OnEdge>(position);
    std::ostringstream out;
    out.precision(17);
    out << "e" << on.edge << "@" << on.fraction << "->" << on.heading;
    return out.str();
}

}  // namespace uvplan
