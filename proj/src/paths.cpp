#include "uvplan/paths.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <stdexcept>

namespace uvplan {
namespace {

constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDamageEps = 1e-12;

struct SearchLimits {
    std::span<const char> banned_vertices;  // empty = none
    std::span<const EdgeId> banned_edges;
};

class LexDijkstra {
   public:
    explicit LexDijkstra(const RoadNetwork &network)
        : network_(network),
          dist_(network.vertex_count(), kInf),
          pred_(network.vertex_count(), kNoVertex),
          done_(network.vertex_count(), 0) {}

    std::optional<Path> run(std::span<const Entry> sources, VertexId target, const EdgeFilter &allowed,
                            const SearchLimits &limits) {
        using Item = std::pair<double, VertexId>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
        auto banned = [&](VertexId v) { return !limits.banned_vertices.empty() && limits.banned_vertices[v]; };

        for (const auto &s : sources) {
            if (banned(s.vertex)) continue;
            // Entries are distinct vertices.
            dist_[s.vertex] = s.access;
            pred_[s.vertex] = kNoVertex;
            open.emplace(s.access, s.vertex);
        }

        while (!open.empty()) {
            const auto [d, x] = open.top();
            open.pop();
            if (done_[x] || d > dist_[x]) continue;
            done_[x] = 1;
            if (x == target) break;
            for (const auto &adj : network_.neighbors(x)) {
                const VertexId y = adj.neighbor;
                if (done_[y] || banned(y)) continue;
                if (!limits.banned_edges.empty() &&
                    std::find(limits.banned_edges.begin(), limits.banned_edges.end(), adj.edge) !=
                        limits.banned_edges.end()) {
                    continue;
                }
                if (!allowed(adj.edge)) continue;
                const double candidate = dist_[x] + network_.edge(adj.edge).length;
                if (candidate < dist_[y]) {
                    dist_[y] = candidate;
                    pred_[y] = x;
                    open.emplace(candidate, y);
                } else if (candidate == dist_[y] && lex_better(x, y)) {
                    pred_[y] = x;
                }
            }
        }

        std::optional<Path> result;
        if (done_[target]) {
            Path path;
            path.vertices = sequence(target);
            path.total_length = dist_[target];
            result = std::move(path);
        }
        reset();
        return result;
    }

   private:
    std::vector<VertexId> sequence(VertexId v) const {
        std::vector<VertexId> seq;
        for (VertexId cur = v; cur != kNoVertex; cur = pred_[cur]) seq.push_back(cur);
        std::reverse(seq.begin(), seq.end());
        return seq;
    }

    // Is reaching y through x lexicographically smaller than its current label?
    bool lex_better(VertexId x, VertexId y) const {
        auto via_x = sequence(x);
        via_x.push_back(y);
        const auto current = sequence(y);
        return std::lexicographical_compare(via_x.begin(), via_x.end(), current.begin(), current.end());
    }

    void reset() {
        std::fill(dist_.begin(), dist_.end(), kInf);
        std::fill(pred_.begin(), pred_.end(), kNoVertex);
        std::fill(done_.begin(), done_.end(), 0);
    }

    const RoadNetwork &network_;
    std::vector<double> dist_;
    std::vector<VertexId> pred_;
    std::vector<char> done_;
};

double access_of(const Origin &origin, VertexId first) {
    for (const auto &e : origin.entries) {
        if (e.vertex == first) return e.access;
    }
    throw std::logic_error("path does not start at an origin entry");
}

}  // namespace

std::vector<EdgeId> Path::edges(const RoadNetwork &network) const {
    std::vector<EdgeId> out;
    if (vertices.size() < 2) return out;
    out.reserve(vertices.size() - 1);
    for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
        const auto e = network.find_edge(vertices[i], vertices[i + 1]);
        if (!e) throw std::logic_error("path uses a non-existent edge");
        out.push_back(*e);
    }
    return out;
}

bool path_less(const Path &a, const Path &b) {
    if (a.total_length != b.total_length) return a.total_length < b.total_length;
    return a.vertices < b.vertices;
}

Origin resolve_origin(const BeliefGraph &belief, const GraphPosition &from) {
    Origin origin;
    if (const auto *at = std::get_if<AtVertex>(&from)) {
        origin.entries.push_back({at->vertex, 0.0});
        return origin;
    }
    const auto &on = std::get<OnEdge>(from);
    const auto &edge = belief.network().edge(on.edge);
    origin.host_edge = on.edge;
    bool reach_u = true;
    bool reach_v = true;
    if (const auto f = belief.damage_fraction(on.edge)) {
        if (std::abs(*f - on.fraction) <= kDamageEps) {
            // Standing on the damage point: only the way back is open.
            reach_u = on.heading == edge.u;
            reach_v = on.heading == edge.v;
        } else if (*f < on.fraction) {
            reach_u = false;
        } else {
            reach_v = false;
        }
    }
    if (reach_u) origin.entries.push_back({edge.u, on.fraction * edge.length});
    if (reach_v) origin.entries.push_back({edge.v, (1.0 - on.fraction) * edge.length});
    return origin;
}

EdgeFilter belief_filter(const BeliefGraph &belief, const Origin &origin) {
    const auto host = origin.host_edge;
    return [&belief, host](EdgeId e) { return belief.traversable(e) && (!host || *host != e); };
}

std::optional<Path> shortest_path(const RoadNetwork &network, const Origin &origin, VertexId to,
                                  const EdgeFilter &allowed) {
    if (to >= network.vertex_count()) throw std::out_of_range("destination out of range");
    LexDijkstra search(network);
    auto path = search.run(origin.entries, to, allowed, {});
    if (path) path->access_length = access_of(origin, path->vertices.front());
    return path;
}

std::vector<Path> k_shortest_paths(const RoadNetwork &network, const Origin &origin, VertexId to,
                                   std::size_t k, const EdgeFilter &allowed) {
    if (k == 0) throw std::invalid_argument("k must be at least 1");
    if (to >= network.vertex_count()) throw std::out_of_range("destination out of range");

    LexDijkstra search(network);
    std::vector<Path> found;
    auto first = search.run(origin.entries, to, allowed, {});
    if (!first) return found;
    first->access_length = access_of(origin, first->vertices.front());
    found.push_back(std::move(*first));

    auto order = [](const Path &a, const Path &b) { return path_less(a, b); };
    std::set<Path, decltype(order)> candidates(order);
    std::vector<char> banned(network.vertex_count(), 0);
    std::vector<EdgeId> banned_edges;

    while (found.size() < k) {
        const Path &prev = found.back();

        // Deviation before the first vertex: enter through an unused endpoint.
        {
            std::vector<Entry> fresh;
            for (const auto &entry : origin.entries) {
                const bool used = std::any_of(found.begin(), found.end(), [&](const Path &p) {
                    return p.vertices.front() == entry.vertex;
                });
                if (!used) fresh.push_back(entry);
            }
            if (!fresh.empty()) {
                if (auto spur = search.run(fresh, to, allowed, {})) {
                    spur->access_length = access_of(origin, spur->vertices.front());
                    candidates.insert(std::move(*spur));
                }
            }
        }

        double root_length = prev.access_length;
        for (std::size_t i = 0; i + 1 < prev.vertices.size(); ++i) {
            const VertexId spur_node = prev.vertices[i];
            banned_edges.clear();
            for (const auto &p : found) {
                if (p.vertices.size() > i + 1 &&
                    std::equal(prev.vertices.begin(), prev.vertices.begin() + static_cast<std::ptrdiff_t>(i + 1),
                               p.vertices.begin())) {
                    if (const auto e = network.find_edge(p.vertices[i], p.vertices[i + 1])) banned_edges.push_back(*e);
                }
            }
            const Entry source{spur_node, root_length};
            if (auto spur = search.run(std::span<const Entry>(&source, 1), to, allowed, {banned, banned_edges})) {
                Path candidate;
                candidate.vertices.assign(prev.vertices.begin(), prev.vertices.begin() + static_cast<std::ptrdiff_t>(i));
                candidate.vertices.insert(candidate.vertices.end(), spur->vertices.begin(), spur->vertices.end());
                candidate.access_length = prev.access_length;
                candidate.total_length = spur->total_length;
                if (std::find(found.begin(), found.end(), candidate) == found.end()) {
                    candidates.insert(std::move(candidate));
                }
            }
            banned[spur_node] = 1;
            root_length += network.edge(*network.find_edge(spur_node, prev.vertices[i + 1])).length;
        }
        for (const auto v : prev.vertices) banned[v] = 0;

        if (candidates.empty()) break;
        found.push_back(*candidates.begin());
        candidates.erase(candidates.begin());
    }
    return found;
}

std::optional<Path> shortest_path(const BeliefGraph &belief, const GraphPosition &from, VertexId to) {
    const auto origin = resolve_origin(belief, from);
    return shortest_path(belief.network(), origin, to, belief_filter(belief, origin));
}

std::vector<Path> k_shortest_paths(const BeliefGraph &belief, const GraphPosition &from, VertexId to,
                                   std::size_t k) {
    const auto origin = resolve_origin(belief, from);
    return k_shortest_paths(belief.network(), origin, to, k, belief_filter(belief, origin));
}

}  // namespace uvplan
