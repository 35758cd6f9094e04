#pragma once

#include <string>

#include "uvplan/engine.hpp"
#include "uvplan/road_graph.hpp"

namespace fixture {

using namespace uvplan;

/// s(0) - d(1), 100 m.
inline RoadNetwork single_edge() { return RoadNetwork({{0, 0}, {100, 0}}, {{0, 1, 100.0}}); }

/// s(0) m(1) d(2) b(3); edges s-m, m-d, s-b, b-d in that id order.
inline RoadNetwork triangle() {
    return RoadNetwork({{0, 0}, {100, 0}, {200, 0}, {100, 80}},
                       {{0, 1, 100.0}, {1, 2, 100.0}, {0, 3, 128.06}, {2, 3, 128.06}});
}

/// m-d damaged halfway.
inline GroundTruth triangle_truth() {
    auto truth = GroundTruth::intact(4);
    truth.damaged[1] = 1;
    truth.damage_fraction[1] = 0.5;
    return truth;
}

/// s(0) a(1) d(2): route A = s-a-d (1 + 1, p = 0.9 each), route B = s-d (3, p = 0.6).
inline RoadNetwork two_route() { return RoadNetwork({{0, 0}, {1, 0}, {2, 0}}, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 3.0}}); }
inline std::vector<double> two_route_probabilities() { return {0.9, 0.9, 0.6}; }

/// Unit 4-cycle a(0) b(1) c(2) d(3).
inline RoadNetwork four_cycle() {
    return RoadNetwork({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {0, 3, 1.0}});
}

inline RoadNetwork cycle(std::size_t n) {
    std::vector<Point2D> pts;
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) pts.push_back({static_cast<double>(i), static_cast<double>(i * i)});
    for (VertexId i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1000.0});
    edges.push_back({0, static_cast<VertexId>(n - 1), 1000.0});
    return RoadNetwork(std::move(pts), std::move(edges));
}

inline RoadNetwork complete(std::size_t n) {
    std::vector<Point2D> pts;
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) pts.push_back({static_cast<double>(i), 0.0});
    for (VertexId a = 0; a < n; ++a) {
        for (VertexId b = a + 1; b < n; ++b) edges.push_back({a, b, 100.0});
    }
    return RoadNetwork(std::move(pts), std::move(edges));
}

}  // namespace fixture
