#include "doctest.h"
#include "fixtures.hpp"
#include "uvplan/scenario.hpp"
#include "uvplan/strategies.hpp"

using namespace uvplan;

namespace {

struct Scene {
    const RoadNetwork &net;
    BeliefGraph belief;
    UgvState ugv;
    std::vector<UavState> uavs;
    VertexId destination;

    Scene(const RoadNetwork &n, VertexId s, VertexId a, VertexId d, std::size_t uav_count = 1)
        : net(n), belief(n), ugv{AtVertex{s}, 20.0, std::nullopt, s, 0.0, false}, destination(d) {
        uavs.assign(uav_count, UavState{AtVertex{a}, 40.0, std::nullopt});
    }

    PlanAssignment plan(const std::string &token, const StrategyContext &ctx = {}) {
        auto strategy = make_strategy(parse_strategy(token), net, ctx);
        return strategy->find_path(PlanningView{belief, ugv, uavs, destination});
    }
};

// 7 - 3 - 2 - 10 along the x axis, every other id hanging off 7.
RoadNetwork figure_one() {
    std::vector<Point2D> pts(11);
    pts[7] = {0, 0};
    pts[3] = {10, 0};
    pts[2] = {20, 0};
    pts[10] = {30, 0};
    std::vector<Edge> edges{{3, 7, 10.0}, {2, 3, 10.0}, {2, 10, 10.0}};
    double y = 100.0;
    for (VertexId v : {0u, 1u, 4u, 5u, 6u, 8u, 9u}) {
        pts[v] = {0.0, y};
        edges.push_back({std::min(v, 7u), std::max(v, 7u), y});
        y += 10.0;
    }
    return RoadNetwork(pts, edges);
}

}  // namespace

TEST_CASE("strategy tokens") {
    CHECK(parse_strategy("perfect").kind == StrategyKind::PerfectKnowledge);
    CHECK(parse_strategy("ugv-only").kind == StrategyKind::UgvOnly);
    CHECK(parse_strategy("kemeny").kind == StrategyKind::Kemeny);
    CHECK(parse_strategy("k-shortest").kind == StrategyKind::KShortestPaths);
    CHECK(parse_strategy("mpsp").kind == StrategyKind::Mpsp);
    CHECK(parse_strategy("bidirectional").kind == StrategyKind::Bidirectional);
    const auto multi = parse_strategy("multi-bidirectional:7");
    CHECK(multi.kind == StrategyKind::MultiUavBidirectional);
    CHECK(multi.uavs == 7);
    CHECK(to_string(multi) == "multi-bidirectional:7");
    CHECK_THROWS_AS(parse_strategy("multi-bidirectional:0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_strategy("multi-bidirectional:x"), std::invalid_argument);
    CHECK_THROWS_AS(parse_strategy("dijkstra"), std::invalid_argument);
    auto k = parse_strategy("k-shortest");
    k.k = 1;
    CHECK_THROWS_AS(k.validate(), std::invalid_argument);
    CHECK(parse_strategy("ugv-only").uav_count() == 0);
    CHECK(parse_strategy("perfect").uav_count() == 0);
    CHECK(parse_strategy("kemeny").uav_count() == 1);
}

TEST_CASE("nearest entry by chord, ties to u") {
    const auto net = fixture::triangle();
    UavState uav{AtVertex{2}, 40.0, std::nullopt};
    CHECK(nearest_entry_task(net, uav, 1) == InspectionTask{1, 2, 1});
    uav.position = AtVertex{3};
    // b is 128.06 from both s and d (edge 0-1 has s at 128.06, m at 80).
    CHECK(nearest_entry_task(net, uav, 0) == InspectionTask{0, 1, 0});
    uav.position = FreeFlight{{100, 40}, 3, 0.0};
    CHECK(nearest_entry_task(net, uav, 0) == InspectionTask{0, 1, 0});
    uav.position = FreeFlight{{50, 40}, 3, 0.0};
    CHECK(nearest_entry_task(net, uav, 0) == InspectionTask{0, 0, 1});
}

TEST_CASE("perfect and ugv-only agree without damage") {
    const auto net = fixture::triangle();
    Scene scene(net, 0, 2, 2, 0);
    const auto a = scene.plan("perfect");
    const auto b = scene.plan("ugv-only");
    REQUIRE(a.ugv_plan);
    CHECK(*a.ugv_plan == *b.ugv_plan);
    CHECK(a.uav_tasks.empty());
}

TEST_CASE("kemeny assigns the bridge on the path") {
    // Triangle 0-1-2 plus bridge 2-3.
    const RoadNetwork net({{0, 0}, {10, 0}, {5, 5}, {5, 20}}, {{0, 1, 10}, {1, 2, 10}, {0, 2, 10}, {2, 3, 15}});
    Scene scene(net, 0, 0, 3);
    const auto out = scene.plan("kemeny");
    REQUIRE(out.ugv_plan);
    CHECK(out.ugv_plan->vertices == std::vector<VertexId>{0, 2, 3});
    REQUIRE(out.uav_tasks.size() == 1);
    REQUIRE(out.uav_tasks[0]);
    CHECK(out.uav_tasks[0]->edge == 3);

    scene.belief.mark_safe(2);
    scene.belief.mark_safe(3);
    const auto idle = scene.plan("kemeny");
    CHECK_FALSE(idle.uav_tasks[0]);
}

TEST_CASE("k-shortest counts edges over the k paths") {
    const auto net = fixture::four_cycle();
    Scene scene(net, 0, 0, 2);
    const auto out = scene.plan("k-shortest");
    REQUIRE(out.ugv_plan);
    CHECK(out.ugv_plan->vertices == std::vector<VertexId>{0, 1, 2});
    REQUIRE(out.uav_tasks[0]);
    CHECK(out.uav_tasks[0]->edge == 0);

    // A pendant edge shared by every path wins unanimously.
    const RoadNetwork tail({{0, 0}, {1, 0}, {2, 0}, {2, 1}, {1, 1}},
                           {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}, {1, 4, 1}});
    Scene t(tail, 0, 0, 3);
    const auto shared = t.plan("k-shortest");
    REQUIRE(shared.uav_tasks[0]);
    CHECK(shared.uav_tasks[0]->edge == 0);
}

TEST_CASE("mpsp on the two-route fixture") {
    const auto net = fixture::two_route();
    Scene scene(net, 0, 0, 2);
    scene.belief = BeliefGraph(net, fixture::two_route_probabilities());
    const auto out = scene.plan("mpsp", {11, nullptr});
    REQUIRE(out.ugv_plan);
    CHECK(out.ugv_plan->vertices == std::vector<VertexId>{0, 1, 2});
    REQUIRE(out.uav_tasks[0]);
    CHECK(out.uav_tasks[0]->edge == 0);

    const auto tri = fixture::triangle();
    Scene sure(tri, 0, 2, 2);
    const auto plain = sure.plan("mpsp");
    CHECK(*plain.ugv_plan == *sure.plan("ugv-only").ugv_plan);
    CHECK(plain.uav_tasks[0]->edge == 0);

    const auto single = fixture::single_edge();
    Scene none(single, 0, 0, 1);
    none.belief.mark_damaged(0, 0.5);
    CHECK_FALSE(none.plan("mpsp").ugv_plan);
}

TEST_CASE("bidirectional scans the reversed path") {
    const auto net = figure_one();
    Scene scene(net, 7, 7, 10);
    auto out = scene.plan("bidirectional");
    REQUIRE(out.ugv_plan);
    CHECK(out.ugv_plan->vertices == std::vector<VertexId>{7, 3, 2, 10});
    REQUIRE(out.uav_tasks[0]);
    CHECK(out.uav_tasks[0]->entry == 10);
    CHECK(out.uav_tasks[0]->exit == 2);

    scene.belief.mark_safe(*net.find_edge(2, 10));
    out = scene.plan("bidirectional");
    REQUIRE(out.uav_tasks[0]);
    CHECK(out.uav_tasks[0]->entry == 2);
    CHECK(out.uav_tasks[0]->exit == 3);

    scene.belief.mark_safe(*net.find_edge(2, 3));
    scene.belief.mark_safe(*net.find_edge(3, 7));
    CHECK_FALSE(scene.plan("bidirectional").uav_tasks[0]);
}

TEST_CASE("multi-UAV allocation") {
    const auto cyc = fixture::four_cycle();
    Scene two(cyc, 0, 0, 2, 2);
    const auto out = two.plan("multi-bidirectional:2");
    REQUIRE(out.uav_tasks.size() == 2);
    REQUIRE(out.uav_tasks[0]);
    REQUIRE(out.uav_tasks[1]);
    CHECK(*out.uav_tasks[0] == InspectionTask{1, 2, 1});
    CHECK(*out.uav_tasks[1] == InspectionTask{2, 2, 3});

    const auto single = fixture::single_edge();
    Scene surplus(single, 0, 0, 1, 3);
    const auto few = surplus.plan("multi-bidirectional:3");
    REQUIRE(few.uav_tasks.size() == 3);
    CHECK(few.uav_tasks[0]);
    CHECK_FALSE(few.uav_tasks[1]);
    CHECK_FALSE(few.uav_tasks[2]);

    // Three UAVs on the cycle: the third falls through to the next free edge.
    Scene three(cyc, 0, 0, 2, 3);
    const auto spread = three.plan("multi-bidirectional:3");
    REQUIRE(spread.uav_tasks[2]);
    CHECK(spread.uav_tasks[2]->edge == 0);
}

TEST_CASE("one-UAV multi equals bidirectional") {
    const auto grid = synthetic_grid(5, 5, 50.0);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto inst = generate_instance(grid, seed);
        const auto cfg = to_sim_config(inst, {20.0, 40.0});
        const auto a = run(grid, inst.truth, parse_strategy("bidirectional"), cfg);
        const auto b = run(grid, inst.truth, parse_strategy("multi-bidirectional:1"), cfg);
        CHECK(a.event_log == b.event_log);
        CHECK(a.travel_time == b.travel_time);
    }
}

TEST_CASE("assigned edges are uninspected, distinct, and on a candidate path") {
    const auto grid = synthetic_grid(5, 5, 50.0);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto inst = generate_instance(grid, seed);
        Scene scene(grid, inst.ugv_start, inst.uav_start, inst.destination, 5);
        scene.belief = BeliefGraph(grid, inst.edge_probabilities);
        for (EdgeId e = 0; e < grid.edge_count(); e += 3) scene.belief.mark_safe(e);
        for (const auto *name : {"kemeny", "k-shortest", "mpsp", "bidirectional"}) {
            const auto out = scene.plan(name, {seed, nullptr});
            REQUIRE(out.ugv_plan);
            const auto on_path = out.ugv_plan->edges(grid);
            for (const auto &t : out.uav_tasks) {
                if (!t) continue;
                CHECK(scene.belief.uninspected(t->edge));
                CHECK(std::find(on_path.begin(), on_path.end(), t->edge) != on_path.end());
            }
        }
        const auto multi = scene.plan("multi-bidirectional:5");
        std::vector<EdgeId> seen;
        for (const auto &t : multi.uav_tasks) {
            if (!t) continue;
            CHECK(scene.belief.uninspected(t->edge));
            CHECK(std::find(seen.begin(), seen.end(), t->edge) == seen.end());
            seen.push_back(t->edge);
        }
    }
}
