// Acceptance suite: one PASS/FAIL line per primary criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <string>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "uvplan/batch.hpp"
#include "uvplan/criticality.hpp"
#include "uvplan/mpsp.hpp"
#include "uvplan/scenario.hpp"

using namespace uvplan;

namespace {

int failures = 0;

struct Verdict {
    bool pass;
    std::string detail;
};

void criterion(const char *name, double budget_seconds, const std::function<Verdict()> &body) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v{false, ""};
    try {
        v = body();
    } catch (const std::exception &err) {
        v = {false, std::string("exception: ") + err.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (budget_seconds > 0 && secs > budget_seconds) {
        v.pass = false;
        v.detail += " [over time budget " + format_double(budget_seconds) + " s]";
    }
    if (!v.pass) ++failures;
    std::printf("[%s] %s: %s (%.2f s)\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str(), secs);
    std::fflush(stdout);
}

std::string fmt(const char *format, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, format, a, b, c, d);
    return buf;
}

Verdict paths_oracle() {
    SplitMix64 rng(20240601);
    int mismatches = 0;
    int queries = 0;
    for (int g = 0; g < 200; ++g) {
        const std::size_t n = 2 + rng.below(7);
        const auto net = oracle::random_connected_graph(rng, n, 0.3 + 0.3 * rng.uniform01());
        BeliefGraph belief(net);
        for (EdgeId e = 0; e < net.edge_count(); ++e) {
            if (rng.uniform01() < 0.1) belief.mark_damaged(e, 0.5);
        }
        for (int q = 0; q < 3; ++q) {
            GraphPosition from = AtVertex{static_cast<VertexId>(rng.below(n))};
            if (q == 2) {
                const auto host = static_cast<EdgeId>(rng.below(net.edge_count()));
                if (belief.traversable(host)) from = OnEdge{host, 0.25, net.edge(host).u};
            }
            const auto to = static_cast<VertexId>(rng.below(n));
            const auto origin = resolve_origin(belief, from);
            const auto all = oracle::all_simple_paths(net, origin, to, belief_filter(belief, origin));
            ++queries;
            const auto sp = shortest_path(belief, from, to);
            bool ok = all.empty() ? !sp : (sp && sp->vertices == all[0].vertices && sp->total_length == all[0].total_length);
            for (std::size_t k = 1; k <= 5 && ok; ++k) {
                const auto got = k_shortest_paths(belief, from, to, k);
                const std::size_t want = std::min(k, all.size());
                ok = got.size() == want;
                for (std::size_t i = 0; ok && i < want; ++i) {
                    ok = got[i].vertices == all[i].vertices && got[i].total_length == all[i].total_length;
                }
            }
            if (!ok) ++mismatches;
        }
    }
    return {mismatches == 0, std::to_string(queries) + " queries on 200 graphs, " + std::to_string(mismatches) +
                                 " mismatches"};
}

Verdict kemeny_oracle() {
    double worst = 0.0;
    auto rel = [](double a, double b) { return std::fabs(a - b) / std::max(1.0, std::fabs(b)); };
    int graphs = 0;
    for (std::size_t n = 3; n <= 8; ++n, ++graphs) {
        const auto net = fixture::cycle(n);
        worst = std::max(worst, rel(kemeny_constant(net), oracle::kemeny_by_eigenvalues(net)));
    }
    for (std::size_t n = 3; n <= 6; ++n, ++graphs) {
        const auto net = fixture::complete(n);
        worst = std::max(worst, rel(kemeny_constant(net), oracle::kemeny_by_eigenvalues(net)));
    }
    SplitMix64 rng(4242);
    bool bridges_ok = true;
    double worst_removal = 0.0;
    for (int t = 0; t < 50; ++t, ++graphs) {
        const auto net = oracle::random_connected_graph(rng, 3 + rng.below(10), 0.25);
        worst = std::max(worst, rel(kemeny_constant(net), oracle::kemeny_by_eigenvalues(net)));
        const auto table = edge_criticalities(net);
        const auto bridges = find_bridges(net);
        std::vector<char> keep(net.edge_count(), 1);
        for (EdgeId e = 0; e < net.edge_count(); ++e) {
            // A bridge is exactly an edge whose removal disconnects the graph.
            keep[e] = 0;
            bool disconnected = false;
            try {
                (void)kemeny_constant(net, keep);
            } catch (const GraphError &) {
                disconnected = true;
            }
            if (disconnected != bool(bridges[e])) bridges_ok = false;
            if (bridges[e]) {
                if (!(std::isinf(table[e]) && table[e] > 0)) bridges_ok = false;
            } else {
                worst_removal = std::max(worst_removal, rel(table[e], oracle::kemeny_by_eigenvalues(net, keep)));
            }
            keep[e] = 1;
        }
    }
    const double c4 = kemeny_constant(fixture::cycle(4));
    const double k3 = kemeny_constant(fixture::complete(3));
    const bool closed = std::fabs(c4 - 2.5) <= 1e-9 && std::fabs(k3 - 4.0 / 3.0) <= 1e-9;
    const bool pass = worst <= 1e-6 && worst_removal <= 1e-6 && closed && bridges_ok;
    return {pass, std::to_string(graphs) + " graphs, max rel err " + fmt("%.2e", worst) + ", edge-removal max rel err " +
                      fmt("%.2e", worst_removal) + fmt(", C4=%.12f K3=%.12f", c4, k3) +
                      (bridges_ok ? ", bridges +inf" : ", BRIDGE MISMATCH")};
}

Verdict mpsp_oracle() {
    const auto net = fixture::two_route();
    BeliefGraph belief(net, fixture::two_route_probabilities());
    SplitMix64 gen(1);
    const auto set = generate_candidates(belief, AtVertex{0}, 2, 20, gen);
    if (set.size() != 2) return {false, "expected 2 candidates, got " + std::to_string(set.size())};
    const double a = oracle::exact_sp_probability(set, 0, belief);
    const double b = oracle::exact_sp_probability(set, 1, belief);
    const bool exact = std::fabs(a - 0.81) <= 1e-12 && std::fabs(b - 0.114) <= 1e-12;
    int inside = 0;
    int route_a = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        SplitMix64 rng(seed);
        const auto est = estimate_sp_probability_with_error(set, 1, belief, 10000, rng);
        // The 1e-12 slack only absorbs rounding when the standard error is 0.
        if (std::fabs(est.value - b) <= 3.0 * est.standard_error + 1e-12) ++inside;
        SplitMix64 run_rng(seed);
        const auto path = mpsp_path(belief, AtVertex{0}, 2, {20, 10000}, run_rng);
        if (path && path->vertices == std::vector<VertexId>{0, 1, 2}) ++route_a;
    }
    const bool pass = exact && inside >= 95 && route_a == 100;
    return {pass, fmt("exact %.12f / %.12f", a, b) + ", within 3 SE on " + std::to_string(inside) +
                      "/100 seeds, route A on " + std::to_string(route_a) + "/100"};
}

Verdict step_oracle() {
    const auto grid = synthetic_grid(5, 5, 50.0);
    const std::vector<std::string> names{"perfect", "ugv-only", "kemeny", "k-shortest", "mpsp", "bidirectional",
                                         "multi-bidirectional:3"};
    const double dt = 1e-4;
    int runs = 0;
    int bad = 0;
    std::size_t events = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto inst = generate_instance(grid, seed);
        const SpeedConfig speeds{20.0, seed % 3 == 0 ? 20.0 : (seed % 3 == 1 ? 30.0 : 40.0)};
        for (const auto &name : names) {
            const auto spec = parse_strategy(name);
            const auto cfg = to_sim_config(inst, speeds);
            const auto engine = run(grid, inst.truth, spec, cfg, {inst.seed, nullptr});
            const auto ref = oracle::stepped_run(grid, inst.truth, spec, cfg, inst.seed, dt);
            ++runs;
            bool ok = engine.event_log.size() == ref.events.size() && engine.reached == ref.reached &&
                      std::fabs(engine.travel_time - ref.travel_time) <= 2 * dt;
            worst = std::max(worst, std::fabs(engine.travel_time - ref.travel_time));
            for (std::size_t i = 0; ok && i < ref.events.size(); ++i) {
                const auto &x = engine.event_log[i];
                const auto &y = ref.events[i];
                const double gap = std::fabs(x.time - y.time);
                worst = std::max(worst, gap);
                ok = x.kind == y.kind && x.actor == y.actor && x.edge == y.edge && gap <= 2 * dt;
            }
            events += ref.events.size();
            if (!ok) ++bad;
        }
    }
    return {bad == 0, std::to_string(runs) + " runs, " + std::to_string(events) + " events, " + std::to_string(bad) +
                          " mismatches, max time gap " + fmt("%.2e", worst) + " s"};
}

Verdict forced_arithmetic() {
    const auto net = fixture::single_edge();
    SimConfig cfg;
    cfg.ugv_start = 0;
    cfg.uav_start = 0;
    cfg.destination = 1;
    const auto safe = run(net, GroundTruth::intact(1), parse_strategy("ugv-only"), cfg);
    auto truth = GroundTruth::intact(1);
    truth.damaged[0] = 1;
    truth.damage_fraction[0] = 0.5;
    const auto cut = run(net, truth, parse_strategy("ugv-only"), cfg);
    const bool pass = safe.travel_time == 5.0 && safe.reached && cut.travel_time == 5.0 && !cut.reached;
    return {pass, fmt("reach %.17g s, damaged %.17g s", safe.travel_time, cut.travel_time) +
                      (cut.reached ? " reached=true" : " reached=false")};
}

// The shared 500-instance batch on the 20x20 grid.
struct GridBatch {
    std::vector<ResultRow> rows;
    std::vector<InstanceSpec> instances;
    std::shared_ptr<const RoadNetwork> grid;
    std::size_t reduction_mismatches = 0;
    std::vector<std::string> failures;
};

const GridBatch &grid_batch() {
    static const GridBatch batch = [] {
        GridBatch b;
        b.grid = std::make_shared<const RoadNetwork>(synthetic_grid(20, 20, 50.0));
        for (std::uint64_t seed = 0; seed < 500; ++seed) b.instances.push_back(generate_instance(*b.grid, seed));
        const MapSource source{"grid20x20", b.grid};

        BatchInput all;
        all.maps.push_back({source, b.instances});
        all.strategies = {parse_strategy("perfect"),    parse_strategy("ugv-only"),
                          parse_strategy("kemeny"),     parse_strategy("k-shortest"),
                          parse_strategy("mpsp"),       parse_strategy("multi-bidirectional:1"),
                          parse_strategy("multi-bidirectional:7")};
        all.speeds = {{20.0, 40.0}};
        auto out = run_batch(all);
        b.rows = std::move(out.rows);
        b.failures = std::move(out.failures);

        BatchInput bi;
        bi.maps.push_back({source, b.instances});
        bi.strategies = {parse_strategy("bidirectional")};
        bi.speeds = {{20.0, 20.0}, {20.0, 30.0}, {20.0, 40.0}};
        auto more = run_batch(bi);
        b.rows.insert(b.rows.end(), more.rows.begin(), more.rows.end());
        b.failures.insert(b.failures.end(), more.failures.begin(), more.failures.end());
        return b;
    }();
    return batch;
}

double mean_of(const std::vector<ResultRow> &rows, const std::string &strategy, double v_a,
               double ResultRow::*field = &ResultRow::travel_time) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto &r : rows) {
        if (r.strategy == strategy && r.v_a == v_a) {
            sum += r.*field;
            ++n;
        }
    }
    return n ? sum / double(n) : std::nan("");
}

Verdict lower_bound() {
    const auto &b = grid_batch();
    if (!b.failures.empty()) return {false, std::to_string(b.failures.size()) + " failed cells: " + b.failures[0]};
    std::map<std::uint64_t, double> perfect;
    for (const auto &r : b.rows) {
        if (r.strategy == "perfect") perfect[r.seed] = r.travel_time;
    }
    std::size_t compared = 0;
    std::size_t violations = 0;
    for (const auto &r : b.rows) {
        if (r.strategy == "perfect") continue;
        ++compared;
        if (perfect.at(r.seed) > r.travel_time) ++violations;
    }
    return {perfect.size() == 500 && violations == 0,
            std::to_string(perfect.size()) + " instances, " + std::to_string(compared) + " strategy runs, " +
                std::to_string(violations) + " violations"};
}

Verdict aggregate_trend() {
    const auto &b = grid_batch();
    const double ugv = mean_of(b.rows, "ugv-only", 40.0);
    double reduction[3];
    const double speeds[3] = {20.0, 30.0, 40.0};
    for (int i = 0; i < 3; ++i) reduction[i] = 1.0 - mean_of(b.rows, "bidirectional", speeds[i]) / ugv;
    int inversions = 0;
    bool small = true;
    for (int i = 1; i < 3; ++i) {
        if (reduction[i] < reduction[i - 1]) {
            ++inversions;
            if (reduction[i - 1] - reduction[i] > 0.01) small = false;
        }
    }
    const bool pass = reduction[2] >= 0.15 && inversions <= 1 && small;
    return {pass, fmt("ugv-only mean %.3f s; bidirectional reduction 20:20 %.2f%%, 20:30 %.2f%%, 20:40 %.2f%%", ugv,
                      100 * reduction[0], 100 * reduction[1], 100 * reduction[2])};
}

Verdict multi_trend() {
    const auto &b = grid_batch();
    const double one = mean_of(b.rows, "bidirectional", 40.0);
    const double seven = mean_of(b.rows, "multi-bidirectional:7", 40.0);
    const double c_one = mean_of(b.rows, "bidirectional", 40.0, &ResultRow::computation_time);
    const double c_seven = mean_of(b.rows, "multi-bidirectional:7", 40.0, &ResultRow::computation_time);
    return {seven <= one && c_seven > c_one,
            fmt("mean travel 7 UAVs %.3f s vs 1 UAV %.3f s; mean computation %.3e s vs %.3e s", seven, one, c_seven,
                c_one)};
}

Verdict reduction_identity() {
    const auto &b = grid_batch();
    std::size_t checked = 0;
    std::size_t mismatched = 0;
    SimConfig base;
    for (const auto &inst : b.instances) {
        const auto cfg = to_sim_config(inst, {20.0, 40.0});
        const auto x = run(*b.grid, inst.truth, parse_strategy("bidirectional"), cfg);
        const auto y = run(*b.grid, inst.truth, parse_strategy("multi-bidirectional:1"), cfg);
        ++checked;
        if (!(x.event_log == y.event_log) || x.travel_time != y.travel_time) ++mismatched;
    }
    return {mismatched == 0, std::to_string(checked) + " instances, " + std::to_string(mismatched) + " differing logs"};
}

std::string travel_column(const std::vector<ResultRow> &rows) {
    std::string out;
    for (const auto &r : rows) {
        out += r.map + "," + std::to_string(r.seed) + "," + r.strategy + "," + format_double(r.v_a) + "," +
               format_double(r.travel_time) + "\n";
    }
    return out;
}

Verdict determinism() {
    const auto grid = std::make_shared<const RoadNetwork>(synthetic_grid(20, 20, 50.0));
    BatchInput input;
    std::vector<InstanceSpec> instances;
    for (std::uint64_t seed = 1000; seed < 1030; ++seed) instances.push_back(generate_instance(*grid, seed));
    input.maps.push_back({MapSource{"grid20x20", grid}, instances});
    input.strategies = {parse_strategy("ugv-only"), parse_strategy("kemeny"), parse_strategy("k-shortest"),
                        parse_strategy("mpsp"), parse_strategy("bidirectional"), parse_strategy("multi-bidirectional:5")};
    input.speeds = {{20.0, 20.0}, {20.0, 40.0}};
    std::vector<std::string> columns;
    for (const std::size_t jobs : {1, 1, 3, 8}) {
        input.jobs = jobs;
        columns.push_back(travel_column(run_batch(input).rows));
    }
    bool same = true;
    for (const auto &c : columns) same = same && c == columns[0];
    return {same, "4 batches (jobs 1, 1, 3, 8) of " + std::to_string(instances.size() * 12) + " cells, " +
                      (same ? "byte-identical" : "DIFFERENT") + " travel-time columns"};
}

}  // namespace

int main() {
    std::printf("uvplan acceptance suite\n");
    criterion("oracle equivalence: paths", 10.0, paths_oracle);
    criterion("oracle equivalence: Kemeny", 10.0, kemeny_oracle);
    criterion("oracle equivalence: MPSP", 30.0, mpsp_oracle);
    criterion("engine vs step oracle (5x5 grid, 50 instances, all strategies)", 120.0, step_oracle);
    criterion("forced-arithmetic fixtures", 0.0, forced_arithmetic);
    criterion("lower-bound dominance (20x20 grid, 500 instances)", 0.0, lower_bound);
    criterion("aggregate trend: bidirectional vs UGV-only", 0.0, aggregate_trend);
    criterion("multi-UAV trend: 7 UAVs vs 1", 0.0, multi_trend);
    criterion("reduction identity: multi-UAV k=1 equals bidirectional (500 instances)", 0.0, reduction_identity);
    criterion("determinism across worker counts", 0.0, determinism);

    if (const char *city = std::getenv("UVPLAN_CITY_MAP")) {
        criterion("optional at-scale city ordering", 0.0, [city] {
            const auto map = load_map(city);
            BatchInput input;
            std::vector<InstanceSpec> instances;
            for (std::uint64_t s = 0; s < 50; ++s) instances.push_back(generate_instance(*map.network, s));
            input.maps.push_back({map, instances});
            input.strategies = {parse_strategy("ugv-only"), parse_strategy("kemeny"), parse_strategy("bidirectional")};
            input.speeds = {{20.0, 40.0}};
            const auto rows = run_batch(input).rows;
            const double u = mean_of(rows, "ugv-only", 40.0);
            const double k = mean_of(rows, "kemeny", 40.0);
            const double b = mean_of(rows, "bidirectional", 40.0);
            return Verdict{b <= k && k <= u, fmt("bidirectional %.2f, kemeny %.2f, ugv-only %.2f", b, k, u)};
        });
    } else {
        std::printf("[SKIP] optional at-scale city ordering: set UVPLAN_CITY_MAP to a converted city graph\n");
    }

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
