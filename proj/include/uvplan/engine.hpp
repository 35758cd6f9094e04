#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "uvplan/belief.hpp"
#include "uvplan/paths.hpp"
#include "uvplan/road_graph.hpp"

namespace uvplan {

/// Hidden damage: which edges are impassable and where on each the damage
/// point lies (fraction from edge.u, strictly inside (0, 1)).
struct GroundTruth {
    std::vector<char> damaged;
    std::vector<double> damage_fraction;

    static GroundTruth intact(std::size_t edge_count);
    bool is_damaged(EdgeId e) const { return damaged.at(e) != 0; }
    std::size_t damaged_count() const;
    void validate(const RoadNetwork &network) const;
    bool operator==(const GroundTruth &) const = default;
};

struct SpeedConfig {
    double ugv = 20.0;  // m/s
    double uav = 40.0;  // m/s
};

struct UgvState {
    GraphPosition position;
    double speed = 20.0;
    std::optional<Path> plan;
    VertexId last_vertex = 0;
    double odometer = 0.0;
    /// Set after the UGV stops at a damage point, until it moves off it.
    bool backtrack_pending = false;
};

/// Straight-line deadhead toward a vertex, `progress` meters along the way.
struct FreeFlight {
    Point2D from;
    VertexId to;
    double progress;
};

using UavPosition = std::variant<AtVertex, OnEdge, FreeFlight>;

/// Inspect `edge` flying from `entry` to `exit`.
struct InspectionTask {
    EdgeId edge;
    VertexId entry;
    VertexId exit;

    bool operator==(const InspectionTask &) const = default;
};

struct UavState {
    UavPosition position;
    double speed = 40.0;
    std::optional<InspectionTask> task;
};

Point2D uav_point(const RoadNetwork &network, const UavState &uav);

enum class EventKind { UgvReachedDestination, UgvHitDamage, UavHitDamage, UavInspectionComplete, NoPath };

std::string_view to_string(EventKind kind);

inline constexpr int kUgvActor = -1;

struct Event {
    double time = 0.0;
    EventKind kind = EventKind::NoPath;
    int actor = kUgvActor;  // kUgvActor or the UAV index
    std::optional<EdgeId> edge;
    double fraction = 0.0;  // damage point from edge.u, when relevant
    Point2D position;

    bool operator==(const Event &) const = default;
};

/// Time until a vehicle must stop, and why. `seconds` is +infinity for an
/// idle UAV.
struct StopForecast {
    double seconds = std::numeric_limits<double>::infinity();
    std::optional<EventKind> kind;
    std::optional<EdgeId> edge;
    double fraction = 0.0;
    double distance = std::numeric_limits<double>::infinity();
};

StopForecast ugv_time_to_event(const UgvState &ugv, const BeliefGraph &belief, const GroundTruth &truth);
StopForecast uav_time_to_event(const UavState &uav, const BeliefGraph &belief, const GroundTruth &truth);

/// Turn a UGV stopped at a damage point back toward the vertex it entered
/// the edge from. The return distance is paid by its next plan.
void apply_backtrack(UgvState &ugv);

struct PlanAssignment {
    std::optional<Path> ugv_plan;
    /// One entry per UAV (an empty vector leaves every UAV idle).
    std::vector<std::optional<InspectionTask>> uav_tasks;
};

/// Read-only snapshot handed to strategies.
struct PlanningView {
    const BeliefGraph &belief;
    const UgvState &ugv;
    std::span<const UavState> uavs;
    VertexId destination;
};

struct SimConfig {
    VertexId ugv_start = 0;
    VertexId uav_start = 0;
    VertexId destination = 0;
    SpeedConfig speeds;
    std::size_t uav_count = 1;
    /// Prior existence probability per edge; empty means 1 everywhere.
    std::vector<double> edge_probabilities;
};

struct TracePoint {
    double time;
    GraphPosition position;
};

struct SimOutcome {
    double travel_time = 0.0;
    double computation_time = 0.0;
    bool reached = false;
    std::vector<Event> event_log;
    std::size_t edges_inspected = 0;
    std::vector<TracePoint> ugv_trajectory;
    double odometer = 0.0;
    std::size_t replans = 0;
};

class Strategy;

// One simulation: owns the belief and the vehicle states. find_event_and_update
// advances every vehicle to the earliest stopping event of the current plans.
class Simulation {
   public:
    Simulation(const RoadNetwork &network, const GroundTruth &truth, const SimConfig &config);

    /// Marks every edge Safe or Damaged according to the ground truth.
    void reveal_truth();

    PlanningView view() const { return {belief_, ugv_, uavs_, config_.destination}; }
    void assign(PlanAssignment assignment);

    struct Step {
        double step_time;
        bool keep_going;
    };
    Step find_event_and_update();

    const BeliefGraph &belief() const { return belief_; }
    const UgvState &ugv() const { return ugv_; }
    const std::vector<UavState> &uavs() const { return uavs_; }
    const std::vector<Event> &events() const { return events_; }
    const std::vector<TracePoint> &trajectory() const { return trajectory_; }
    double elapsed() const { return elapsed_; }
    bool reached() const { return reached_; }
    std::size_t edges_inspected() const { return edges_inspected_; }

   private:
    void advance_ugv(double distance, const StopForecast *stop);
    void advance_uav(UavState &uav, double distance, const StopForecast *stop);

    const RoadNetwork &network_;
    GroundTruth truth_;
    SimConfig config_;
    BeliefGraph belief_;
    UgvState ugv_;
    std::vector<UavState> uavs_;
    double edge_entry_odometer_ = 0.0;  // odometer when the UGV last left a vertex
    bool edge_clean_ = false;           // no turn since then
    std::vector<Event> events_;
    std::vector<TracePoint> trajectory_;
    double elapsed_ = 0.0;
    bool reached_ = false;
    std::size_t edges_inspected_ = 0;
};

/// Replan / advance loop until the UGV reaches the destination or no path
/// remains. Deterministic given (network, truth, strategy state, config).
SimOutcome run(const RoadNetwork &network, const GroundTruth &truth, Strategy &strategy, const SimConfig &config);

/// Event log as a JSON array of {t, kind, actor, edge, position}.
std::string events_to_json(const std::vector<Event> &events);

}  // namespace uvplan
