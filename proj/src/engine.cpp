#include "uvplan/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "uvplan/strategies.hpp"

namespace uvplan {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Two stops closer than this (in meters of travel) happen at the same event;
// positions this close to a vertex are snapped onto it.
constexpr double kSnap = 1e-9;

double end_fraction(const Edge &e, VertexId end) { return end == e.u ? 0.0 : 1.0; }

bool strictly_between(double f, double a, double b) { return (a < f && f < b) || (b < f && f < a); }

struct Leg {
    EdgeId edge;
    double from;  // fractions from edge.u
    double to;
    VertexId end;
    bool full;
    double length;
};

std::vector<Leg> ugv_legs(const RoadNetwork &network, const UgvState &ugv) {
    const auto &plan = *ugv.plan;
    if (plan.vertices.empty()) throw std::logic_error("UGV plan has no vertices");
    std::vector<Leg> legs;
    legs.reserve(plan.vertices.size());
    const VertexId first = plan.vertices.front();
    if (const auto *on = std::get_if<OnEdge>(&ugv.position)) {
        const auto &e = network.edge(on->edge);
        if (!e.has_end(first)) throw std::logic_error("UGV plan does not start at an endpoint of its edge");
        const double to = end_fraction(e, first);
        legs.push_back({on->edge, on->fraction, to, first, false, std::abs(to - on->fraction) * e.length});
    } else if (std::get<AtVertex>(ugv.position).vertex != first) {
        throw std::logic_error("UGV plan does not start at the UGV's vertex");
    }
    for (std::size_t i = 0; i + 1 < plan.vertices.size(); ++i) {
        const auto id = network.find_edge(plan.vertices[i], plan.vertices[i + 1]);
        if (!id) throw std::logic_error("UGV plan uses a non-existent edge");
        const auto &e = network.edge(*id);
        const double from = end_fraction(e, plan.vertices[i]);
        legs.push_back({*id, from, 1.0 - from, plan.vertices[i + 1], true, e.length});
    }
    return legs;
}

struct UavLeg {
    bool continuing;
    double deadhead;
    double from;
    double to;
    double length;
};

UavLeg uav_leg(const RoadNetwork &network, const UavState &uav) {
    const auto &task = *uav.task;
    const auto &e = network.edge(task.edge);
    UavLeg leg{};
    const auto *on = std::get_if<OnEdge>(&uav.position);
    leg.continuing = on && on->edge == task.edge && on->heading == task.exit;
    if (leg.continuing) {
        leg.deadhead = 0.0;
        leg.from = on->fraction;
    } else {
        leg.deadhead = distance(uav_point(network, uav), network.point(task.entry));
        leg.from = end_fraction(e, task.entry);
    }
    leg.to = end_fraction(e, task.exit);
    leg.length = std::abs(leg.to - leg.from) * e.length;
    return leg;
}

Point2D lerp(const Point2D &a, const Point2D &b, double t) { return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)}; }

}  // namespace

GroundTruth GroundTruth::intact(std::size_t edge_count) {
    return {std::vector<char>(edge_count, 0), std::vector<double>(edge_count, 0.0)};
}

std::size_t GroundTruth::damaged_count() const {
    return static_cast<std::size_t>(std::count(damaged.begin(), damaged.end(), 1));
}

void GroundTruth::validate(const RoadNetwork &network) const {
    if (damaged.size() != network.edge_count() || damage_fraction.size() != network.edge_count()) {
        throw std::invalid_argument("ground truth does not match the network's edge count");
    }
    for (std::size_t e = 0; e < damaged.size(); ++e) {
        if (damaged[e] && !(damage_fraction[e] > 0.0 && damage_fraction[e] < 1.0)) {
            throw std::invalid_argument("damage fraction must lie strictly inside (0, 1)");
        }
    }
}

Point2D uav_point(const RoadNetwork &network, const UavState &uav) {
    if (const auto *flight = std::get_if<FreeFlight>(&uav.position)) {
        const Point2D target = network.point(flight->to);
        const double span = distance(flight->from, target);
        if (span <= 0.0) return target;
        return lerp(flight->from, target, std::min(1.0, flight->progress / span));
    }
    if (const auto *at = std::get_if<AtVertex>(&uav.position)) return network.point(at->vertex);
    return euclidean_point(network, std::get<OnEdge>(uav.position));
}

std::string_view to_string(EventKind kind) {
    switch (kind) {
        case EventKind::UgvReachedDestination: return "ugv_reached_destination";
        case EventKind::UgvHitDamage: return "ugv_hit_damage";
        case EventKind::UavHitDamage: return "uav_hit_damage";
        case EventKind::UavInspectionComplete: return "uav_inspection_complete";
        case EventKind::NoPath: return "no_path";
    }
    return "?";
}

StopForecast ugv_time_to_event(const UgvState &ugv, const BeliefGraph &belief, const GroundTruth &truth) {
    if (!ugv.plan) throw std::logic_error("UGV has no plan");
    const auto &network = belief.network();
    double travelled = 0.0;
    for (const auto &leg : ugv_legs(network, ugv)) {
        if (truth.is_damaged(leg.edge) && belief.status(leg.edge) != EdgeStatus::Damaged) {
            const double f = truth.damage_fraction[leg.edge];
            if (strictly_between(f, leg.from, leg.to)) {
                const double dist = travelled + std::abs(f - leg.from) * network.edge(leg.edge).length;
                return {dist / ugv.speed, EventKind::UgvHitDamage, leg.edge, f, dist};
            }
        }
        travelled += leg.length;
    }
    return {travelled / ugv.speed, EventKind::UgvReachedDestination, std::nullopt, 0.0, travelled};
}

StopForecast uav_time_to_event(const UavState &uav, const BeliefGraph &belief, const GroundTruth &truth) {
    if (!uav.task) return {};
    const auto &network = belief.network();
    const auto &task = *uav.task;
    const auto leg = uav_leg(network, uav);
    if (truth.is_damaged(task.edge) && belief.status(task.edge) != EdgeStatus::Damaged) {
        const double f = truth.damage_fraction[task.edge];
        if (strictly_between(f, leg.from, leg.to)) {
            const double dist = leg.deadhead + std::abs(f - leg.from) * network.edge(task.edge).length;
            return {dist / uav.speed, EventKind::UavHitDamage, task.edge, f, dist};
        }
    }
    const double dist = leg.deadhead + leg.length;
    return {dist / uav.speed, EventKind::UavInspectionComplete, task.edge, 0.0, dist};
}

void apply_backtrack(UgvState &ugv) {
    auto *on = std::get_if<OnEdge>(&ugv.position);
    if (!on) throw std::logic_error("backtrack requires the UGV to be on an edge");
    on->heading = ugv.last_vertex;
    ugv.backtrack_pending = true;
    ugv.plan.reset();
}

Simulation::Simulation(const RoadNetwork &network, const GroundTruth &truth, const SimConfig &config)
    : network_(network),
      truth_(truth),
      config_(config),
      belief_(network, config.edge_probabilities.empty() ? std::vector<double>(network.edge_count(), 1.0)
                                                         : config.edge_probabilities) {
    truth.validate(network);
    const auto n = network.vertex_count();
    if (config.ugv_start >= n || config.uav_start >= n || config.destination >= n) {
        throw std::invalid_argument("start or destination vertex out of range");
    }
    if (!(config.speeds.ugv > 0.0) || !(config.speeds.uav > 0.0)) throw std::invalid_argument("speeds must be positive");
    ugv_.position = AtVertex{config.ugv_start};
    ugv_.speed = config.speeds.ugv;
    ugv_.last_vertex = config.ugv_start;
    uavs_.assign(config.uav_count, UavState{AtVertex{config.uav_start}, config.speeds.uav, std::nullopt});
    trajectory_.push_back({0.0, ugv_.position});
}

void Simulation::reveal_truth() {
    for (EdgeId e = 0; e < network_.edge_count(); ++e) {
        if (truth_.is_damaged(e)) {
            belief_.mark_damaged(e, truth_.damage_fraction[e]);
        } else {
            belief_.mark_safe(e);
        }
    }
}

void Simulation::assign(PlanAssignment assignment) {
    ugv_.plan = std::move(assignment.ugv_plan);
    if (!assignment.uav_tasks.empty() && assignment.uav_tasks.size() != uavs_.size()) {
        throw std::logic_error("strategy returned tasks for the wrong number of UAVs");
    }
    std::vector<EdgeId> taken;
    for (std::size_t i = 0; i < uavs_.size(); ++i) {
        auto task = assignment.uav_tasks.empty() ? std::nullopt : assignment.uav_tasks[i];
        if (task) {
            const auto &e = network_.edge(task->edge);
            if (!e.has_end(task->entry) || e.other(task->entry) != task->exit) {
                throw std::logic_error("inspection task endpoints do not match its edge");
            }
            if (!belief_.uninspected(task->edge)) throw std::logic_error("inspection task on an inspected edge");
            if (std::find(taken.begin(), taken.end(), task->edge) != taken.end()) {
                throw std::logic_error("edge assigned to two UAVs");
            }
            taken.push_back(task->edge);
        }
        uavs_[i].task = task;
    }
}

void Simulation::advance_ugv(double distance, const StopForecast *stop) {
    if (!ugv_.plan) return;
    const double requested = stop ? stop->distance : distance;
    if (requested > 0.0) ugv_.backtrack_pending = false;
    double remaining = stop && stop->kind == EventKind::UgvReachedDestination ? kInf : requested;
    double covered = 0.0;

    for (const auto &leg : ugv_legs(network_, ugv_)) {
        const auto &e = network_.edge(leg.edge);
        if (leg.full) {
            edge_entry_odometer_ = ugv_.odometer;
            edge_clean_ = true;
        } else if (leg.end != std::get<OnEdge>(ugv_.position).heading) {
            edge_clean_ = false;
        }
        if (stop && stop->kind == EventKind::UgvHitDamage && stop->edge == leg.edge) {
            ugv_.odometer += stop->distance - covered;
            ugv_.position = OnEdge{leg.edge, stop->fraction, leg.end};
            break;
        }
        if (remaining >= leg.length - kSnap) {
            remaining -= leg.length;
            covered += leg.length;
            // A straight pass over the edge is charged its exact length.
            const bool straight = edge_clean_ && leg.end != ugv_.last_vertex;
            ugv_.odometer = straight ? edge_entry_odometer_ + e.length : ugv_.odometer + leg.length;
            if (leg.full || leg.end != ugv_.last_vertex) belief_.mark_safe(leg.edge);
            ugv_.last_vertex = leg.end;
            ugv_.position = AtVertex{leg.end};
            edge_clean_ = false;
            trajectory_.push_back({elapsed_ + covered / ugv_.speed, ugv_.position});
            if (remaining <= kSnap) break;
            continue;
        }
        if (remaining > 0.0) {
            const double sign = leg.to > leg.from ? 1.0 : -1.0;
            ugv_.position = OnEdge{leg.edge, leg.from + sign * remaining / e.length, leg.end};
            ugv_.odometer += remaining;
        }
        break;
    }
}

void Simulation::advance_uav(UavState &uav, double distance, const StopForecast *stop) {
    if (!uav.task) return;
    const auto &task = *uav.task;
    if (stop) {
        if (stop->kind == EventKind::UavHitDamage) {
            uav.position = OnEdge{task.edge, stop->fraction, task.exit};
        } else {
            uav.position = AtVertex{task.exit};
        }
        return;
    }
    const auto leg = uav_leg(network_, uav);
    const auto &e = network_.edge(task.edge);
    if (!leg.continuing && distance < leg.deadhead - kSnap) {
        uav.position = FreeFlight{uav_point(network_, uav), task.entry, distance};
        return;
    }
    const double along = std::max(0.0, distance - leg.deadhead);
    if (along <= kSnap && !leg.continuing) {
        uav.position = AtVertex{task.entry};
        return;
    }
    const double sign = leg.to > leg.from ? 1.0 : -1.0;
    uav.position = OnEdge{task.edge, leg.from + sign * along / e.length, task.exit};
}

Simulation::Step Simulation::find_event_and_update() {
    if (!ugv_.plan) {
        double step = 0.0;
        if (ugv_.backtrack_pending) {
            // The UGV still drives back off the damage point before giving up.
            const auto &on = std::get<OnEdge>(ugv_.position);
            const auto &e = network_.edge(on.edge);
            const double back = (ugv_.last_vertex == e.u ? on.fraction : 1.0 - on.fraction) * e.length;
            ugv_.odometer += back;
            ugv_.position = AtVertex{ugv_.last_vertex};
            ugv_.backtrack_pending = false;
            step = back / ugv_.speed;
            trajectory_.push_back({elapsed_ + step, ugv_.position});
        }
        elapsed_ += step;
        events_.push_back({elapsed_, EventKind::NoPath, kUgvActor, std::nullopt, 0.0,
                           euclidean_point(network_, ugv_.position)});
        return {step, false};
    }

    const StopForecast ugv_stop = ugv_time_to_event(ugv_, belief_, truth_);
    std::vector<StopForecast> uav_stops;
    uav_stops.reserve(uavs_.size());
    double next = ugv_stop.seconds;
    for (const auto &uav : uavs_) {
        uav_stops.push_back(uav_time_to_event(uav, belief_, truth_));
        next = std::min(next, uav_stops.back().seconds);
    }

    const bool ugv_stops = (ugv_stop.seconds - next) * ugv_.speed <= kSnap;
    if (ugv_stops) next = ugv_stop.seconds;
    std::vector<char> uav_stopping(uavs_.size(), 0);
    for (std::size_t i = 0; i < uavs_.size(); ++i) {
        const auto &f = uav_stops[i];
        uav_stopping[i] = std::isfinite(f.seconds) && (f.seconds - next) * uavs_[i].speed <= kSnap;
    }

    advance_ugv(next * ugv_.speed, ugv_stops ? &ugv_stop : nullptr);
    for (std::size_t i = 0; i < uavs_.size(); ++i) {
        advance_uav(uavs_[i], next * uavs_[i].speed, uav_stopping[i] ? &uav_stops[i] : nullptr);
    }
    elapsed_ += next;

    if (ugv_stops) {
        if (ugv_stop.kind == EventKind::UgvHitDamage) {
            belief_.mark_damaged(*ugv_stop.edge, ugv_stop.fraction);
            apply_backtrack(ugv_);
        } else {
            reached_ = true;
        }
        events_.push_back({elapsed_, *ugv_stop.kind, kUgvActor, ugv_stop.edge, ugv_stop.fraction,
                           euclidean_point(network_, ugv_.position)});
        trajectory_.push_back({elapsed_, ugv_.position});
    }
    for (std::size_t i = 0; i < uavs_.size(); ++i) {
        if (!uav_stopping[i]) continue;
        const auto &f = uav_stops[i];
        const EdgeId edge = uavs_[i].task->edge;
        const bool changed = f.kind == EventKind::UavHitDamage ? belief_.mark_damaged(edge, f.fraction)
                                                                : belief_.mark_safe(edge);
        if (changed) ++edges_inspected_;
        events_.push_back({elapsed_, *f.kind, static_cast<int>(i), edge, f.fraction, uav_point(network_, uavs_[i])});
        uavs_[i].task.reset();
    }
    return {next, !reached_};
}

SimOutcome run(const RoadNetwork &network, const GroundTruth &truth, Strategy &strategy, const SimConfig &config) {
    Simulation sim(network, truth, config);
    if (strategy.requires_truth()) sim.reveal_truth();

    SimOutcome outcome;
    const std::size_t limit = 4 * network.edge_count() + 16;
    for (std::size_t iteration = 0;; ++iteration) {
        if (iteration > limit) throw std::logic_error("simulation failed to terminate");
        const auto started = std::chrono::steady_clock::now();
        auto assignment = strategy.find_path(sim.view());
        outcome.computation_time +=
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        ++outcome.replans;
        sim.assign(std::move(assignment));
        if (!sim.find_event_and_update().keep_going) break;
    }
    // The UGV never idles, so its odometer fixes the clock without step rounding.
    outcome.travel_time = sim.ugv().odometer / sim.ugv().speed;
    outcome.reached = sim.reached();
    outcome.event_log = sim.events();
    outcome.edges_inspected = sim.edges_inspected();
    outcome.ugv_trajectory = sim.trajectory();
    outcome.odometer = sim.ugv().odometer;
    return outcome;
}

std::string events_to_json(const std::vector<Event> &events) {
    auto doc = nlohmann::json::array();
    for (const auto &ev : events) {
        nlohmann::json item;
        item["t"] = ev.time;
        item["kind"] = std::string(to_string(ev.kind));
        item["actor"] = ev.actor == kUgvActor ? std::string("ugv") : "uav" + std::to_string(ev.actor);
        item["edge"] = ev.edge ? nlohmann::json(*ev.edge) : nlohmann::json(nullptr);
        if (ev.kind == EventKind::UgvHitDamage || ev.kind == EventKind::UavHitDamage) item["fraction"] = ev.fraction;
        item["position"] = {{"x", ev.position.x}, {"y", ev.position.y}};
        doc.push_back(std::move(item));
    }
    return doc.dump(2);
}

}  // namespace uvplan
