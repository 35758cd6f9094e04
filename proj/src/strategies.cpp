#include "uvplan/strategies.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace uvplan {
namespace {

// A UAV already flying the chosen edge keeps its direction.
InspectionTask task_for(const RoadNetwork &network, const UavState &uav, EdgeId edge) {
    if (uav.task && uav.task->edge == edge) return *uav.task;
    return nearest_entry_task(network, uav, edge);
}

PlanAssignment single_uav(const PlanningView &view, std::optional<Path> plan, std::optional<EdgeId> edge) {
    PlanAssignment out;
    out.ugv_plan = std::move(plan);
    if (!view.uavs.empty()) {
        out.uav_tasks.assign(view.uavs.size(), std::nullopt);
        if (edge) out.uav_tasks[0] = task_for(view.belief.network(), view.uavs[0], *edge);
    }
    return out;
}

// Reversed scan of a path: the first Uninspected edge from the destination
// end, flown from p_i to p_{i-1}.
std::optional<InspectionTask> reverse_scan(const BeliefGraph &belief, const Path &path,
                                           const std::vector<EdgeId> &taken) {
    const auto &network = belief.network();
    for (std::size_t i = path.vertices.size(); i-- > 1;) {
        const auto e = *network.find_edge(path.vertices[i], path.vertices[i - 1]);
        if (!belief.uninspected(e)) continue;
        if (std::find(taken.begin(), taken.end(), e) != taken.end()) continue;
        return InspectionTask{e, path.vertices[i], path.vertices[i - 1]};
    }
    return std::nullopt;
}

class PerfectKnowledge final : public Strategy {
   public:
    PlanAssignment find_path(const PlanningView &view) override {
        return {shortest_path(view.belief, view.ugv.position, view.destination), {}};
    }
    std::string name() const override { return "perfect"; }
    bool requires_truth() const override { return true; }
};

class UgvOnly final : public Strategy {
   public:
    PlanAssignment find_path(const PlanningView &view) override {
        return {shortest_path(view.belief, view.ugv.position, view.destination), {}};
    }
    std::string name() const override { return "ugv-only"; }
};

class KemenyStrategy final : public Strategy {
   public:
    explicit KemenyStrategy(std::shared_ptr<const CriticalityTable> table) : table_(std::move(table)) {}

    PlanAssignment find_path(const PlanningView &view) override {
        auto plan = shortest_path(view.belief, view.ugv.position, view.destination);
        std::optional<EdgeId> edge;
        if (plan) edge = most_critical_uninspected(*table_, *plan, view.belief);
        return single_uav(view, std::move(plan), edge);
    }
    std::string name() const override { return "kemeny"; }

   private:
    std::shared_ptr<const CriticalityTable> table_;
};

class KShortest final : public Strategy {
   public:
    explicit KShortest(std::size_t k) : k_(k) {}

    PlanAssignment find_path(const PlanningView &view) override {
        const auto &network = view.belief.network();
        auto paths = k_shortest_paths(view.belief, view.ugv.position, view.destination, k_);
        if (paths.empty()) return single_uav(view, std::nullopt, std::nullopt);

        std::vector<std::size_t> count(network.edge_count(), 0);
        for (const auto &p : paths) {
            for (const EdgeId e : p.edges(network)) ++count[e];
        }
        std::optional<EdgeId> best;
        for (const EdgeId e : paths.front().edges(network)) {
            if (!view.belief.uninspected(e)) continue;
            if (!best || count[e] > count[*best]) best = e;
        }
        return single_uav(view, std::move(paths.front()), best);
    }
    std::string name() const override { return "k-shortest"; }

   private:
    std::size_t k_;
};

class MpspStrategy final : public Strategy {
   public:
    MpspStrategy(MpspOptions options, std::uint64_t seed) : options_(options), rng_(seed) {}

    PlanAssignment find_path(const PlanningView &view) override {
        auto plan = mpsp_path(view.belief, view.ugv.position, view.destination, options_, rng_);
        std::optional<EdgeId> edge;
        if (plan) edge = least_probable_uninspected(*plan, view.belief);
        return single_uav(view, std::move(plan), edge);
    }
    std::string name() const override { return "mpsp"; }

   private:
    MpspOptions options_;
    SplitMix64 rng_;
};

class Bidirectional final : public Strategy {
   public:
    PlanAssignment find_path(const PlanningView &view) override {
        PlanAssignment out;
        out.ugv_plan = shortest_path(view.belief, view.ugv.position, view.destination);
        if (view.uavs.empty()) return out;
        out.uav_tasks.assign(view.uavs.size(), std::nullopt);
        if (out.ugv_plan) out.uav_tasks[0] = reverse_scan(view.belief, *out.ugv_plan, {});
        return out;
    }
    std::string name() const override { return "bidirectional"; }
};

class MultiBidirectional final : public Strategy {
   public:
    explicit MultiBidirectional(std::size_t uavs) : uavs_(uavs) {}

    PlanAssignment find_path(const PlanningView &view) override {
        PlanAssignment out;
        auto paths = k_shortest_paths(view.belief, view.ugv.position, view.destination, uavs_);
        if (paths.empty()) return out;
        out.ugv_plan = paths.front();
        out.uav_tasks.assign(view.uavs.size(), std::nullopt);

        // UAV i starts from path i and falls through to the following ones.
        std::vector<EdgeId> taken;
        const std::size_t q = paths.size();
        for (std::size_t i = 0; i < view.uavs.size(); ++i) {
            for (std::size_t r = 0; r < q; ++r) {
                auto task = reverse_scan(view.belief, paths[(i + r) % q], taken);
                if (!task) continue;
                taken.push_back(task->edge);
                out.uav_tasks[i] = task;
                break;
            }
        }
        return out;
    }
    std::string name() const override { return "multi-bidirectional:" + std::to_string(uavs_); }

   private:
    std::size_t uavs_;
};

}  // namespace

void StrategySpec::validate() const {
    if (kind == StrategyKind::KShortestPaths && k < 2) throw std::invalid_argument("k-shortest needs k >= 2");
    if (kind == StrategyKind::Mpsp && (mpsp.candidates == 0 || mpsp.mc_runs == 0)) {
        throw std::invalid_argument("mpsp needs m >= 1 and N >= 1");
    }
    if (kind == StrategyKind::MultiUavBidirectional && uavs == 0) {
        throw std::invalid_argument("multi-bidirectional needs at least one UAV");
    }
}

std::size_t StrategySpec::uav_count() const {
    switch (kind) {
        case StrategyKind::PerfectKnowledge:
        case StrategyKind::UgvOnly: return 0;
        case StrategyKind::MultiUavBidirectional: return uavs;
        default: return 1;
    }
}

StrategySpec parse_strategy(std::string_view token) {
    StrategySpec spec;
    if (token == "perfect") {
        spec.kind = StrategyKind::PerfectKnowledge;
    } else if (token == "ugv-only") {
        spec.kind = StrategyKind::UgvOnly;
    } else if (token == "kemeny") {
        spec.kind = StrategyKind::Kemeny;
    } else if (token == "k-shortest") {
        spec.kind = StrategyKind::KShortestPaths;
    } else if (token == "mpsp") {
        spec.kind = StrategyKind::Mpsp;
    } else if (token == "bidirectional") {
        spec.kind = StrategyKind::Bidirectional;
    } else if (token.starts_with("multi-bidirectional:")) {
        spec.kind = StrategyKind::MultiUavBidirectional;
        const auto digits = token.substr(std::string_view("multi-bidirectional:").size());
        const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), spec.uavs);
        if (ec != std::errc{} || end != digits.data() + digits.size() || digits.empty()) {
            throw std::invalid_argument("bad UAV count in strategy '" + std::string(token) + "'");
        }
    } else {
        throw std::invalid_argument("unknown strategy '" + std::string(token) + "'");
    }
    spec.validate();
    return spec;
}

std::string to_string(const StrategySpec &spec) {
    switch (spec.kind) {
        case StrategyKind::PerfectKnowledge: return "perfect";
        case StrategyKind::UgvOnly: return "ugv-only";
        case StrategyKind::Kemeny: return "kemeny";
        case StrategyKind::KShortestPaths: return "k-shortest";
        case StrategyKind::Mpsp: return "mpsp";
        case StrategyKind::Bidirectional: return "bidirectional";
        case StrategyKind::MultiUavBidirectional: return "multi-bidirectional:" + std::to_string(spec.uavs);
    }
    return "?";
}

std::unique_ptr<Strategy> make_strategy(const StrategySpec &spec, const RoadNetwork &network,
                                        const StrategyContext &context) {
    spec.validate();
    switch (spec.kind) {
        case StrategyKind::PerfectKnowledge: return std::make_unique<PerfectKnowledge>();
        case StrategyKind::UgvOnly: return std::make_unique<UgvOnly>();
        case StrategyKind::Kemeny: {
            auto table = context.criticality;
            if (!table) table = std::make_shared<const CriticalityTable>(edge_criticalities(network));
            if (table->size() != network.edge_count()) throw std::invalid_argument("criticality table size mismatch");
            return std::make_unique<KemenyStrategy>(std::move(table));
        }
        case StrategyKind::KShortestPaths: return std::make_unique<KShortest>(spec.k);
        case StrategyKind::Mpsp: return std::make_unique<MpspStrategy>(spec.mpsp, context.seed);
        case StrategyKind::Bidirectional: return std::make_unique<Bidirectional>();
        case StrategyKind::MultiUavBidirectional: return std::make_unique<MultiBidirectional>(spec.uavs);
    }
    throw std::invalid_argument("unknown strategy kind");
}

InspectionTask nearest_entry_task(const RoadNetwork &network, const UavState &uav, EdgeId edge) {
    const auto &e = network.edge(edge);
    const Point2D here = uav_point(network, uav);
    const bool u_first = distance(here, network.point(e.u)) <= distance(here, network.point(e.v));
    return u_first ? InspectionTask{edge, e.u, e.v} : InspectionTask{edge, e.v, e.u};
}

SimOutcome run(const RoadNetwork &network, const GroundTruth &truth, const StrategySpec &spec, SimConfig config,
               const StrategyContext &context) {
    auto strategy = make_strategy(spec, network, context);
    config.uav_count = spec.uav_count();
    return run(network, truth, *strategy, config);
}

}  // namespace uvplan
