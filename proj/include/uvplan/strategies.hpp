#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "uvplan/criticality.hpp"
#include "uvplan/engine.hpp"
#include "uvplan/mpsp.hpp"
#include "uvplan/rng.hpp"

namespace uvplan {

enum class StrategyKind { PerfectKnowledge, UgvOnly, Kemeny, KShortestPaths, Mpsp, Bidirectional, MultiUavBidirectional };

struct StrategySpec {
    StrategyKind kind = StrategyKind::UgvOnly;
    std::size_t k = 5;  // k-shortest paths
    MpspOptions mpsp;
    std::size_t uavs = 1;  // multi-UAV only

    /// Throws std::invalid_argument for out-of-range parameters.
    void validate() const;
    /// Vehicles the strategy flies: 0 for perfect and UGV-only.
    std::size_t uav_count() const;
};

/// Tokens: perfect, ugv-only, kemeny, k-shortest, mpsp, bidirectional,
/// multi-bidirectional:N. Throws std::invalid_argument on anything else.
StrategySpec parse_strategy(std::string_view token);
std::string to_string(const StrategySpec &spec);

class Strategy {
   public:
    virtual ~Strategy() = default;

    virtual PlanAssignment find_path(const PlanningView &view) = 0;
    virtual std::string name() const = 0;
    /// Perfect knowledge plans over the revealed ground truth.
    virtual bool requires_truth() const { return false; }
};

struct StrategyContext {
    /// MPSP sampling seed; each run should use its instance seed.
    std::uint64_t seed = 0;
    /// Shared criticality table for Kemeny; computed on demand when null.
    std::shared_ptr<const CriticalityTable> criticality;
};

std::unique_ptr<Strategy> make_strategy(const StrategySpec &spec, const RoadNetwork &network,
                                        const StrategyContext &context = {});

/// Endpoint of `edge` nearest the UAV by chord distance; ties to edge.u.
InspectionTask nearest_entry_task(const RoadNetwork &network, const UavState &uav, EdgeId edge);

/// Runs `strategy` with the UAV count it needs.
SimOutcome run(const RoadNetwork &network, const GroundTruth &truth, const StrategySpec &spec,
               SimConfig config, const StrategyContext &context = {});

}  // namespace uvplan
