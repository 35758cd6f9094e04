#pragma once

#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "uvplan/road_graph.hpp"

namespace uvplan {

enum class EdgeStatus : std::uint8_t { Uninspected, Safe, Damaged };

std::string_view to_string(EdgeStatus status);

class StatusTransitionError : public std::logic_error {
   public:
    using std::logic_error::logic_error;
};

// The planners' view of the network: per-edge status, existence probability,
// and the location of every damage point discovered so far. Safe and Damaged
// are terminal; re-asserting the same terminal status is a no-op.
class BeliefGraph {
   public:
    /// All edges Uninspected with probability 1.
    explicit BeliefGraph(const RoadNetwork &network);
    BeliefGraph(const RoadNetwork &network, std::vector<double> existence_probability);

    const RoadNetwork &network() const { return *network_; }

    EdgeStatus status(EdgeId e) const { return status_.at(e); }
    bool traversable(EdgeId e) const { return status_.at(e) != EdgeStatus::Damaged; }
    bool uninspected(EdgeId e) const { return status_.at(e) == EdgeStatus::Uninspected; }

    /// 1 for Safe, 0 for Damaged, the prior otherwise.
    double probability(EdgeId e) const;

    /// Known damage point on a Damaged edge, as a fraction from edge.u.
    std::optional<double> damage_fraction(EdgeId e) const { return damage_fraction_.at(e); }

    /// Returns true when the status changed.
    bool mark_safe(EdgeId e);
    bool mark_damaged(EdgeId e, double fraction_from_u);

    std::size_t count(EdgeStatus status) const;

   private:
    const RoadNetwork *network_;
    std::vector<EdgeStatus> status_;
    std::vector<double> prior_;
    std::vector<std::optional<double>> damage_fraction_;
};

}  // namespace uvplan
