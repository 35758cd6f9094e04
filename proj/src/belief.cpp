#include "uvplan/belief.hpp"

#include <algorithm>
#include <string>

namespace uvplan {

std::string_view to_string(EdgeStatus status) {
    switch (status) {
        case EdgeStatus::Uninspected: return "uninspected";
        case EdgeStatus::Safe: return "safe";
        case EdgeStatus::Damaged: return "damaged";
    }
    return "?";
}

BeliefGraph::BeliefGraph(const RoadNetwork &network)
    : BeliefGraph(network, std::vector<double>(network.edge_count(), 1.0)) {}

BeliefGraph::BeliefGraph(const RoadNetwork &network, std::vector<double> existence_probability)
    : network_(&network),
      status_(network.edge_count(), EdgeStatus::Uninspected),
      prior_(std::move(existence_probability)),
      damage_fraction_(network.edge_count()) {
    if (prior_.size() != network.edge_count()) {
        throw std::invalid_argument("existence probability count does not match edge count");
    }
    for (double p : prior_) {
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("existence probability outside [0, 1]");
    }
}

double BeliefGraph::probability(EdgeId e) const {
    switch (status_.at(e)) {
        case EdgeStatus::Safe: return 1.0;
        case EdgeStatus::Damaged: return 0.0;
        case EdgeStatus::Uninspected: break;
    }
    return prior_[e];
}

bool BeliefGraph::mark_safe(EdgeId e) {
    auto &s = status_.at(e);
    if (s == EdgeStatus::Safe) return false;
    if (s == EdgeStatus::Damaged) {
        throw StatusTransitionError("edge " + std::to_string(e) + " is damaged and cannot become safe");
    }
    s = EdgeStatus::Safe;
    return true;
}

bool BeliefGraph::mark_damaged(EdgeId e, double fraction_from_u) {
    auto &s = status_.at(e);
    if (s == EdgeStatus::Damaged) return false;
    if (s == EdgeStatus::Safe) {
        throw StatusTransitionError("edge " + std::to_string(e) + " is safe and cannot become damaged");
    }
    s = EdgeStatus::Damaged;
    damage_fraction_[e] = fraction_from_u;
    return true;
}

std::size_t BeliefGraph::count(EdgeStatus status) const {
    return static_cast<std::size_t>(std::count(status_.begin(), status_.end(), status));
}

}  // namespace uvplan
