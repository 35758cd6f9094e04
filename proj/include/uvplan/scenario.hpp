#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uvplan/engine.hpp"
#include "uvplan/road_graph.hpp"

namespace uvplan {

struct InstanceSpec {
    std::uint64_t seed = 0;
    VertexId ugv_start = 0;
    VertexId uav_start = 0;
    VertexId destination = 0;
    std::vector<double> edge_probabilities;
    GroundTruth truth;

    bool operator==(const InstanceSpec &) const = default;
};

class InstanceError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

// Draws are SplitMix64 substreams: edge e uses substream(seed, e) for
// p = 0.6 + 0.4 u1, damaged iff u2 > p, fraction = u3 clamped to
// [1e-6, 1 - 1e-6]; the endpoints come from substream(seed, 2^64 - 1).
InstanceSpec generate_instance(const RoadNetwork &network, std::uint64_t seed);

/// Checks an instance against its network; throws InstanceError.
void validate_instance(const InstanceSpec &instance, const RoadNetwork &network);

std::string instance_to_json(const InstanceSpec &instance, const RoadNetwork &network);
InstanceSpec instance_from_json(std::string_view document, const RoadNetwork &network);
void save_instance(const std::string &path, const InstanceSpec &instance, const RoadNetwork &network);
InstanceSpec load_instance(const std::string &path, const RoadNetwork &network);

/// rows x cols lattice; vertex r * cols + c sits at (c * spacing, r * spacing).
RoadNetwork synthetic_grid(std::size_t rows, std::size_t cols, double spacing = 1.0);

SimConfig to_sim_config(const InstanceSpec &instance, const SpeedConfig &speeds);

}  // namespace uvplan
