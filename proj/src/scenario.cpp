#include "uvplan/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "uvplan/rng.hpp"

namespace uvplan {
namespace {

constexpr double kFractionMargin = 1e-6;
constexpr std::uint64_t kEndpointStream = ~std::uint64_t{0};

}  // namespace

InstanceSpec generate_instance(const RoadNetwork &network, std::uint64_t seed) {
    const std::size_t edges = network.edge_count();
    const std::size_t n = network.vertex_count();
    if (n < 2) throw InstanceError("instance needs at least two vertices");

    InstanceSpec spec;
    spec.seed = seed;
    spec.edge_probabilities.resize(edges);
    spec.truth = GroundTruth::intact(edges);
    for (EdgeId e = 0; e < edges; ++e) {
        auto rng = SplitMix64::substream(seed, e);
        const double p = 0.6 + 0.4 * rng.uniform01();
        const bool damaged = rng.uniform01() > p;
        const double fraction = std::clamp(rng.uniform01(), kFractionMargin, 1.0 - kFractionMargin);
        spec.edge_probabilities[e] = p;
        if (damaged) {
            spec.truth.damaged[e] = 1;
            spec.truth.damage_fraction[e] = fraction;
        }
    }

    auto rng = SplitMix64::substream(seed, kEndpointStream);
    spec.ugv_start = static_cast<VertexId>(rng.below(n));
    auto dest = static_cast<VertexId>(rng.below(n - 1));
    if (dest >= spec.ugv_start) ++dest;
    spec.destination = dest;
    spec.uav_start = static_cast<VertexId>(rng.below(n));
    return spec;
}

void validate_instance(const InstanceSpec &instance, const RoadNetwork &network) {
    const std::size_t n = network.vertex_count();
    if (instance.ugv_start >= n || instance.uav_start >= n || instance.destination >= n) {
        throw InstanceError("instance vertex outside the network");
    }
    if (instance.ugv_start == instance.destination) throw InstanceError("ugv_start equals destination");
    if (instance.edge_probabilities.size() != network.edge_count()) {
        throw InstanceError("instance does not cover every network edge");
    }
    for (double p : instance.edge_probabilities) {
        if (!(p >= 0.0 && p <= 1.0)) throw InstanceError("edge probability outside [0, 1]");
    }
    try {
        instance.truth.validate(network);
    } catch (const std::invalid_argument &err) {
        throw InstanceError(err.what());
    }
}

std::string instance_to_json(const InstanceSpec &instance, const RoadNetwork &network) {
    validate_instance(instance, network);
    nlohmann::ordered_json doc;
    doc["seed"] = instance.seed;
    doc["ugv_start"] = instance.ugv_start;
    doc["uav_start"] = instance.uav_start;
    doc["destination"] = instance.destination;
    auto &edges = doc["edges"] = nlohmann::ordered_json::array();
    for (EdgeId e = 0; e < network.edge_count(); ++e) {
        nlohmann::ordered_json item;
        item["u"] = network.edge(e).u;
        item["v"] = network.edge(e).v;
        item["p"] = instance.edge_probabilities[e];
        item["damaged"] = instance.truth.is_damaged(e);
        item["fraction"] = instance.truth.is_damaged(e) ? nlohmann::ordered_json(instance.truth.damage_fraction[e])
                                                        : nlohmann::ordered_json(nullptr);
        edges.push_back(std::move(item));
    }
    return doc.dump(1) + "\n";
}

InstanceSpec instance_from_json(std::string_view document, const RoadNetwork &network) {
    InstanceSpec spec;
    try {
        const auto doc = nlohmann::json::parse(document);
        spec.seed = doc.at("seed").get<std::uint64_t>();
        spec.ugv_start = doc.at("ugv_start").get<VertexId>();
        spec.uav_start = doc.at("uav_start").get<VertexId>();
        spec.destination = doc.at("destination").get<VertexId>();
        const auto &edges = doc.at("edges");
        if (!edges.is_array()) throw InstanceError("'edges' must be an array");

        const std::size_t count = network.edge_count();
        spec.edge_probabilities.assign(count, -1.0);
        spec.truth = GroundTruth::intact(count);
        std::vector<char> seen(count, 0);
        for (const auto &item : edges) {
            const auto u = item.at("u").get<VertexId>();
            const auto v = item.at("v").get<VertexId>();
            if (u >= network.vertex_count() || v >= network.vertex_count()) {
                throw InstanceError("instance edge references an unknown vertex");
            }
            const auto id = network.find_edge(u, v);
            if (!id) throw InstanceError("instance edge is not in the network");
            if (seen[*id]) throw InstanceError("instance lists an edge twice");
            seen[*id] = 1;
            spec.edge_probabilities[*id] = item.at("p").get<double>();
            if (item.at("damaged").get<bool>()) {
                const auto &fraction = item.at("fraction");
                if (!fraction.is_number()) throw InstanceError("damaged edge without a fraction");
                double f = fraction.get<double>();
                if (u > v) f = 1.0 - f;  // stored relative to the listed u
                spec.truth.damaged[*id] = 1;
                spec.truth.damage_fraction[*id] = f;
            }
        }
        if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
            throw InstanceError("instance does not cover every network edge");
        }
    } catch (const nlohmann::json::exception &err) {
        throw InstanceError(std::string("instance schema mismatch: ") + err.what());
    }
    validate_instance(spec, network);
    return spec;
}

void save_instance(const std::string &path, const InstanceSpec &instance, const RoadNetwork &network) {
    const auto text = instance_to_json(instance, network);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write instance " + path);
    out << text;
    if (!out) throw IoError("failed writing instance " + path);
}

InstanceSpec load_instance(const std::string &path, const RoadNetwork &network) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read instance " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return instance_from_json(text.str(), network);
}

RoadNetwork synthetic_grid(std::size_t rows, std::size_t cols, double spacing) {
    if (rows < 2 || cols < 2) throw GraphError("grid needs at least 2 rows and 2 columns");
    if (!(spacing > 0.0)) throw GraphError("grid spacing must be positive");
    std::vector<Point2D> points;
    points.reserve(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            points.push_back({static_cast<double>(c) * spacing, static_cast<double>(r) * spacing});
        }
    }
    std::vector<Edge> edges;
    edges.reserve(2 * rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const auto v = static_cast<VertexId>(r * cols + c);
            if (c + 1 < cols) edges.push_back({v, v + 1, spacing});
            if (r + 1 < rows) edges.push_back({v, static_cast<VertexId>(v + cols), spacing});
        }
    }
    return RoadNetwork(std::move(points), std::move(edges));
}

SimConfig to_sim_config(const InstanceSpec &instance, const SpeedConfig &speeds) {
    SimConfig config;
    config.ugv_start = instance.ugv_start;
    config.uav_start = instance.uav_start;
    config.destination = instance.destination;
    config.speeds = speeds;
    config.edge_probabilities = instance.edge_probabilities;
    return config;
}

}  // namespace uvplan
