#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "uvplan/scenario.hpp"
#include "uvplan/strategies.hpp"

namespace uvplan {

/// Configuration problems (bad flags, bad graph or instance content).
class ConfigError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct SeedRange {
    std::uint64_t first = 0;
    std::uint64_t last = 0;
    bool empty = true;

    std::vector<std::uint64_t> values() const;
};

/// "a..b" (inclusive; b < a is empty) or a single seed "a".
SeedRange parse_seed_range(std::string_view text);

struct MapSource {
    std::string name;
    std::shared_ptr<const RoadNetwork> network;
};

/// A graph document path, or "grid:RxC[:spacing]" for a synthetic lattice.
/// Files are named by their stem.
MapSource load_map(const std::string &token);

struct ResultRow {
    std::string map;
    std::uint64_t seed = 0;
    std::string strategy;
    std::size_t uavs = 0;
    double v_g = 0.0;
    double v_a = 0.0;
    double travel_time = 0.0;
    double computation_time = 0.0;
    bool reached = false;
    std::size_t events = 0;
    std::size_t edges_inspected = 0;
};

ResultRow make_row(const std::string &map, const InstanceSpec &instance, const StrategySpec &spec,
                   const SpeedConfig &speeds, const SimOutcome &outcome);

std::string rows_to_csv(const std::vector<ResultRow> &rows);
std::string rows_to_json(const std::vector<ResultRow> &rows);
std::vector<ResultRow> rows_from_csv(std::string_view text);

struct BatchInput {
    struct Map {
        MapSource source;
        std::vector<InstanceSpec> instances;
    };
    std::vector<Map> maps;
    std::vector<StrategySpec> strategies;
    std::vector<SpeedConfig> speeds;
    std::size_t jobs = 1;
};

struct BatchOutput {
    /// Ordered by (map, seed, strategy, speed) in input order; failed cells
    /// are absent.
    std::vector<ResultRow> rows;
    std::vector<std::string> failures;
};

BatchOutput run_batch(const BatchInput &input);

struct SummaryCell {
    std::string map;
    std::string strategy;
    double v_g = 0.0;
    double v_a = 0.0;
    std::size_t runs = 0;
    std::size_t reached = 0;
    double mean_travel_time = 0.0;
    double mean_computation_time = 0.0;
};

/// Per (map, strategy, speed ratio) means, in first-appearance order.
std::vector<SummaryCell> summarize(const std::vector<ResultRow> &rows);

enum class SummaryMetric { TravelTime, ComputationTime };

/// Table with one line per (map, v_g, v_a) and one column per strategy.
std::string summary_table(const std::vector<SummaryCell> &cells, SummaryMetric metric);
std::string summary_json(const std::vector<SummaryCell> &cells);

/// Writes instance_<seed>.json for every seed; returns the paths written.
std::vector<std::filesystem::path> generate_instance_files(const RoadNetwork &network, const SeedRange &seeds,
                                                           const std::filesystem::path &out_dir);

void write_text_file(const std::filesystem::path &path, const std::string &text);
std::string read_text_file(const std::filesystem::path &path);

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

}  // namespace uvplan
