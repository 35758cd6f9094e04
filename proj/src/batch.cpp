#include "uvplan/batch.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace uvplan {
namespace {

constexpr const char *kCsvHeader =
    "map,seed,strategy,uavs,v_g,v_a,travel_time,computation_time,reached,events,edges_inspected";

template <typename T>
T parse_number(std::string_view text, const char *what) {
    T value{};
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || end != text.data() + text.size()) {
        throw ConfigError(std::string("bad ") + what + " '" + std::string(text) + "'");
    }
    return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

}  // namespace

std::string format_double(double value) {
    char buffer[64];
    const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, end);
}

std::vector<std::uint64_t> SeedRange::values() const {
    std::vector<std::uint64_t> out;
    if (empty) return out;
    for (std::uint64_t s = first;; ++s) {
        out.push_back(s);
        if (s == last) break;
    }
    return out;
}

SeedRange parse_seed_range(std::string_view text) {
    SeedRange range;
    const auto dots = text.find("..");
    if (dots == std::string_view::npos) {
        range.first = range.last = parse_number<std::uint64_t>(text, "seed");
        range.empty = false;
        return range;
    }
    range.first = parse_number<std::uint64_t>(text.substr(0, dots), "seed");
    range.last = parse_number<std::uint64_t>(text.substr(dots + 2), "seed");
    range.empty = range.last < range.first;
    return range;
}

MapSource load_map(const std::string &token) {
    if (token.starts_with("grid:")) {
        const auto parts = split(std::string_view(token).substr(5), ':');
        if (parts.empty() || parts.size() > 2) throw ConfigError("grid token must be grid:RxC[:spacing]");
        const auto dims = split(parts[0], 'x');
        if (dims.size() != 2) throw ConfigError("grid token must be grid:RxC[:spacing]");
        const auto rows = parse_number<std::size_t>(dims[0], "grid rows");
        const auto cols = parse_number<std::size_t>(dims[1], "grid columns");
        const double spacing = parts.size() == 2 ? parse_number<double>(parts[1], "grid spacing") : 1.0;
        try {
            return {"grid" + std::string(parts[0]),
                    std::make_shared<const RoadNetwork>(synthetic_grid(rows, cols, spacing))};
        } catch (const GraphError &err) {
            throw ConfigError(err.what());
        }
    }
    const std::filesystem::path path(token);
    if (!std::filesystem::exists(path)) throw IoError("graph file not found: " + token);
    const auto text = read_text_file(path);
    try {
        return {path.stem().string(), std::make_shared<const RoadNetwork>(load_network(text))};
    } catch (const GraphError &err) {
        throw ConfigError(token + ": " + err.what());
    }
}

ResultRow make_row(const std::string &map, const InstanceSpec &instance, const StrategySpec &spec,
                   const SpeedConfig &speeds, const SimOutcome &outcome) {
    ResultRow row;
    row.map = map;
    row.seed = instance.seed;
    row.strategy = to_string(spec);
    row.uavs = spec.uav_count();
    row.v_g = speeds.ugv;
    row.v_a = speeds.uav;
    row.travel_time = outcome.travel_time;
    row.computation_time = outcome.computation_time;
    row.reached = outcome.reached;
    row.events = outcome.event_log.size();
    row.edges_inspected = outcome.edges_inspected;
    return row;
}

std::string rows_to_csv(const std::vector<ResultRow> &rows) {
    std::ostringstream out;
    out << kCsvHeader << '\n';
    for (const auto &r : rows) {
        out << r.map << ',' << r.seed << ',' << r.strategy << ',' << r.uavs << ',' << format_double(r.v_g) << ','
            << format_double(r.v_a) << ',' << format_double(r.travel_time) << ','
            << format_double(r.computation_time) << ',' << (r.reached ? "true" : "false") << ',' << r.events << ','
            << r.edges_inspected << '\n';
    }
    return out.str();
}

std::string rows_to_json(const std::vector<ResultRow> &rows) {
    auto doc = nlohmann::ordered_json::array();
    for (const auto &r : rows) {
        nlohmann::ordered_json item;
        item["map"] = r.map;
        item["seed"] = r.seed;
        item["strategy"] = r.strategy;
        item["uavs"] = r.uavs;
        item["v_g"] = r.v_g;
        item["v_a"] = r.v_a;
        item["travel_time"] = r.travel_time;
        item["computation_time"] = r.computation_time;
        item["reached"] = r.reached;
        item["events"] = r.events;
        item["edges_inspected"] = r.edges_inspected;
        doc.push_back(std::move(item));
    }
    return doc.dump(1) + "\n";
}

std::vector<ResultRow> rows_from_csv(std::string_view text) {
    std::vector<ResultRow> rows;
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) throw ConfigError("result file has an unexpected header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 11) throw ConfigError("result row with " + std::to_string(f.size()) + " fields");
        ResultRow r;
        r.map = std::string(f[0]);
        r.seed = parse_number<std::uint64_t>(f[1], "seed");
        r.strategy = std::string(f[2]);
        r.uavs = parse_number<std::size_t>(f[3], "uav count");
        r.v_g = parse_number<double>(f[4], "v_g");
        r.v_a = parse_number<double>(f[5], "v_a");
        r.travel_time = parse_number<double>(f[6], "travel_time");
        r.computation_time = parse_number<double>(f[7], "computation_time");
        if (f[8] != "true" && f[8] != "false") throw ConfigError("bad reached flag");
        r.reached = f[8] == "true";
        r.events = parse_number<std::size_t>(f[9], "event count");
        r.edges_inspected = parse_number<std::size_t>(f[10], "edges_inspected");
        rows.push_back(std::move(r));
    }
    return rows;
}

BatchOutput run_batch(const BatchInput &input) {
    struct Cell {
        std::size_t map;
        std::size_t instance;
        std::size_t strategy;
        std::size_t speed;
    };
    std::vector<Cell> cells;
    std::vector<std::vector<std::size_t>> order(input.maps.size());
    for (std::size_t m = 0; m < input.maps.size(); ++m) {
        auto &idx = order[m];
        idx.resize(input.maps[m].instances.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return input.maps[m].instances[a].seed < input.maps[m].instances[b].seed;
        });
        for (const auto i : idx) {
            for (std::size_t s = 0; s < input.strategies.size(); ++s) {
                for (std::size_t v = 0; v < input.speeds.size(); ++v) cells.push_back({m, i, s, v});
            }
        }
    }

    // Criticality depends only on the map; compute it once up front.
    const bool needs_kemeny = std::any_of(input.strategies.begin(), input.strategies.end(),
                                          [](const auto &s) { return s.kind == StrategyKind::Kemeny; });
    std::vector<std::shared_ptr<const CriticalityTable>> tables(input.maps.size());
    if (needs_kemeny) {
        for (std::size_t m = 0; m < input.maps.size(); ++m) {
            tables[m] = std::make_shared<const CriticalityTable>(edge_criticalities(*input.maps[m].source.network));
        }
    }

    std::vector<std::optional<ResultRow>> results(cells.size());
    std::vector<std::string> errors(cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t c = next++; c < cells.size(); c = next++) {
            const auto &cell = cells[c];
            const auto &map = input.maps[cell.map];
            const auto &instance = map.instances[cell.instance];
            const auto &spec = input.strategies[cell.strategy];
            const auto &speeds = input.speeds[cell.speed];
            try {
                StrategyContext context{instance.seed, tables[cell.map]};
                const auto outcome = run(*map.source.network, instance.truth, spec, to_sim_config(instance, speeds),
                                         context);
                results[c] = make_row(map.source.name, instance, spec, speeds, outcome);
            } catch (const std::exception &err) {
                errors[c] = map.source.name + " seed " + std::to_string(instance.seed) + " " + to_string(spec) +
                            " " + format_double(speeds.ugv) + ":" + format_double(speeds.uav) + ": " + err.what();
            }
        }
    };
    const std::size_t jobs = std::max<std::size_t>(1, std::min(input.jobs, cells.size()));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
    for (auto &t : pool) t.join();

    BatchOutput out;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        if (results[c]) {
            out.rows.push_back(std::move(*results[c]));
        } else {
            out.failures.push_back(std::move(errors[c]));
        }
    }
    return out;
}

std::vector<SummaryCell> summarize(const std::vector<ResultRow> &rows) {
    std::vector<SummaryCell> cells;
    std::map<std::tuple<std::string, std::string, double, double>, std::size_t> index;
    for (const auto &r : rows) {
        const auto key = std::make_tuple(r.map, r.strategy, r.v_g, r.v_a);
        auto [it, inserted] = index.try_emplace(key, cells.size());
        if (inserted) cells.push_back({r.map, r.strategy, r.v_g, r.v_a, 0, 0, 0.0, 0.0});
        auto &cell = cells[it->second];
        ++cell.runs;
        cell.reached += r.reached ? 1 : 0;
        cell.mean_travel_time += r.travel_time;
        cell.mean_computation_time += r.computation_time;
    }
    for (auto &cell : cells) {
        cell.mean_travel_time /= static_cast<double>(cell.runs);
        cell.mean_computation_time /= static_cast<double>(cell.runs);
    }
    return cells;
}

std::string summary_table(const std::vector<SummaryCell> &cells, SummaryMetric metric) {
    std::vector<std::string> strategies;
    std::vector<std::tuple<std::string, double, double>> lines;
    std::map<std::tuple<std::string, double, double, std::string>, double> value;
    for (const auto &c : cells) {
        if (std::find(strategies.begin(), strategies.end(), c.strategy) == strategies.end()) {
            strategies.push_back(c.strategy);
        }
        const auto line = std::make_tuple(c.map, c.v_g, c.v_a);
        if (std::find(lines.begin(), lines.end(), line) == lines.end()) lines.push_back(line);
        value[{c.map, c.v_g, c.v_a, c.strategy}] =
            metric == SummaryMetric::TravelTime ? c.mean_travel_time : c.mean_computation_time;
    }
    std::ostringstream out;
    out << "map,ratio";
    for (const auto &s : strategies) out << ',' << s;
    out << '\n';
    char buffer[64];
    for (const auto &[map, v_g, v_a] : lines) {
        out << map << ',' << format_double(v_g) << ':' << format_double(v_a);
        for (const auto &s : strategies) {
            out << ',';
            const auto it = value.find({map, v_g, v_a, s});
            if (it == value.end()) continue;
            std::snprintf(buffer, sizeof buffer,
                          metric == SummaryMetric::TravelTime ? "%.3f" : "%.6f", it->second);
            out << buffer;
        }
        out << '\n';
    }
    return out.str();
}

std::string summary_json(const std::vector<SummaryCell> &cells) {
    auto doc = nlohmann::ordered_json::array();
    for (const auto &c : cells) {
        nlohmann::ordered_json item;
        item["map"] = c.map;
        item["strategy"] = c.strategy;
        item["v_g"] = c.v_g;
        item["v_a"] = c.v_a;
        item["runs"] = c.runs;
        item["reached"] = c.reached;
        item["mean_travel_time"] = c.mean_travel_time;
        item["mean_computation_time"] = c.mean_computation_time;
        doc.push_back(std::move(item));
    }
    return doc.dump(1) + "\n";
}

std::vector<std::filesystem::path> generate_instance_files(const RoadNetwork &network, const SeedRange &seeds,
                                                           const std::filesystem::path &out_dir) {
    std::vector<std::filesystem::path> written;
    if (seeds.empty) return written;
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
    for (const auto seed : seeds.values()) {
        const auto path = out_dir / ("instance_" + std::to_string(seed) + ".json");
        write_text_file(path, instance_to_json(generate_instance(network, seed), network));
        written.push_back(path);
    }
    return written;
}

void write_text_file(const std::filesystem::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

}  // namespace uvplan
