#include <cstdio>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "uvplan/batch.hpp"

using namespace uvplan;

namespace {

constexpr int kExitFailedCells = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct StrategyFlags {
    std::vector<std::string> tokens;
    std::vector<std::size_t> uavs{3, 5, 7};
    std::size_t k = 5;
    std::size_t m = 20;
    std::size_t mc_runs = 1000;

    void add(CLI::App &cmd, bool many) {
        if (many) {
            cmd.add_option("--strategy", tokens, "Strategies (repeatable); default: the comparison set");
        } else {
            cmd.add_option("--strategy", tokens, "Strategy")->expected(1);
        }
        cmd.add_option("--uavs", uavs, "UAV counts for a bare multi-bidirectional")->capture_default_str();
        cmd.add_option("--k", k, "k for k-shortest")->capture_default_str();
        cmd.add_option("--m", m, "MPSP candidate count")->capture_default_str();
        cmd.add_option("--mc-runs", mc_runs, "MPSP Monte Carlo runs")->capture_default_str();
    }

    std::vector<StrategySpec> specs(const std::vector<std::string> &defaults) const {
        std::vector<StrategySpec> out;
        for (const auto &token : tokens.empty() ? defaults : tokens) {
            std::vector<std::string> expanded;
            if (token == "multi-bidirectional") {
                for (const auto n : uavs) expanded.push_back(token + ":" + std::to_string(n));
            } else {
                expanded.push_back(token);
            }
            for (const auto &t : expanded) {
                auto spec = parse_strategy(t);
                spec.k = k;
                spec.mpsp = {m, mc_runs};
                spec.validate();
                out.push_back(spec);
            }
        }
        return out;
    }
};

void emit(const std::string &path, const std::string &text) {
    if (path.empty()) {
        std::cout << text;
    } else {
        write_text_file(path, text);
    }
}

std::string render_rows(const std::vector<ResultRow> &rows, const std::string &format) {
    return format == "json" ? rows_to_json(rows) : rows_to_csv(rows);
}

void write_summaries(const std::vector<ResultRow> &rows, const std::string &format, const std::string &travel_out,
                     const std::string &compute_out) {
    const auto cells = summarize(rows);
    if (format == "json") {
        if (!travel_out.empty()) write_text_file(travel_out, summary_json(cells));
        if (!compute_out.empty()) write_text_file(compute_out, summary_json(cells));
        return;
    }
    if (!travel_out.empty()) write_text_file(travel_out, summary_table(cells, SummaryMetric::TravelTime));
    if (!compute_out.empty()) write_text_file(compute_out, summary_table(cells, SummaryMetric::ComputationTime));
}

std::vector<InstanceSpec> instances_for(const RoadNetwork &network, const std::string &seeds,
                                        const std::string &instance_path) {
    std::vector<InstanceSpec> out;
    if (!instance_path.empty()) {
        const std::filesystem::path p(instance_path);
        if (std::filesystem::is_directory(p)) {
            std::vector<std::filesystem::path> files;
            for (const auto &entry : std::filesystem::directory_iterator(p)) {
                if (entry.path().extension() == ".json") files.push_back(entry.path());
            }
            std::sort(files.begin(), files.end());
            for (const auto &f : files) out.push_back(load_instance(f.string(), network));
        } else {
            out.push_back(load_instance(instance_path, network));
        }
        return out;
    }
    for (const auto seed : parse_seed_range(seeds).values()) out.push_back(generate_instance(network, seed));
    return out;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"UGV-UAV cooperative path planning simulator"};
    app.require_subcommand(1);

    // gen
    auto *gen = app.add_subcommand("gen", "Write seeded instance files for a graph");
    std::string gen_graph, gen_seeds, gen_out;
    gen->add_option("--graph", gen_graph, "Graph file or grid:RxC[:spacing]")->required();
    gen->add_option("--seeds", gen_seeds, "Seed range a..b (inclusive)")->required();
    gen->add_option("--out", gen_out, "Output directory")->required();

    // run
    auto *run_cmd = app.add_subcommand("run", "Run one simulation");
    std::string run_graph, run_instance, run_seed, run_out, run_events, run_format = "csv";
    double run_vg = 20.0, run_va = 40.0;
    StrategyFlags run_flags;
    run_cmd->add_option("--graph", run_graph, "Graph file or grid:RxC[:spacing]")->required();
    auto *inst_opt = run_cmd->add_option("--instance", run_instance, "Instance file");
    auto *seed_opt = run_cmd->add_option("--seeds", run_seed, "Generate the instance from this seed");
    inst_opt->excludes(seed_opt);
    run_flags.add(*run_cmd, false);
    run_cmd->add_option("--ugv-speed", run_vg, "UGV speed (m/s)")->capture_default_str();
    run_cmd->add_option("--uav-speed", run_va, "UAV speed (m/s)")->capture_default_str();
    run_cmd->add_option("--out", run_out, "Result file (default stdout)");
    run_cmd->add_option("--events-out", run_events, "Event log JSON file");
    run_cmd->add_option("--format", run_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    // batch
    auto *batch = app.add_subcommand("batch", "Run the strategy x instance x speed cross-product");
    std::vector<std::string> batch_graphs;
    std::string batch_seeds, batch_instances, batch_out, batch_summary, batch_compute, batch_format = "csv";
    double batch_vg = 20.0;
    std::vector<double> batch_va{20.0, 30.0, 40.0};
    std::size_t jobs = 1;
    StrategyFlags batch_flags;
    batch->add_option("--graph", batch_graphs, "Graph files or grid tokens (repeatable)")->required();
    auto *bseeds = batch->add_option("--seeds", batch_seeds, "Seed range a..b (inclusive)");
    auto *binst = batch->add_option("--instance", batch_instances, "Instance file or directory (single graph)");
    bseeds->excludes(binst);
    batch_flags.add(*batch, true);
    batch->add_option("--ugv-speed", batch_vg, "UGV speed (m/s)")->capture_default_str();
    batch->add_option("--uav-speed", batch_va, "UAV speeds (repeatable)")->capture_default_str();
    batch->add_option("--jobs", jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    batch->add_option("--out", batch_out, "Row file (default stdout)");
    batch->add_option("--summary-out", batch_summary, "Mean travel time table");
    batch->add_option("--computation-out", batch_compute, "Mean computation time table");
    batch->add_option("--format", batch_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    // summarize
    auto *summ = app.add_subcommand("summarize", "Summary tables from a CSV row file");
    std::string summ_in, summ_out, summ_compute, summ_format = "csv";
    summ->add_option("--in", summ_in, "Row CSV written by batch")->required();
    summ->add_option("--out", summ_out, "Mean travel time table (default stdout)");
    summ->add_option("--computation-out", summ_compute, "Mean computation time table");
    summ->add_option("--format", summ_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (gen->parsed()) {
            const auto map = load_map(gen_graph);
            const auto files = generate_instance_files(*map.network, parse_seed_range(gen_seeds), gen_out);
            std::cerr << "wrote " << files.size() << " instance files\n";
            return 0;
        }
        if (run_cmd->parsed()) {
            if (run_instance.empty() && run_seed.empty()) throw ConfigError("run needs --instance or --seeds");
            const auto map = load_map(run_graph);
            const auto specs = run_flags.specs({"bidirectional"});
            if (specs.size() != 1) throw ConfigError("run takes exactly one strategy");
            InstanceSpec instance;
            if (!run_instance.empty()) {
                instance = load_instance(run_instance, *map.network);
            } else {
                const auto range = parse_seed_range(run_seed);
                if (range.empty || range.first != range.last) throw ConfigError("run takes a single seed");
                instance = generate_instance(*map.network, range.first);
            }
            const SpeedConfig speeds{run_vg, run_va};
            if (!(run_vg > 0.0) || !(run_va > 0.0)) throw ConfigError("speeds must be positive");
            const auto outcome = run(*map.network, instance.truth, specs.front(), to_sim_config(instance, speeds),
                                     StrategyContext{instance.seed, nullptr});
            if (!run_events.empty()) write_text_file(run_events, events_to_json(outcome.event_log) + "\n");
            emit(run_out, render_rows({make_row(map.name, instance, specs.front(), speeds, outcome)}, run_format));
            return 0;
        }
        if (batch->parsed()) {
            if (batch_seeds.empty() && batch_instances.empty()) throw ConfigError("batch needs --seeds or --instance");
            if (!batch_instances.empty() && batch_graphs.size() != 1) {
                throw ConfigError("--instance works with a single --graph");
            }
            BatchInput input;
            input.jobs = jobs;
            input.strategies = batch_flags.specs(
                {"ugv-only", "kemeny", "k-shortest", "mpsp", "bidirectional", "multi-bidirectional"});
            for (const double va : batch_va) {
                if (!(batch_vg > 0.0) || !(va > 0.0)) throw ConfigError("speeds must be positive");
                input.speeds.push_back({batch_vg, va});
            }
            for (const auto &g : batch_graphs) {
                auto source = load_map(g);
                auto instances = instances_for(*source.network, batch_seeds, batch_instances);
                input.maps.push_back({std::move(source), std::move(instances)});
            }
            const auto output = run_batch(input);
            emit(batch_out, render_rows(output.rows, batch_format));
            write_summaries(output.rows, batch_format, batch_summary, batch_compute);
            if (!output.failures.empty()) {
                std::cerr << output.failures.size() << " failed cells:\n";
                for (const auto &f : output.failures) std::cerr << "  " << f << '\n';
                return kExitFailedCells;
            }
            return 0;
        }
        if (summ->parsed()) {
            const auto rows = rows_from_csv(read_text_file(summ_in));
            const auto cells = summarize(rows);
            if (summ_format == "json") {
                emit(summ_out, summary_json(cells));
            } else {
                emit(summ_out, summary_table(cells, SummaryMetric::TravelTime));
                if (!summ_compute.empty()) {
                    write_text_file(summ_compute, summary_table(cells, SummaryMetric::ComputationTime));
                }
            }
            return 0;
        }
    } catch (const IoError &err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitIo;
    } catch (const std::filesystem::filesystem_error &err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitIo;
    } catch (const std::exception &err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitConfig;
    }
    return 0;
}
