#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "netcpd/core/errors.hpp"
#include "netcpd/io/duration.hpp"
#include "netcpd/io/json_io.hpp"
#include "netcpd/io/pipeline.hpp"
#include "netcpd/io/presets.hpp"
#include "netcpd/io/run_config.hpp"

namespace {

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<std::string> preset;
    std::optional<std::string> variant;
    std::optional<std::string> interval;
    std::optional<double> forgetting;
    std::optional<std::size_t> truncation;
    std::optional<double> epsilon;
    std::optional<std::size_t> replicates;
    std::optional<std::string> input;
    std::optional<std::size_t> nodes;
    std::optional<std::size_t> groups;
    std::optional<std::string> node_policy;
    std::optional<std::string> origin;
    std::optional<std::string> horizon;
};

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--config", o.config, "JSON run configuration");
    cmd->add_option("--seed", o.seed, "random seed");
    cmd->add_option("--out-dir", o.out_dir, "artifact directory");
    cmd->add_option("--preset", o.preset, "fig3, swap-P, merge-create-P, rate-gap-M, sparsity-RHO, sinusoidal, santander");
    cmd->add_option("--variant", o.variant, "bhpp, sbm or gem");
    cmd->add_option("--interval", o.interval, "batch width: number or duration such as 1w");
    cmd->add_option("--delta", o.forgetting, "forgetting factor for rates, proportions and sticks");
    cmd->add_option("--truncation", o.truncation, "truncation level of the gem variant");
    cmd->add_option("--epsilon", o.epsilon, "occupancy threshold of the gem variant");
    cmd->add_option("--replicates", o.replicates, "independent replicate runs (pipeline)");
    cmd->add_option("--input", o.input, "event CSV with header source,dest,timestamp");
    cmd->add_option("--nodes", o.nodes, "node count");
    cmd->add_option("--groups", o.groups, "group count");
    cmd->add_option("--node-policy", o.node_policy, "numeric or first-appearance");
    cmd->add_option("--origin", o.origin, "time origin: number or ISO-8601 date-time");
    cmd->add_option("--horizon", o.horizon, "analysis horizon: number or duration");
}

netcpd::RunConfig build_config(const std::string& command, const Options& o) {
    using namespace netcpd;
    RunConfig c;
    if (!o.config.empty()) {
        c = load_run_config(o.config);
    } else {
        const std::filesystem::path dir = o.out_dir.value_or("out");
        const auto saved = dir / kRunFile;
        if (command != "simulate" && command != "pipeline" && !o.preset && std::filesystem::exists(saved)) {
            c = load_run_config(saved);
        }
    }
    if (o.seed) {
        c.seed = *o.seed;
    }
    if (o.nodes) {
        c.model.nodes = *o.nodes;
    }
    if (o.preset) {
        apply_preset(c, *o.preset);
    }
    if (o.out_dir) {
        c.out_dir = *o.out_dir;
    }
    if (o.variant) {
        c.variant = parse_variant(*o.variant);
    }
    if (o.interval) {
        c.model.interval = parse_duration(*o.interval);
    }
    if (o.forgetting) {
        const double d = *o.forgetting;
        c.model.forgetting.rate = c.model.forgetting.mixture = c.model.forgetting.stick = d;
    }
    if (o.truncation) {
        c.model.truncation = *o.truncation;
    }
    if (o.epsilon) {
        c.model.occupancy_threshold = *o.epsilon;
    }
    if (o.replicates) {
        c.replicates = *o.replicates;
    }
    if (o.input) {
        c.input = *o.input;
    }
    if (o.groups) {
        c.model.groups = *o.groups;
    }
    if (o.node_policy) {
        c.node_policy = parse_node_policy(*o.node_policy);
    }
    if (o.origin) {
        try {
            c.origin = parse_timestamp(*o.origin);
        } catch (const DataError& e) {
            throw ConfigError("origin", e.what());
        }
    }
    if (o.horizon) {
        c.horizon = parse_duration(*o.horizon);
    }
    if (c.variant == Variant::gem && c.model.truncation == 0) {
        c.model.truncation = 10;
    }
    return c;
}

int run(const std::string& command, const Options& o) {
    using namespace netcpd;
    RunConfig c = build_config(command, o);
    if (command == "simulate") {
        run_simulate(c);
        std::printf("simulated into %s\n", c.out_dir.string().c_str());
    } else if (command == "infer") {
        const auto report = run_infer(c);
        std::printf("nodes %zu, steps %zu, occupied groups %zu\n", report["nodes"].get<std::size_t>(),
                    report["steps"].get<std::size_t>(), report["occupied_groups"].get<std::size_t>());
    } else if (command == "detect") {
        run_detect(c);
        std::printf("detections written to %s\n", (c.out_dir / kDetectionsFile).string().c_str());
    } else if (command == "eval") {
        const auto summary = run_eval(c);
        std::printf("%s\n", summary.dump(2).c_str());
    } else {
        run_pipeline(c);
        std::printf("pipeline finished in %s\n", c.out_dir.string().c_str());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Online changepoint detection for network point processes"};
    app.require_subcommand(1);
    Options options;
    std::string command;
    for (const char* name : {"simulate", "infer", "detect", "eval", "pipeline"}) {
        CLI::App* sub = app.add_subcommand(name);
        add_common(sub, options);
        sub->callback([&command, name] { command = name; });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    try {
        return run(command, options);
    } catch (const netcpd::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const netcpd::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 3;
    } catch (const netcpd::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
