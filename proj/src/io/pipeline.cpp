#include "netcpd/io/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <string>

#include <boost/math/distributions/gamma.hpp>

#include "netcpd/core/errors.hpp"
#include "netcpd/core/parallel.hpp"
#include "netcpd/detector/network_detector.hpp"
#include "netcpd/inference/alignment.hpp"
#include "netcpd/inference/bhpp.hpp"
#include "netcpd/inference/gem.hpp"
#include "netcpd/inference/sbm.hpp"
#include "netcpd/io/csv.hpp"
#include "netcpd/io/json_io.hpp"
#include "netcpd/metrics/metrics.hpp"

namespace netcpd {

using nlohmann::json;

namespace {

constexpr std::uint64_t kAdjacencyStream = 0x73707273ULL;

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write " + path.string());
    }
    return out;
}

std::vector<std::size_t> argmax_rows(const Matrix& tau) { return MembershipPosterior{tau}.argmax(); }

std::size_t distinct(const std::vector<std::size_t>& labels) {
    return std::set<std::size_t>(labels.begin(), labels.end()).size();
}

std::vector<TraceRecord> load_trace(const RunConfig& config) {
    std::vector<TraceRecord> trace;
    for (const auto& line : read_jsonl(config.out_dir / kTraceFile)) {
        trace.push_back(trace_from_json(line));
    }
    for (std::size_t r = 0; r < trace.size(); ++r) {
        if (trace[r].step != r + 1) {
            throw DataError("trace: steps must run 1, 2, ... without gaps");
        }
    }
    return trace;
}

double median_of(std::vector<double> v) {
    if (v.empty()) {
        return std::nan("");
    }
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

json score_to_json(const DetectionSummary& s) {
    return {{"changes", s.pooled.changes},
            {"detections", s.pooled.detections},
            {"correct", s.pooled.correct},
            {"ccd", s.pooled.changes == 0 ? json(nullptr) : json(s.pooled.ccd())},
            {"dnf", s.pooled.dnf()}};
}

// Label the true state takes just after a change at `time`.
const std::vector<std::size_t>& labels_after(const Truth& truth, double time) {
    return truth.memberships.at(std::nextafter(time, std::numeric_limits<double>::infinity()));
}

void run_single(RunConfig config) {
    std::filesystem::create_directories(config.out_dir);
    if (config.simulation) {
        run_simulate(config);
    }
    run_infer(config);
    run_detect(config);
    if (std::filesystem::exists(config.out_dir / kTruthFile)) {
        run_eval(config);
    }
}

} // namespace

std::unique_ptr<StreamingEngine> make_engine(const RunConfig& config, std::size_t nodes) {
    ModelConfig model = config.model;
    model.nodes = nodes;
    ValidatedConfig checked = validate(std::move(model));
    switch (config.variant) {
    case Variant::bhpp:
        return std::make_unique<BhppEngine>(checked, EdgeSet::complete(nodes, config.self_loops), config.seed);
    case Variant::sbm:
        return std::make_unique<SbmEngine>(checked, config.seed);
    case Variant::gem:
        return std::make_unique<GemEngine>(checked, EdgeSet::complete(nodes, config.self_loops), config.seed);
    }
    throw ConfigError("variant", "unsupported variant");
}

void run_simulate(RunConfig& config) {
    if (!config.simulation) {
        throw ConfigError("simulation", "no simulation configured");
    }
    config.validate();
    SimulationSettings& s = *config.simulation;
    s.config.nodes = config.model.nodes;
    s.config.groups = s.config.rates.rows();
    if (s.config.memberships.empty()) {
        s.config.memberships = sample_memberships(s.config.nodes, s.config.proportions, config.seed);
    }
    if (s.rho && s.config.adjacency.empty()) {
        const std::vector<std::size_t> connection(s.config.nodes, 0);
        s.config.adjacency =
            sample_sbm_adjacency(connection, Matrix(1, 1, *s.rho), split_seed(config.seed, kAdjacencyStream));
    }
    const SimOutput sim = simulate(s.config, s.schedule, s.horizon, config.seed);

    std::filesystem::create_directories(config.out_dir);
    write_events_csv(config.out_dir / kEventsFile, sim.events);
    write_json_file(config.out_dir / kTruthFile,
                    truth_to_json(truth_from_simulation(sim, s.schedule, s.config.groups)));
    if (!config.horizon) {
        config.horizon = s.horizon;
    }
    write_json_file(config.out_dir / kRunFile, to_json(config));
}

json run_infer(const RunConfig& config) {
    config.validate();
    const std::filesystem::path input = config.input.empty() ? config.out_dir / kEventsFile : config.input;
    IngestOptions options;
    options.policy = config.node_policy;
    options.width = config.model.interval;
    options.origin = config.origin;
    options.horizon = config.horizon;
    if (!options.horizon && config.simulation) {
        options.horizon = config.simulation->horizon;
    }
    if (config.node_policy == NodePolicy::numeric && config.model.nodes > 0) {
        options.nodes = config.model.nodes;
    }
    const IngestResult data = ingest_csv(input, options);
    const std::size_t nodes = data.registry.size();
    if (nodes < 2) {
        throw DataError(input.string() + ": need events on at least 2 nodes");
    }

    std::filesystem::create_directories(config.out_dir);
    {
        std::ofstream out = open_output(config.out_dir / kNodesFile);
        out << "id,name\n";
        for (std::size_t i = 0; i < nodes; ++i) {
            out << i << ',' << data.registry.name(i) << '\n';
        }
    }

    auto engine = make_engine(config, nodes);
    std::size_t occupied = 0;
    std::ofstream trace = open_output(config.out_dir / kTraceFile);
    std::ofstream means = open_output(config.out_dir / kMeansFile);
    means << "step,time,from,to,mean,lower,upper\n";
    char line[256];
    for (const EventBatch& batch : data.batches) {
        engine->step(batch);
        const RatePosterior& rates = engine->rates();
        TraceRecord record;
        record.step = engine->step_index();
        record.alpha = rates.alpha;
        record.beta = rates.beta;
        record.tau = engine->memberships();
        record.occupancy = engine->occupancy();
        const FixedPointReport& fp = engine->last_fixed_point();
        record.fixed_point_iterations = fp.iterations;
        record.fixed_point_converged = fp.converged;
        record.fixed_point_residual = fp.residual;
        if (auto* bhpp = dynamic_cast<const BhppEngine*>(engine.get())) {
            record.gamma = bhpp->state().mixture.gamma;
        } else if (auto* sbm = dynamic_cast<const SbmEngine*>(engine.get())) {
            record.gamma = sbm->state().core.mixture.gamma;
            const Matrix& sigma = sbm->state().graph.sigma;
            const double total = std::accumulate(sigma.values().begin(), sigma.values().end(), 0.0);
            const auto likely = std::count_if(sigma.values().begin(), sigma.values().end(),
                                              [](double v) { return v >= 0.5; });
            record.sigma_summary = json{{"mean", total / static_cast<double>(sigma.values().size())},
                                        {"above_half", likely},
                                        {"rho", matrix_to_json(sbm->state().graph.rho_mean())}};
        } else if (auto* gem = dynamic_cast<const GemEngine*>(engine.get())) {
            record.gamma = gem->state().posterior.omega;
        }
        trace << trace_to_json(record).dump() << '\n';
        occupied = static_cast<std::size_t>(
            std::count_if(record.occupancy.begin(), record.occupancy.end(),
                          [&](double v) { return v >= config.model.occupancy_threshold; }));

        const double time = static_cast<double>(record.step) * config.model.interval;
        for (std::size_t k = 0; k < rates.groups(); ++k) {
            for (std::size_t m = 0; m < rates.groups(); ++m) {
                const GammaParams g = rates.block(k, m);
                const boost::math::gamma_distribution<> dist(g.shape, 1.0 / g.rate);
                std::snprintf(line, sizeof line, "%zu,%.10g,%zu,%zu,%.10g,%.10g,%.10g\n", record.step, time, k, m,
                              g.mean(), boost::math::quantile(dist, 0.025), boost::math::quantile(dist, 0.975));
                means << line;
            }
        }
    }
    return {{"nodes", nodes}, {"steps", data.batches.size()}, {"occupied_groups", occupied}};
}

void run_detect(const RunConfig& config) {
    config.detector.validate();
    const std::vector<TraceRecord> trace = load_trace(config);
    std::ofstream log = open_output(config.out_dir / kDetectionsFile);
    std::ofstream changes = open_output(config.out_dir / kNodeChangesFile);
    changes << "step,flagged_nodes,switched_nodes\n";
    if (trace.empty()) {
        return;
    }
    NetworkDetector detector(config.detector, trace.front().alpha.rows(), trace.front().tau.rows(),
                             config.watch_memberships);
    std::vector<std::size_t> previous;
    for (const TraceRecord& r : trace) {
        std::size_t flagged_nodes = 0;
        for (const DetectionLogEntry& e : detector.observe(r.step, RatePosterior{r.alpha, r.beta}, r.tau)) {
            log << detection_to_json(e).dump() << '\n';
            if (e.flagged && e.kind == DetectionKind::membership) {
                ++flagged_nodes;
            }
        }
        const auto labels = argmax_rows(r.tau);
        std::size_t switched = 0;
        if (!previous.empty()) {
            for (std::size_t i = 0; i < labels.size(); ++i) {
                switched += labels[i] != previous[i] ? 1 : 0;
            }
        }
        previous = labels;
        changes << r.step << ',' << flagged_nodes << ',' << switched << '\n';
    }
}

json run_eval(const RunConfig& config) {
    const Truth truth = truth_from_json(read_json_file(config.out_dir / kTruthFile));
    const std::vector<TraceRecord> trace = load_trace(config);
    std::vector<DetectionLogEntry> log;
    if (std::filesystem::exists(config.out_dir / kDetectionsFile)) {
        for (const auto& line : read_jsonl(config.out_dir / kDetectionsFile)) {
            log.push_back(detection_from_json(line));
        }
    }
    const double width = config.model.interval;
    const std::size_t burn_in = config.detector.convergence_burn_in;
    json summary = {{"variant", to_string(config.variant)}, {"seed", config.seed}, {"steps", trace.size()}};
    if (trace.empty()) {
        write_json_file(config.out_dir / kSummaryFile, summary);
        return summary;
    }
    if (trace.front().tau.rows() != truth.nodes) {
        throw DataError("truth and trace disagree on the node count");
    }

    json ari_series = json::array();
    std::vector<double> post_burn;
    json occupied = json::array();
    json true_groups = json::array();
    std::size_t unconverged = 0;
    std::vector<Matrix> means;
    for (const TraceRecord& r : trace) {
        const auto& reference = truth.memberships.at(truth_time(r.step, width));
        const double a = ari(argmax_rows(r.tau), reference);
        ari_series.push_back(a);
        if (r.step > burn_in) {
            post_burn.push_back(a);
        }
        occupied.push_back(std::count_if(r.occupancy.begin(), r.occupancy.end(),
                                         [&](double v) { return v >= config.model.occupancy_threshold; }));
        true_groups.push_back(distinct(reference));
        unconverged += r.fixed_point_converged ? 0 : 1;
        means.push_back(RatePosterior{r.alpha, r.beta}.mean());
    }
    summary["ari"] = ari_series;
    summary["mean_ari_after_burn_in"] =
        post_burn.empty() ? json(nullptr)
                          : json(std::accumulate(post_burn.begin(), post_burn.end(), 0.0) / post_burn.size());
    summary["occupied_groups"] = occupied;
    summary["true_groups"] = true_groups;
    summary["unconverged_fixed_points"] = unconverged;

    const TraceRecord& last = trace.back();
    const std::size_t estimated_groups = last.alpha.rows();
    const std::size_t truth_groups = truth.groups;
    const auto mapping = align_labels(argmax_rows(last.tau), truth.memberships.at(truth_time(last.step, width)),
                                      estimated_groups, truth_groups);
    summary["label_mapping"] = mapping;
    summary["rate_rmse"] = matrix_to_json(rate_rmse(means, truth.rates, width, burn_in, mapping));

    // Rate changes: targets are truth blocks; flags are mapped through the final alignment.
    DetectionRecord rates_record;
    rates_record.interval = width;
    for (const RateChange& c : truth.schedule.rate_changes) {
        rates_record.true_changes.push_back({c.time, c.from_group * truth_groups + c.to_group});
    }
    const std::size_t unmatched = truth_groups * truth_groups;
    for (const DetectionLogEntry& e : log) {
        if (!e.flagged || e.kind != DetectionKind::rate) {
            continue;
        }
        const std::size_t a = mapping.at(e.from_group);
        const std::size_t b = mapping.at(e.to_group);
        const std::size_t target =
            a < truth_groups && b < truth_groups ? a * truth_groups + b : unmatched + e.from_group * estimated_groups + e.to_group;
        rates_record.flagged.push_back({e.step, target});
    }
    summary["rate_detection"] = score_to_json(ccd_dnf(rates_record));

    // Membership changes: one target per node that actually switches group.
    DetectionRecord node_record;
    node_record.interval = width;
    for (const MembershipChange& c : truth.schedule.membership_changes) {
        const auto& before = truth.memberships.at(c.time);
        const auto& after = labels_after(truth, c.time);
        for (std::size_t i : c.nodes) {
            if (before[i] != after[i]) {
                node_record.true_changes.push_back({c.time, i});
            }
        }
    }
    for (const DetectionLogEntry& e : log) {
        if (e.flagged && e.kind == DetectionKind::membership) {
            node_record.flagged.push_back({e.step, e.from_group});
        }
    }
    summary["membership_detection"] = score_to_json(ccd_dnf(node_record));

    write_json_file(config.out_dir / kSummaryFile, summary);
    return summary;
}

void run_pipeline(RunConfig config) {
    config.validate();
    if (config.replicates <= 1) {
        run_single(config);
        return;
    }
    const std::size_t count = config.replicates;
    std::vector<RunConfig> runs(count, config);
    for (std::size_t k = 0; k < count; ++k) {
        char name[32];
        std::snprintf(name, sizeof name, "rep-%03zu", k);
        runs[k].seed = config.seed + k;
        runs[k].replicates = 1;
        runs[k].out_dir = config.out_dir / name;
    }
    parallel_for(count, [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            run_single(runs[k]);
        }
    });

    if (!config.simulation) {
        return;
    }
    json pooled = {{"replicates", count}, {"runs", json::array()}};
    std::vector<double> rate_ccd, rate_dnf, node_ccd, node_dnf;
    std::vector<std::vector<double>> ari_by_step;
    for (const RunConfig& run : runs) {
        const json s = read_json_file(run.out_dir / kSummaryFile);
        pooled["runs"].push_back(run.out_dir.filename().string());
        auto collect = [](const json& v, std::vector<double>& into) {
            if (v.is_number()) {
                into.push_back(v.get<double>());
            }
        };
        collect(s["rate_detection"]["ccd"], rate_ccd);
        collect(s["rate_detection"]["dnf"], rate_dnf);
        collect(s["membership_detection"]["ccd"], node_ccd);
        collect(s["membership_detection"]["dnf"], node_dnf);
        const auto& series = s["ari"];
        if (ari_by_step.size() < series.size()) {
            ari_by_step.resize(series.size());
        }
        for (std::size_t r = 0; r < series.size(); ++r) {
            ari_by_step[r].push_back(series[r].get<double>());
        }
    }
    json mean_ari = json::array();
    for (const auto& v : ari_by_step) {
        mean_ari.push_back(std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()));
    }
    auto med = [&](const std::vector<double>& v) { return v.empty() ? json(nullptr) : json(median_of(v)); };
    pooled["mean_ari"] = mean_ari;
    pooled["median_rate_ccd"] = med(rate_ccd);
    pooled["median_rate_dnf"] = med(rate_dnf);
    pooled["median_membership_ccd"] = med(node_ccd);
    pooled["median_membership_dnf"] = med(node_dnf);
    write_json_file(config.out_dir / kSummaryFile, pooled);
}

} // namespace netcpd
