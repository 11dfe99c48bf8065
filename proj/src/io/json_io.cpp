#include "netcpd/io/json_io.hpp"

#include <fstream>
#include <string>

#include "netcpd/core/errors.hpp"

namespace netcpd {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto r = m.row(i);
        rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    return rows;
}

Matrix matrix_from_json(const json& j) {
    if (!j.is_array()) {
        throw DataError("matrix: expected an array of rows");
    }
    if (j.empty()) {
        return Matrix();
    }
    const std::size_t cols = j.front().size();
    Matrix m(j.size(), cols);
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_array() || j[i].size() != cols) {
            throw DataError("matrix: ragged row " + std::to_string(i));
        }
        for (std::size_t k = 0; k < cols; ++k) {
            m(i, k) = j[i][k].get<double>();
        }
    }
    return m;
}

json schedule_to_json(const ChangeSchedule& s) {
    json rates = json::array();
    for (const auto& c : s.rate_changes) {
        rates.push_back({{"time", c.time}, {"from", c.from_group}, {"to", c.to_group}, {"rate", c.rate}});
    }
    json moves = json::array();
    for (const auto& c : s.membership_changes) {
        moves.push_back({{"time", c.time}, {"nodes", c.nodes}, {"target", c.target}});
    }
    return {{"rate_changes", rates}, {"membership_changes", moves}};
}

ChangeSchedule schedule_from_json(const json& j) {
    ChangeSchedule s;
    try {
        for (const auto& c : j.value("rate_changes", json::array())) {
            s.rate_changes.push_back({c.at("time").get<double>(), c.at("from").get<std::size_t>(),
                                      c.at("to").get<std::size_t>(), c.at("rate").get<double>()});
        }
        for (const auto& c : j.value("membership_changes", json::array())) {
            s.membership_changes.push_back({c.at("time").get<double>(),
                                            c.at("nodes").get<std::vector<std::size_t>>(),
                                            c.at("target").get<std::size_t>()});
        }
    } catch (const json::exception& e) {
        throw ConfigError("schedule", e.what());
    }
    return s;
}

Truth truth_from_simulation(const SimOutput& sim, const ChangeSchedule& schedule, std::size_t groups) {
    Truth t;
    t.horizon = sim.horizon;
    t.nodes = sim.true_memberships.values.front().size();
    t.groups = groups;
    t.schedule = schedule;
    t.memberships = sim.true_memberships;
    t.rates = sim.true_rates;
    if (!sim.adjacency.empty()) {
        t.adjacency = sim.adjacency;
    }
    return t;
}

json truth_to_json(const Truth& t) {
    json adjacency = nullptr;
    if (t.adjacency) {
        adjacency = json::array();
        for (std::size_t i = 0; i < t.adjacency->rows(); ++i) {
            for (std::size_t k = 0; k < t.adjacency->cols(); ++k) {
                if ((*t.adjacency)(i, k) != 0.0) {
                    adjacency.push_back({i, k});
                }
            }
        }
    }
    return {{"horizon", t.horizon},
            {"nodes", t.nodes},
            {"groups", t.groups},
            {"initial_memberships", t.memberships.values.front()},
            {"initial_rates", matrix_to_json(t.rates.values.front())},
            {"schedule", schedule_to_json(t.schedule)},
            {"adjacency", adjacency}};
}

Truth truth_from_json(const json& j) {
    Truth t;
    try {
        t.horizon = j.at("horizon").get<double>();
        t.nodes = j.at("nodes").get<std::size_t>();
        t.groups = j.at("groups").get<std::size_t>();
        t.schedule = schedule_from_json(j.at("schedule"));
        t.memberships = membership_path(j.at("initial_memberships").get<std::vector<std::size_t>>(), t.schedule);
        t.rates = rate_path(matrix_from_json(j.at("initial_rates")), t.schedule);
        if (!j.at("adjacency").is_null()) {
            Matrix a(t.nodes, t.nodes, 0.0);
            for (const auto& e : j.at("adjacency")) {
                const auto i = e.at(0).get<std::size_t>();
                const auto k = e.at(1).get<std::size_t>();
                if (i >= t.nodes || k >= t.nodes) {
                    throw DataError("truth: adjacency entry out of range");
                }
                a(i, k) = 1.0;
            }
            t.adjacency = std::move(a);
        }
    } catch (const json::exception& e) {
        throw DataError(std::string("truth: ") + e.what());
    }
    if (t.memberships.values.front().size() != t.nodes) {
        throw DataError("truth: membership vector does not match the node count");
    }
    return t;
}

json trace_to_json(const TraceRecord& r) {
    json j = {{"step", r.step},
              {"alpha", matrix_to_json(r.alpha)},
              {"beta", matrix_to_json(r.beta)},
              {"gamma", r.gamma},
              {"tau", matrix_to_json(r.tau)},
              {"occupancy", r.occupancy},
              {"fixed_point", {{"iterations", r.fixed_point_iterations},
                               {"converged", r.fixed_point_converged},
                               {"residual", r.fixed_point_residual}}}};
    if (r.sigma_summary) {
        j["sigma"] = *r.sigma_summary;
    }
    return j;
}

TraceRecord trace_from_json(const json& j) {
    TraceRecord r;
    try {
        r.step = j.at("step").get<std::size_t>();
        r.alpha = matrix_from_json(j.at("alpha"));
        r.beta = matrix_from_json(j.at("beta"));
        r.gamma = j.at("gamma").get<std::vector<double>>();
        r.tau = matrix_from_json(j.at("tau"));
        r.occupancy = j.at("occupancy").get<std::vector<double>>();
        const auto& fp = j.at("fixed_point");
        r.fixed_point_iterations = fp.at("iterations").get<std::size_t>();
        r.fixed_point_converged = fp.at("converged").get<bool>();
        r.fixed_point_residual = fp.at("residual").get<double>();
        if (j.contains("sigma")) {
            r.sigma_summary = j.at("sigma");
        }
    } catch (const json::exception& e) {
        throw DataError(std::string("trace: ") + e.what());
    }
    if (r.alpha.rows() != r.beta.rows() || r.alpha.cols() != r.beta.cols()) {
        throw DataError("trace: alpha and beta shapes differ");
    }
    return r;
}

json detection_to_json(const DetectionLogEntry& e) {
    json j = {{"step", e.step},
              {"kind", e.kind == DetectionKind::rate ? "rate" : "membership"},
              {"statistic", e.statistic},
              {"threshold", e.threshold},
              {"flagged", e.flagged}};
    if (e.kind == DetectionKind::rate) {
        j["from"] = e.from_group;
        j["to"] = e.to_group;
    } else {
        j["node"] = e.from_group;
    }
    return j;
}

DetectionLogEntry detection_from_json(const json& j) {
    DetectionLogEntry e;
    try {
        e.step = j.at("step").get<std::size_t>();
        const auto kind = j.at("kind").get<std::string>();
        if (kind == "rate") {
            e.kind = DetectionKind::rate;
            e.from_group = j.at("from").get<std::size_t>();
            e.to_group = j.at("to").get<std::size_t>();
        } else if (kind == "membership") {
            e.kind = DetectionKind::membership;
            e.from_group = j.at("node").get<std::size_t>();
        } else {
            throw DataError("detection: unknown kind '" + kind + "'");
        }
        e.statistic = j.at("statistic").get<double>();
        e.threshold = j.at("threshold").get<double>();
        e.flagged = j.at("flagged").get<bool>();
    } catch (const json::exception& ex) {
        throw DataError(std::string("detection: ") + ex.what());
    }
    return e;
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write " + path.string());
    }
    out << j.dump(2) << '\n';
}

std::vector<json> read_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    std::vector<json> out;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        try {
            out.push_back(json::parse(line));
        } catch (const json::parse_error& e) {
            throw DataError(path.string() + ":" + std::to_string(number) + ": " + e.what());
        }
    }
    return out;
}

} // namespace netcpd
