#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <vector>

#include "json.hpp"

#include "netcpd/core/matrix.hpp"
#include "netcpd/detector/network_detector.hpp"
#include "netcpd/simulator/simulator.hpp"

namespace netcpd {

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

nlohmann::json schedule_to_json(const ChangeSchedule& s);
ChangeSchedule schedule_from_json(const nlohmann::json& j);

/// Ground truth for evaluation: schedule, membership and rate step functions,
/// and the adjacency as an edge list (omitted for the complete graph).
struct Truth {
    double horizon = 0.0;
    std::size_t nodes = 0;
    std::size_t groups = 0;
    ChangeSchedule schedule;
    StepFunction<std::vector<std::size_t>> memberships;
    StepFunction<Matrix> rates;
    std::optional<Matrix> adjacency;
};

Truth truth_from_simulation(const SimOutput& sim, const ChangeSchedule& schedule, std::size_t groups);
nlohmann::json truth_to_json(const Truth& t);
Truth truth_from_json(const nlohmann::json& j);

/// One line of the posterior trace.
struct TraceRecord {
    std::size_t step = 0;
    Matrix alpha;
    Matrix beta;
    std::vector<double> gamma; // Dirichlet or stick parameters, may be empty
    Matrix tau;
    std::vector<double> occupancy;
    std::optional<nlohmann::json> sigma_summary;
    std::size_t fixed_point_iterations = 0;
    bool fixed_point_converged = true;
    double fixed_point_residual = 0.0;
};

nlohmann::json trace_to_json(const TraceRecord& r);
TraceRecord trace_from_json(const nlohmann::json& j);

nlohmann::json detection_to_json(const DetectionLogEntry& e);
DetectionLogEntry detection_from_json(const nlohmann::json& j);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);
/// Parses every non-empty line; errors name the line number.
std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);

} // namespace netcpd
