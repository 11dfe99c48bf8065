#include "netcpd/io/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <tuple>

#include "netcpd/core/errors.hpp"
#include "netcpd/io/duration.hpp"

namespace netcpd {

NodePolicy parse_node_policy(const std::string& name) {
    if (name == "first-appearance") {
        return NodePolicy::first_appearance;
    }
    if (name == "numeric") {
        return NodePolicy::numeric;
    }
    throw ConfigError("node_policy", "expected 'first-appearance' or 'numeric', got '" + name + "'");
}

std::size_t NodeRegistry::intern(const std::string& name) {
    auto [it, inserted] = ids_.try_emplace(name, names_.size());
    if (inserted) {
        names_.push_back(name);
    }
    return it->second;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else if (c != '\r') {
            fields.back() += c;
        }
    }
    if (quoted) {
        throw DataError("unterminated quoted field");
    }
    return fields;
}

namespace {

std::size_t numeric_id(const std::string& s, std::size_t line) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw DataError("line " + std::to_string(line) + ": node id '" + s + "' is not a non-negative integer");
    }
    return v;
}

} // namespace

IngestResult ingest_csv(const std::filesystem::path& path, const IngestOptions& options) {
    if (!(options.width > 0.0)) {
        throw ConfigError("interval", "batch width must be positive");
    }
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    IngestResult out;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::size_t max_numeric = 0;
    bool any_numeric = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        std::vector<std::string> fields;
        try {
            fields = split_csv_line(line);
        } catch (const DataError& e) {
            throw DataError("line " + std::to_string(line_no) + ": " + e.what());
        }
        if (!header_seen) {
            header_seen = true;
            if (fields.size() != 3 || fields[0] != "source" || fields[1] != "dest" || fields[2] != "timestamp") {
                throw DataError("line 1: expected header 'source,dest,timestamp'");
            }
            continue;
        }
        if (fields.size() != 3) {
            throw DataError("line " + std::to_string(line_no) + ": expected 3 fields, got " +
                            std::to_string(fields.size()));
        }
        Event e;
        if (options.policy == NodePolicy::numeric) {
            e.source = numeric_id(fields[0], line_no);
            e.dest = numeric_id(fields[1], line_no);
            max_numeric = std::max({max_numeric, e.source, e.dest});
            any_numeric = true;
        } else {
            e.source = out.registry.intern(fields[0]);
            e.dest = out.registry.intern(fields[1]);
        }
        try {
            e.time = parse_timestamp(fields[2]) - options.origin;
        } catch (const DataError& err) {
            throw DataError("line " + std::to_string(line_no) + ": " + err.what());
        }
        if (e.time < 0.0) {
            throw DataError("line " + std::to_string(line_no) + ": timestamp precedes the origin");
        }
        out.events.push_back(e);
    }
    std::stable_sort(out.events.begin(), out.events.end(), [](const Event& a, const Event& b) {
        return std::tie(a.time, a.source, a.dest) < std::tie(b.time, b.source, b.dest);
    });

    std::size_t nodes = out.registry.size();
    if (options.policy == NodePolicy::numeric) {
        nodes = any_numeric ? max_numeric + 1 : 0;
        if (options.nodes) {
            if (*options.nodes < nodes) {
                throw DataError("node id " + std::to_string(max_numeric) + " exceeds the configured node count");
            }
            nodes = *options.nodes;
        }
        for (std::size_t i = 0; i < nodes; ++i) {
            out.registry.intern(std::to_string(i));
        }
    }
    if (options.horizon) {
        out.horizon = *options.horizon;
        // Rows past the horizon are outside the analysis window.
        out.events.erase(std::remove_if(out.events.begin(), out.events.end(),
                                        [&](const Event& e) { return e.time > out.horizon; }),
                         out.events.end());
    } else {
        out.horizon = out.events.empty()
                          ? 0.0
                          : static_cast<double>(batch_index(out.events.back().time, options.width)) * options.width;
    }
    if (!out.events.empty() || out.horizon > 0.0) {
        out.batches = batch_events(out.events, nodes, options.width, out.horizon);
    }
    return out;
}

void write_events_csv(const std::filesystem::path& path, std::span<const Event> events) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) {
        throw DataError("cannot write " + path.string());
    }
    std::fputs("source,dest,timestamp\n", f);
    for (const Event& e : events) {
        std::fprintf(f, "%zu,%zu,%.17g\n", e.source, e.dest, e.time);
    }
    if (std::fclose(f) != 0) {
        throw DataError("error while writing " + path.string());
    }
}

} // namespace netcpd
