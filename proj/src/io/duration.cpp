#include "netcpd/io/duration.hpp"

#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <string>

#include "netcpd/core/errors.hpp"

namespace netcpd {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

bool parse_number(std::string_view s, double& out) {
    if (s.empty()) {
        return false;
    }
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && ptr == end && std::isfinite(out);
}

int digits(std::string_view s, std::size_t pos, std::size_t count) {
    if (pos + count > s.size()) {
        throw DataError("truncated ISO-8601 timestamp '" + std::string(s) + "'");
    }
    int v = 0;
    for (std::size_t i = pos; i < pos + count; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
            throw DataError("malformed ISO-8601 timestamp '" + std::string(s) + "'");
        }
        v = v * 10 + (s[i] - '0');
    }
    return v;
}

} // namespace

double parse_duration(std::string_view text) {
    const std::string_view s = trim(text);
    double value = 0.0;
    if (parse_number(s, value)) {
        if (!(value > 0.0)) {
            throw ConfigError("duration", "must be positive");
        }
        return value;
    }
    if (s.size() < 2) {
        throw ConfigError("duration", "cannot parse '" + std::string(text) + "'");
    }
    double unit = 0.0;
    switch (s.back()) {
    case 'w': unit = 7.0 * 86400.0; break;
    case 'd': unit = 86400.0; break;
    case 'h': unit = 3600.0; break;
    case 'm': unit = 60.0; break;
    case 's': unit = 1.0; break;
    default: throw ConfigError("duration", "unknown unit in '" + std::string(text) + "'");
    }
    if (!parse_number(s.substr(0, s.size() - 1), value) || !(value > 0.0)) {
        throw ConfigError("duration", "cannot parse '" + std::string(text) + "'");
    }
    return value * unit;
}

double parse_iso8601(std::string_view text) {
    using namespace std::chrono;
    const std::string_view s = trim(text);
    const int y = digits(s, 0, 4);
    if (s.size() < 10 || s[4] != '-' || s[7] != '-') {
        throw DataError("malformed ISO-8601 date '" + std::string(text) + "'");
    }
    const int mo = digits(s, 5, 2);
    const int d = digits(s, 8, 2);
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) {
        throw DataError("invalid calendar date '" + std::string(text) + "'");
    }
    double seconds = static_cast<double>(sys_days{ymd}.time_since_epoch().count()) * 86400.0;
    std::size_t pos = 10;
    if (pos < s.size() && (s[pos] == 'T' || s[pos] == ' ')) {
        const int hh = digits(s, pos + 1, 2);
        if (s.size() < pos + 6 || s[pos + 3] != ':') {
            throw DataError("malformed ISO-8601 time '" + std::string(text) + "'");
        }
        const int mm = digits(s, pos + 4, 2);
        pos += 6;
        double ss = 0.0;
        if (pos < s.size() && s[pos] == ':') {
            std::size_t end = pos + 1;
            while (end < s.size() && (std::isdigit(static_cast<unsigned char>(s[end])) || s[end] == '.')) {
                ++end;
            }
            if (!parse_number(s.substr(pos + 1, end - pos - 1), ss)) {
                throw DataError("malformed ISO-8601 seconds '" + std::string(text) + "'");
            }
            pos = end;
        }
        if (hh > 24 || mm > 59 || ss >= 61.0) {
            throw DataError("time of day out of range '" + std::string(text) + "'");
        }
        seconds += hh * 3600.0 + mm * 60.0 + ss;
    }
    if (pos < s.size()) {
        if (s[pos] == 'Z' && pos + 1 == s.size()) {
            return seconds;
        }
        if ((s[pos] == '+' || s[pos] == '-') && s.size() == pos + 6 && s[pos + 3] == ':') {
            const double offset = digits(s, pos + 1, 2) * 3600.0 + digits(s, pos + 4, 2) * 60.0;
            return s[pos] == '+' ? seconds - offset : seconds + offset;
        }
        throw DataError("trailing characters in ISO-8601 timestamp '" + std::string(text) + "'");
    }
    return seconds;
}

double parse_timestamp(std::string_view text) {
    double value = 0.0;
    if (parse_number(trim(text), value)) {
        return value;
    }
    return parse_iso8601(text);
}

} // namespace netcpd
