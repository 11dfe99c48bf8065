#pragma once

#include <string_view>

namespace netcpd {

/// Parses a batch width or horizon: a plain number ("0.1", abstract units) or a
/// number with a unit suffix w/d/h/m/s ("1w", "3h"), converted to seconds.
/// Throws ConfigError for anything else or a non-positive value.
double parse_duration(std::string_view text);

/// Seconds since the Unix epoch (UTC) for an ISO-8601 date or date-time:
/// "2019-01-02", "2019-01-02T08:30:00", "2019-01-02 08:30:00.5Z",
/// "2019-01-02T08:30:00+01:00". Throws DataError on malformed input.
double parse_iso8601(std::string_view text);

/// Numeric timestamp if `text` is a plain number, else ISO-8601.
double parse_timestamp(std::string_view text);

} // namespace netcpd
