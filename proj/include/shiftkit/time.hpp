#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace shiftkit {

/// UTC instant at second precision.
using Instant = std::chrono::sys_seconds;

/// Parses `YYYY-MM-DD[T ]HH:MM:SS[.fff][Z|+HH:MM|+HHMM|+HH]`. A zone
/// designator is required; fractional seconds are truncated.
std::optional<Instant> parse_iso8601(std::string_view text);

/// Formats as `YYYY-MM-DDTHH:MM:SSZ`.
std::string format_iso8601(Instant t);

/// Parses a duration such as `86400`, `90s`, `15m`, `6h`, `1d`, `1w`.
std::optional<std::chrono::seconds> parse_duration(std::string_view text);

/// Floor of `t` to a multiple of `bin` counted from the Unix epoch. Daily
/// bins therefore start at UTC midnight.
Instant align_down(Instant t, std::chrono::seconds bin);

} // namespace shiftkit
