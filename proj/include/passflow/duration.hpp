#pragma once

#include <chrono>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace passflow {

/// A day-time duration (days, hours, minutes, seconds) at millisecond
/// resolution. Year and month components are rejected because they have no
/// fixed length.
class Duration {
 public:
  constexpr Duration() = default;
  constexpr explicit Duration(std::chrono::milliseconds value) : value_(value) {}

  /// Parses ISO-8601 / xsd:duration text such as "P14D", "PT0.2S" or "P2W".
  static std::optional<Duration> parse(std::string_view text);

  constexpr std::chrono::milliseconds value() const { return value_; }

  /// Canonical xsd:dayTimeDuration form, e.g. "P14D", "P1DT2H", "PT0.2S".
  std::string to_iso8601() const;

  /// Multiplies by `factor` and rounds to the nearest millisecond.
  Duration scaled(double factor) const;

  friend constexpr auto operator<=>(const Duration&, const Duration&) = default;

 private:
  std::chrono::milliseconds value_{0};
};

}  // namespace passflow
