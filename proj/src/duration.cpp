#include "passflow/duration.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>

namespace passflow {

namespace {

// Reads "123" or "1.25" and returns the value scaled to thousandths.
std::optional<std::int64_t> read_number(std::string_view text, std::size_t& pos, bool allow_fraction) {
  std::int64_t whole = 0;
  std::size_t start = pos;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    whole = whole * 10 + (text[pos] - '0');
    if (whole > 1'000'000'000'000LL) return std::nullopt;
    ++pos;
  }
  if (pos == start) return std::nullopt;
  std::int64_t milli = whole * 1000;
  if (pos < text.size() && (text[pos] == '.' || text[pos] == ',')) {
    if (!allow_fraction) return std::nullopt;
    ++pos;
    std::int64_t scale = 100;
    std::size_t digits = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      if (scale > 0) milli += (text[pos] - '0') * scale;
      scale /= 10;
      ++pos;
      ++digits;
    }
    if (digits == 0) return std::nullopt;
  }
  return milli;
}

}  // namespace

std::optional<Duration> Duration::parse(std::string_view text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && text[pos] == '-') {
    negative = true;
    ++pos;
  }
  if (pos >= text.size() || text[pos] != 'P') return std::nullopt;
  ++pos;
  if (pos >= text.size()) return std::nullopt;

  std::int64_t total = 0;
  bool in_time = false;
  bool any = false;
  int last_rank = -1;  // enforces W < D < T < H < M < S ordering
  while (pos < text.size()) {
    if (text[pos] == 'T') {
      if (in_time) return std::nullopt;
      in_time = true;
      ++pos;
      if (pos >= text.size()) return std::nullopt;
      continue;
    }
    auto milli = read_number(text, pos, true);
    if (!milli || pos >= text.size()) return std::nullopt;
    char unit = text[pos++];
    int rank = 0;
    std::int64_t factor = 0;
    if (!in_time) {
      switch (unit) {
        case 'W': rank = 0; factor = 7LL * 86'400; break;
        case 'D': rank = 1; factor = 86'400; break;
        default: return std::nullopt;  // Y and M have no fixed length
      }
    } else {
      switch (unit) {
        case 'H': rank = 2; factor = 3'600; break;
        case 'M': rank = 3; factor = 60; break;
        case 'S': rank = 4; factor = 1; break;
        default: return std::nullopt;
      }
    }
    if (rank <= last_rank) return std::nullopt;
    // Fractions are only legal on the smallest component written.
    if (*milli % 1000 != 0 && unit != 'S') return std::nullopt;
    last_rank = rank;
    total += *milli * factor;
    any = true;
  }
  if (!any) return std::nullopt;
  if (negative) return std::nullopt;
  return Duration(std::chrono::milliseconds(total));
}

std::string Duration::to_iso8601() const {
  std::int64_t ms = value_.count();
  if (ms == 0) return "PT0S";
  std::string out = "P";
  const std::int64_t days = ms / 86'400'000;
  ms %= 86'400'000;
  const std::int64_t hours = ms / 3'600'000;
  ms %= 3'600'000;
  const std::int64_t minutes = ms / 60'000;
  ms %= 60'000;
  const std::int64_t seconds = ms / 1000;
  const std::int64_t millis = ms % 1000;
  if (days) out += std::to_string(days) + "D";
  if (hours || minutes || seconds || millis) {
    out += "T";
    if (hours) out += std::to_string(hours) + "H";
    if (minutes) out += std::to_string(minutes) + "M";
    if (seconds || millis) {
      out += std::to_string(seconds);
      if (millis) {
        std::string frac = std::to_string(1000 + millis).substr(1);
        while (!frac.empty() && frac.back() == '0') frac.pop_back();
        out += "." + frac;
      }
      out += "S";
    }
  }
  return out;
}

Duration Duration::scaled(double factor) const {
  return Duration(std::chrono::milliseconds(
      static_cast<std::int64_t>(std::llround(static_cast<double>(value_.count()) * factor))));
}

}  // namespace passflow
