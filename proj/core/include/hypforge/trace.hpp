#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hypforge/model.hpp"

namespace hypforge {

struct TraceEvent {
  ObsId symbol;
  std::optional<std::string> timestamp;

  bool operator==(const TraceEvent&) const = default;
};

/// Totally ordered observation sequence. Duplicates are allowed, and so are
/// symbols the model does not know about (compile rejects those).
struct Trace {
  std::vector<TraceEvent> events;

  static Trace from_symbols(const std::vector<ObsId>& symbols);

  std::size_t size() const { return events.size(); }
  bool empty() const { return events.empty(); }
  const ObsId& symbol(std::size_t i) const { return events[i].symbol; }
  std::vector<ObsId> symbols() const;

  bool operator==(const Trace&) const = default;
};

/// Line-oriented trace format: one observation per line, optionally followed
/// by whitespace and a timestamp. Blank lines and `#` comments are skipped.
/// Throws std::invalid_argument on a malformed line.
Trace parse_trace_text(std::string_view text);
std::string format_trace_text(const Trace& trace);

}  // namespace hypforge
