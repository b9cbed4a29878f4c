#include "hypforge/trace.hpp"

#include <sstream>
#include <stdexcept>

namespace hypforge {

Trace Trace::from_symbols(const std::vector<ObsId>& symbols) {
  Trace t;
  t.events.reserve(symbols.size());
  for (const auto& s : symbols) t.events.push_back({s, std::nullopt});
  return t;
}

std::vector<ObsId> Trace::symbols() const {
  std::vector<ObsId> out;
  out.reserve(events.size());
  for (const auto& e : events) out.push_back(e.symbol);
  return out;
}

Trace parse_trace_text(std::string_view text) {
  Trace trace;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string line(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream in(line);
    std::string symbol;
    if (!(in >> symbol)) {
      if (nl == text.size()) break;
      continue;
    }
    TraceEvent event{symbol, std::nullopt};
    std::string stamp;
    if (in >> stamp) event.timestamp = stamp;
    std::string extra;
    if (in >> extra) {
      throw std::invalid_argument("trace line " + std::to_string(line_no) +
                                  ": expected `symbol [timestamp]`, found extra field '" + extra + "'");
    }
    trace.events.push_back(std::move(event));
    if (nl == text.size()) break;
  }
  return trace;
}

std::string format_trace_text(const Trace& trace) {
  std::string out;
  for (const auto& e : trace.events) {
    out += e.symbol;
    if (e.timestamp) {
      out += ' ';
      out += *e.timestamp;
    }
    out += '\n';
  }
  return out;
}

}  // namespace hypforge
