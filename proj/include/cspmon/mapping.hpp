#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "cspmon/lts.hpp"
#include "cspmon/monitor.hpp"
#include "cspmon/value.hpp"

namespace cspmon {

/// Raw SUA event names to canonical event text.
struct Mapping {
  std::map<std::string, std::string, std::less<>> entries;
};

/// Throws MappingError on bad JSON, non-string values, duplicate keys or
/// values that are not well-formed event texts.
Mapping parse_mapping(std::string_view json_text);
Mapping load_mapping(const std::filesystem::path& path);
/// Throws MappingError if any value is outside the oracle's alphabet.
void validate_mapping(const Mapping& mapping, const Lts& oracle);

/// A raw name after mapping: the canonical event, or nothing (Unmapped).
struct MappedEvent {
  std::string raw;
  std::optional<Event> event;

  bool unmapped() const { return !event.has_value(); }
};

/// Mapped entry when `raw` is a key, else `raw` parsed as canonical event
/// text, else Unmapped.
MappedEvent map_event(const Mapping& mapping, std::string_view raw);

/// Monitor input for a mapped event. The received text is kept as-is.
TraceEvent to_trace_event(const Lts& oracle, const MappedEvent& mapped);

/// Streams a trace file: one event per non-empty line, `#` starts a comment
/// line, surrounding whitespace ignored.
class TraceReader {
 public:
  /// Throws IoError if the file cannot be opened.
  TraceReader(const std::filesystem::path& path, const Mapping& mapping);

  std::optional<MappedEvent> next();
  /// 1-based line number of the last event returned.
  std::size_t line() const { return line_; }

 private:
  std::ifstream in_;
  const Mapping& mapping_;
  std::filesystem::path path_;
  std::size_t line_ = 0;
};

/// Whole-file convenience over TraceReader.
std::vector<MappedEvent> read_trace(const std::filesystem::path& path, const Mapping& mapping);

}  // namespace cspmon
