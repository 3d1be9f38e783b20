#include "cspmon/mapping.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

#include "cspmon/error.hpp"

namespace cspmon {

Mapping parse_mapping(std::string_view json_text) {
  using nlohmann::json;
  // Duplicate keys are silently merged by the parser; catch them while parsing.
  std::vector<std::vector<std::string>> seen;
  std::string duplicate;
  json::parser_callback_t cb = [&](int depth, json::parse_event_t ev, json& parsed) {
    if (ev == json::parse_event_t::object_start) {
      seen.resize(static_cast<std::size_t>(depth) + 1);
      seen[depth].clear();
    } else if (ev == json::parse_event_t::key) {
      auto& keys = seen[static_cast<std::size_t>(depth) - 1];
      const auto& k = parsed.get_ref<const std::string&>();
      if (std::find(keys.begin(), keys.end(), k) != keys.end() && duplicate.empty()) duplicate = k;
      keys.push_back(k);
    }
    return true;
  };
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end(), cb);
  } catch (const json::exception& e) {
    throw MappingError(std::string("invalid JSON: ") + e.what());
  }
  if (!duplicate.empty()) throw MappingError("duplicate key '" + duplicate + "'");
  if (!doc.is_object()) throw MappingError("mapping must be a JSON object");
  Mapping m;
  for (const auto& [key, value] : doc.items()) {
    if (!value.is_string()) throw MappingError("value of '" + key + "' is not a string");
    const auto& text = value.get_ref<const std::string&>();
    if (!parse_event_text(text)) {
      throw MappingError("value of '" + key + "' is not an event: '" + text + "'");
    }
    m.entries.emplace(key, text);
  }
  return m;
}

Mapping load_mapping(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MappingError("cannot read mapping file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_mapping(ss.str());
}

void validate_mapping(const Mapping& mapping, const Lts& oracle) {
  for (const auto& [raw, text] : mapping.entries) {
    auto id = oracle.event_table().find(text);
    if (!id || !oracle.in_alphabet(*id)) {
      throw MappingError("'" + raw + "' maps to '" + text + "', which is not in the alphabet");
    }
  }
}

MappedEvent map_event(const Mapping& mapping, std::string_view raw) {
  if (auto it = mapping.entries.find(raw); it != mapping.entries.end()) {
    return {std::string(raw), parse_event_text(it->second)};
  }
  return {std::string(raw), parse_event_text(raw)};
}

TraceEvent to_trace_event(const Lts& oracle, const MappedEvent& mapped) {
  if (!mapped.event) return TraceEvent::unmapped(mapped.raw);
  return {mapped.raw, oracle.event_table().find(*mapped.event)};
}

TraceReader::TraceReader(const std::filesystem::path& path, const Mapping& mapping)
    : in_(path), mapping_(mapping), path_(path) {
  if (!in_) throw IoError("cannot read trace file " + path.string());
}

std::optional<MappedEvent> TraceReader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto last = line.find_last_not_of(" \t\r");
    return map_event(mapping_, std::string_view(line).substr(first, last - first + 1));
  }
  if (in_.bad()) throw IoError("error reading " + path_.string());
  return std::nullopt;
}

std::vector<MappedEvent> read_trace(const std::filesystem::path& path, const Mapping& mapping) {
  TraceReader reader(path, mapping);
  std::vector<MappedEvent> out;
  while (auto e = reader.next()) out.push_back(std::move(*e));
  return out;
}

}  // namespace cspmon
