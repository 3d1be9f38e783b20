#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cspmon/lts.hpp"
#include "cspmon/monitor.hpp"

namespace cspmon {

enum class Protocol : std::uint8_t { Tcp, WebSocket };

struct TraceFileInput {
  std::filesystem::path path;
};

struct ListenInput {
  Protocol protocol = Protocol::Tcp;
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;  // 0 picks a free port
};

/// Run settings. Relative paths are resolved against the directory of the
/// config file.
struct Config {
  std::filesystem::path spec_path;
  std::string entry_process;  // `NAME` or `NAME(arg, ...)`
  Mode mode = Mode::Strict;
  /// SUA-visible events; absent means the whole alphabet. Entries are event
  /// texts or `chan.*` for every instantiation of a channel.
  std::optional<std::vector<std::string>> observable_events;
  std::optional<std::filesystem::path> mapping_path;
  std::variant<TraceFileInput, ListenInput> input;
  SynthesisLimits limits;
  std::optional<std::filesystem::path> report_path;
};

/// Throws ConfigError naming the offending key.
Config load_config(const std::filesystem::path& path);
/// `base_dir` anchors relative paths.
Config parse_config(const std::string& yaml_text, const std::filesystem::path& base_dir);

}  // namespace cspmon
