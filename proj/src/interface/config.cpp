#include "cspmon/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "cspmon/error.hpp"

namespace cspmon {

namespace {

void reject_unknown(const YAML::Node& map, const std::string& where,
                    const std::set<std::string>& allowed) {
  for (const auto& kv : map) {
    auto key = kv.first.as<std::string>();
    if (!allowed.contains(key)) {
      throw ConfigError(where.empty() ? key : where + "." + key, "unknown key");
    }
  }
}

std::string scalar(const YAML::Node& node, const std::string& key) {
  if (!node.IsScalar()) throw ConfigError(key, "expected a string");
  return node.as<std::string>();
}

std::uint64_t positive(const YAML::Node& node, const std::string& key) {
  std::string text = scalar(node, key);
  try {
    std::size_t used = 0;
    long long v = std::stoll(text, &used);
    if (used == text.size() && v > 0) return static_cast<std::uint64_t>(v);
  } catch (const std::exception&) {
  }
  throw ConfigError(key, "expected a positive integer, got '" + text + "'");
}

std::filesystem::path anchored(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

ListenInput parse_listen(const YAML::Node& node) {
  if (!node.IsMap()) throw ConfigError("input.listen", "expected a mapping");
  reject_unknown(node, "input.listen", {"protocol", "host", "port"});
  ListenInput in;
  if (node["protocol"]) {
    std::string p = scalar(node["protocol"], "input.listen.protocol");
    if (p == "tcp") {
      in.protocol = Protocol::Tcp;
    } else if (p == "websocket") {
      in.protocol = Protocol::WebSocket;
    } else {
      throw ConfigError("input.listen.protocol", "expected tcp or websocket, got '" + p + "'");
    }
  }
  if (node["host"]) in.host = scalar(node["host"], "input.listen.host");
  if (node["port"]) {
    std::string text = scalar(node["port"], "input.listen.port");
    try {
      std::size_t used = 0;
      int v = std::stoi(text, &used);
      if (used != text.size() || v < 0 || v > 65535) throw std::out_of_range("port");
      in.port = static_cast<std::uint16_t>(v);
    } catch (const std::exception&) {
      throw ConfigError("input.listen.port", "expected a port number, got '" + text + "'");
    }
  }
  return in;
}

}  // namespace

Config parse_config(const std::string& yaml_text, const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError("", std::string("invalid YAML: ") + e.what());
  }
  if (!root.IsMap()) throw ConfigError("", "expected a mapping at the top level");
  reject_unknown(root, "",
                 {"spec_path", "entry_process", "mode", "observable_events", "mapping_path",
                  "input", "limits", "report_path"});

  Config cfg;
  if (!root["spec_path"]) throw ConfigError("spec_path", "missing");
  cfg.spec_path = anchored(base_dir, scalar(root["spec_path"], "spec_path"));
  if (!std::filesystem::is_regular_file(cfg.spec_path)) {
    throw ConfigError("spec_path", "file not found: " + cfg.spec_path.string());
  }
  if (!root["entry_process"]) throw ConfigError("entry_process", "missing");
  cfg.entry_process = scalar(root["entry_process"], "entry_process");

  if (root["mode"]) {
    std::string m = scalar(root["mode"], "mode");
    auto mode = parse_mode(m);
    if (!mode) throw ConfigError("mode", "expected strict or permissive, got '" + m + "'");
    cfg.mode = *mode;
  }

  if (root["observable_events"]) {
    const YAML::Node& obs = root["observable_events"];
    if (!obs.IsSequence()) throw ConfigError("observable_events", "expected a list");
    std::vector<std::string> events;
    for (std::size_t i = 0; i < obs.size(); ++i) {
      events.push_back(scalar(obs[i], "observable_events[" + std::to_string(i) + "]"));
    }
    cfg.observable_events = std::move(events);
  }

  if (root["mapping_path"]) {
    cfg.mapping_path = anchored(base_dir, scalar(root["mapping_path"], "mapping_path"));
  }
  if (root["report_path"]) {
    cfg.report_path = anchored(base_dir, scalar(root["report_path"], "report_path"));
  }

  if (!root["input"]) throw ConfigError("input", "missing");
  const YAML::Node& input = root["input"];
  if (!input.IsMap()) throw ConfigError("input", "expected a mapping");
  reject_unknown(input, "input", {"trace_file", "listen"});
  const bool has_file = static_cast<bool>(input["trace_file"]);
  const bool has_listen = static_cast<bool>(input["listen"]);
  if (has_file == has_listen) {
    throw ConfigError("input", "exactly one of trace_file or listen is required");
  }
  if (has_file) {
    cfg.input = TraceFileInput{anchored(base_dir, scalar(input["trace_file"], "input.trace_file"))};
  } else {
    cfg.input = parse_listen(input["listen"]);
  }

  if (root["limits"]) {
    const YAML::Node& lim = root["limits"];
    if (!lim.IsMap()) throw ConfigError("limits", "expected a mapping");
    reject_unknown(lim, "limits", {"max_states", "max_transitions"});
    if (lim["max_states"]) cfg.limits.max_states = positive(lim["max_states"], "limits.max_states");
    if (lim["max_transitions"]) {
      cfg.limits.max_transitions = positive(lim["max_transitions"], "limits.max_transitions");
    }
  }
  return cfg;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

}  // namespace cspmon
