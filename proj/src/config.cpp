#include "xsbridge/config.hpp"

#include <sstream>

#include "xsbridge/errors.hpp"

namespace xsbridge {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  fail(ErrorCode::ConfigError, key + ": bad value '" + value + "'");
}

long parse_int(const std::string& key, const std::string& value, long min, long max) {
  long v = 0;
  try {
    size_t used = 0;
    v = std::stol(value, &used);
    if (used != value.size()) bad_value(key, value);
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    bad_value(key, value);
  }
  if (v < min || v > max)
    fail(ErrorCode::ConfigError, key + ": " + value + " outside " + std::to_string(min) + ".." +
                                     std::to_string(max));
  return v;
}

double parse_double(const std::string& key, const std::string& value, double min) {
  double v = 0;
  try {
    size_t used = 0;
    v = std::stod(value, &used);
    if (used != value.size()) bad_value(key, value);
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    bad_value(key, value);
  }
  if (!(v >= min)) fail(ErrorCode::ConfigError, key + ": must be >= " + std::to_string(min));
  return v;
}

std::optional<std::string> parse_path(const std::string& value) {
  if (value == "none" || value.empty()) return std::nullopt;
  return value;
}

void apply(BridgeConfig& config, const std::string& key, const std::string& value) {
  try {
    if (key == "listen") {
      config.listen = parse_endpoint(value);
    } else if (key == "character") {
      if (value.empty())
        config.character_filter.reset();
      else
        config.character_filter = static_cast<uint8_t>(parse_int(key, value, 0, 255));
    } else if (key == "sinks.jsonl") {
      config.jsonl_path = parse_path(value);
    } else if (key == "sinks.log") {
      config.log_path = parse_path(value);
    } else if (key == "sinks.republish") {
      if (auto path = parse_path(value)) {
        Endpoint e = parse_endpoint(*path);
        if (e.transport != Transport::Udp)
          fail(ErrorCode::ConfigError, "sinks.republish: only udp:// targets are supported");
        config.republish = e;
      } else {
        config.republish.reset();
      }
    } else if (key == "urdf.path") {
      config.urdf_path = parse_path(value);
    } else if (key == "urdf.height") {
      config.urdf_height_m = parse_double(key, value, 0.0);
    } else if (key == "axis_remap") {
      config.axis_remap = parse_axis_remap(value);
    } else if (key == "queue.depth") {
      config.queue_depth = static_cast<size_t>(parse_int(key, value, 1, 1 << 20));
    } else if (key == "reconnect.attempts") {
      config.reconnect.attempts = static_cast<uint32_t>(parse_int(key, value, 0, 1 << 20));
    } else if (key == "reconnect.delay_ms") {
      config.reconnect.delay_ms = static_cast<uint32_t>(parse_int(key, value, 0, 1 << 20));
    } else if (key == "run.max_frames") {
      config.max_frames = static_cast<uint64_t>(parse_int(key, value, 0, 1L << 40));
    } else if (key == "run.max_seconds") {
      config.max_seconds = parse_double(key, value, 0.0);
    } else {
      fail(ErrorCode::ConfigError, "unknown key '" + key + "'");
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    fail(ErrorCode::ConfigError, key + ": " + e.what());
  }
}

}  // namespace

BridgeConfig parse_config(const std::string& file_text,
                          const std::map<std::string, std::string>& overrides) {
  BridgeConfig config;

  std::istringstream stream(file_text);
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#' || stripped[0] == ';') continue;
    size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      fail(ErrorCode::ConfigError, "line " + std::to_string(line_no) + ": expected key = value");
    apply(config, trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
  }

  for (const auto& [key, value] : overrides) apply(config, key, value);

  if (!config.jsonl_path && !config.log_path && !config.republish)
    fail(ErrorCode::ConfigError, "sinks: at least one sink must be configured");

  // Output paths must not collide.
  std::vector<std::string> paths;
  if (config.jsonl_path && *config.jsonl_path != "-") paths.push_back(*config.jsonl_path);
  if (config.log_path) paths.push_back(*config.log_path);
  if (config.urdf_path) paths.push_back(*config.urdf_path);
  for (size_t i = 0; i < paths.size(); ++i)
    for (size_t j = i + 1; j < paths.size(); ++j)
      if (paths[i] == paths[j])
        fail(ErrorCode::ConfigError, "paths: '" + paths[i] + "' used by more than one output");

  return config;
}

}  // namespace xsbridge
