#pragma once

#include <map>
#include <optional>
#include <string>

#include "xsbridge/mapper.hpp"
#include "xsbridge/receiver.hpp"

namespace xsbridge {

/// Runtime configuration for the bridge pipeline. File format is flat
/// "key = value" lines with dotted sections; '#' starts a comment. Flags
/// override file values; every key below has a flag twin in the CLI.
///
///   listen            = udp://0.0.0.0:9763
///   character         = 0            # empty: lock onto the first one seen
///   sinks.jsonl       = -            # "-" stdout, "none" disables
///   sinks.log         = none         # datagram capture file
///   sinks.republish   = none         # udp://host:port raw relay
///   urdf.path         = none         # write the model here on startup
///   urdf.height       = 1.70
///   axis_remap        = identity     # or e.g. "y,-x,z"
///   queue.depth       = 256
///   reconnect.attempts = 3
///   reconnect.delay_ms = 500
///   run.max_frames    = 0            # stop after this many frames (0 = run on)
///   run.max_seconds   = 0
struct BridgeConfig {
  Endpoint listen{Transport::Udp, "0.0.0.0", kDefaultPort};
  std::optional<uint8_t> character_filter;
  std::optional<std::string> jsonl_path = "-";
  std::optional<std::string> log_path;
  std::optional<Endpoint> republish;
  std::optional<std::string> urdf_path;
  double urdf_height_m = 1.70;
  AxisRemap axis_remap;
  size_t queue_depth = 256;
  ReconnectPolicy reconnect;
  uint64_t max_frames = 0;
  double max_seconds = 0.0;

  bool operator==(const BridgeConfig&) const = default;
};

/// Parses file text (may be empty) and applies overrides on top.
/// Throws ConfigError naming the offending key.
BridgeConfig parse_config(const std::string& file_text,
                          const std::map<std::string, std::string>& overrides = {});

/// Exit codes reported by the bridge executable.
constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNetwork = 2;
constexpr int kExitSink = 3;

}  // namespace xsbridge
