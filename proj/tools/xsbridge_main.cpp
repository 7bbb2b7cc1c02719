#include <atomic>
#include <cctype>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "xsbridge/bridge.hpp"
#include "xsbridge/errors.hpp"
#include "xsbridge/logfile.hpp"
#include "xsbridge/streamer.hpp"
#include "xsbridge/urdf.hpp"

namespace {

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop.store(true); }

void install_signal_handlers() {
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
}

int exit_code_for(xsbridge::ErrorCode code) {
  using xsbridge::ErrorCode;
  switch (code) {
    case ErrorCode::BindFailed:
    case ErrorCode::ConnectionLost:
    case ErrorCode::SendFailed:
      return xsbridge::kExitNetwork;
    case ErrorCode::IoError:
    case ErrorCode::BadLogMagic:
      return xsbridge::kExitSink;
    default:
      return xsbridge::kExitConfig;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) xsbridge::fail(xsbridge::ErrorCode::IoError, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

xsbridge::ByteBuffer parse_hex(const std::string& hex) {
  xsbridge::ByteBuffer out;
  int hi = -1;
  for (char c : hex) {
    int v;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
    else if (std::isspace(static_cast<unsigned char>(c))) continue;
    else xsbridge::fail(xsbridge::ErrorCode::ConfigError, "not a hex digit: " + std::string(1, c));
    if (hi < 0) hi = v;
    else {
      out.push_back(static_cast<uint8_t>(hi << 4 | v));
      hi = -1;
    }
  }
  if (hi >= 0) xsbridge::fail(xsbridge::ErrorCode::ConfigError, "odd number of hex digits");
  return out;
}

struct BridgeRunArgs {
  std::string config_path;
  std::map<std::string, std::string> overrides;
};

int cmd_bridge_run(const BridgeRunArgs& args) {
  std::string file_text;
  std::string path = args.config_path;
  if (path.empty()) {
    if (const char* env = std::getenv("XSBRIDGE_CONFIG")) path = env;
  }
  if (!path.empty()) file_text = read_file(path);
  xsbridge::BridgeConfig config = xsbridge::parse_config(file_text, args.overrides);
  return xsbridge::run_bridge(config, &g_stop);
}

}  // namespace

int main(int argc, char** argv) {
  install_signal_handlers();

  CLI::App app{"Motion-capture stream bridge: datagram parsing, frame assembly, "
               "middleware message mapping, URDF generation, and a synthetic test harness"};
  app.require_subcommand(1);

  // bridge run / bridge urdf
  auto* bridge = app.add_subcommand("bridge", "Receive, map, and sink motion frames");
  bridge->require_subcommand(1);

  BridgeRunArgs run_args;
  std::map<std::string, std::string> flag_keys;  // flag value -> config key
  auto* run = bridge->add_subcommand("run", "Run the streaming pipeline");
  run->add_option("--config", run_args.config_path,
                  "Config file (default: $XSBRIDGE_CONFIG when set)");
  static const std::vector<std::pair<const char*, const char*>> kRunFlags = {
      {"--listen", "listen"},           {"--character", "character"},
      {"--jsonl", "sinks.jsonl"},       {"--log", "sinks.log"},
      {"--republish", "sinks.republish"}, {"--urdf", "urdf.path"},
      {"--height", "urdf.height"},      {"--axis-remap", "axis_remap"},
      {"--queue", "queue.depth"},       {"--frames", "run.max_frames"},
      {"--duration", "run.max_seconds"},
  };
  auto& overrides = run_args.overrides;
  for (const auto& [flag, key] : kRunFlags) {
    run->add_option_function<std::string>(
        flag, [&overrides, key = std::string(key)](const std::string& v) { overrides[key] = v; },
        "Overrides config key " + std::string(key));
  }

  struct {
    std::string out;
    double height = xsbridge::kDefaultHeightM;
    std::string name = "human";
    double total_mass = 70.0;
    bool no_visuals = false;
    bool physics_mass = false;
  } urdf_args;
  auto* urdf_cmd = bridge->add_subcommand("urdf", "Generate the URDF human model and exit");
  urdf_cmd->add_option("--out", urdf_args.out, "Output path ('-' for stdout)")->required();
  urdf_cmd->add_option("--height", urdf_args.height, "Subject height in meters");
  urdf_cmd->add_option("--name", urdf_args.name, "Robot name attribute");
  urdf_cmd->add_option("--total-mass", urdf_args.total_mass, "Body mass in kg");
  urdf_cmd->add_flag("--no-visuals", urdf_args.no_visuals, "Skip visual geometry");
  urdf_cmd->add_flag("--physics-mass", urdf_args.physics_mass,
                     "Give virtual links a tiny inertial for physics engines");

  // harness stream / record / replay
  auto* harness = app.add_subcommand("harness", "Synthetic streamer, recorder, replayer");
  harness->require_subcommand(1);

  struct {
    std::string to = "udp://127.0.0.1:9763";
    double rate = 60.0;
    double duration = 2.0;
    std::string script = "sine";
    std::string joint = "jRightElbow";
    std::string axis = "z";
    double amplitude = 0.5;
    double frequency = 0.5;
    double height = xsbridge::kDefaultHeightM;
    uint32_t character = 0;
    size_t max_payload = xsbridge::kDefaultMaxPayloadBytes;
    uint32_t start_sample = 0;
    bool no_metadata = false;
  } stream_args;
  auto* stream_cmd = harness->add_subcommand("stream", "Emit a synthetic motion stream");
  stream_cmd->add_option("--to", stream_args.to, "Destination endpoint (udp://h:p or tcp://h:p)");
  stream_cmd->add_option("--rate", stream_args.rate, "Frame rate in Hz (1..240)");
  stream_cmd->add_option("--duration", stream_args.duration, "Stream length in seconds");
  stream_cmd->add_option("--script", stream_args.script, "npose or sine");
  stream_cmd->add_option("--joint", stream_args.joint, "Scripted joint, e.g. jRightElbow");
  stream_cmd->add_option("--axis", stream_args.axis, "Scripted axis: z, x, or y");
  stream_cmd->add_option("--amplitude", stream_args.amplitude, "Amplitude in radians");
  stream_cmd->add_option("--frequency", stream_args.frequency, "Frequency in Hz");
  stream_cmd->add_option("--height", stream_args.height, "Subject height in meters");
  stream_cmd->add_option("--character", stream_args.character, "Character id (0..255)");
  stream_cmd->add_option("--max-payload", stream_args.max_payload, "Max payload bytes per datagram");
  stream_cmd->add_option("--start-sample", stream_args.start_sample, "First sample counter");
  stream_cmd->add_flag("--no-metadata", stream_args.no_metadata,
                       "Skip the one-shot meta/scale datagrams");

  struct {
    std::string listen = "udp://0.0.0.0:9763";
    std::string out;
    uint64_t count = 0;
    double duration = 0.0;
  } record_args;
  auto* record_cmd = harness->add_subcommand("record", "Capture datagrams to a log file");
  record_cmd->add_option("--listen", record_args.listen, "Endpoint to receive on");
  record_cmd->add_option("--out", record_args.out, "Log file path")->required();
  record_cmd->add_option("--count", record_args.count, "Stop after this many datagrams");
  record_cmd->add_option("--duration", record_args.duration, "Stop after this many seconds");

  struct {
    std::string file;
    std::string to = "udp://127.0.0.1:9763";
    double rate_scale = 1.0;
  } replay_args;
  auto* replay_cmd = harness->add_subcommand("replay", "Re-emit a recorded log");
  replay_cmd->add_option("--file", replay_args.file, "Log file path")->required();
  replay_cmd->add_option("--to", replay_args.to, "Destination endpoint");
  replay_cmd->add_option("--rate-scale", replay_args.rate_scale,
                         "Time compression factor (2.0 = twice as fast)");

  // protocol dump
  struct {
    std::string hex;
    std::string file;
  } dump_args;
  auto* protocol = app.add_subcommand("protocol", "Wire format utilities");
  protocol->require_subcommand(1);
  auto* dump_cmd = protocol->add_subcommand("dump", "Decode datagrams to readable text");
  dump_cmd->add_option("--hex", dump_args.hex, "Datagram bytes as hex");
  dump_cmd->add_option("--file", dump_args.file, "Datagram or capture file (auto-detected)");
  dump_cmd->require_option(1);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_bridge_run(run_args);

    if (urdf_cmd->parsed()) {
      xsbridge::UrdfOptions options;
      options.robot_name = urdf_args.name;
      options.total_mass_kg = urdf_args.total_mass;
      options.with_visuals = !urdf_args.no_visuals;
      options.physics_mass = urdf_args.physics_mass;
      xsbridge::UrdfDocument doc = xsbridge::generate_urdf(
          xsbridge::default_topology(), xsbridge::default_scale(urdf_args.height), options);
      for (const auto& warning : doc.warnings) std::fprintf(stderr, "warning: %s\n", warning.c_str());
      std::string xml = xsbridge::render_xml(doc);
      if (urdf_args.out == "-") {
        std::fputs(xml.c_str(), stdout);
      } else {
        std::FILE* f = std::fopen(urdf_args.out.c_str(), "wb");
        if (!f) xsbridge::fail(xsbridge::ErrorCode::IoError, "cannot open " + urdf_args.out);
        size_t written = std::fwrite(xml.data(), 1, xml.size(), f);
        std::fclose(f);
        if (written != xml.size())
          xsbridge::fail(xsbridge::ErrorCode::IoError, "short write to " + urdf_args.out);
        std::fprintf(stderr, "wrote %s: %d segment links, %d virtual links, %d revolute joints\n",
                     urdf_args.out.c_str(), doc.segment_link_count(), doc.virtual_link_count(),
                     doc.revolute_joint_count());
      }
      return xsbridge::kExitOk;
    }

    if (stream_cmd->parsed()) {
      xsbridge::ScaleData scale = xsbridge::default_scale(stream_args.height);
      xsbridge::MotionScript script;
      if (stream_args.script == "npose") {
        script = xsbridge::MotionScript::npose(scale, static_cast<uint8_t>(stream_args.character));
      } else if (stream_args.script == "sine") {
        auto joint = xsbridge::joint_from_name(stream_args.joint);
        if (!joint)
          xsbridge::fail(xsbridge::ErrorCode::ConfigError, "unknown joint " + stream_args.joint);
        xsbridge::DofAxis axis;
        if (stream_args.axis == "z") axis = xsbridge::DofAxis::Z;
        else if (stream_args.axis == "x") axis = xsbridge::DofAxis::X;
        else if (stream_args.axis == "y") axis = xsbridge::DofAxis::Y;
        else xsbridge::fail(xsbridge::ErrorCode::ConfigError, "axis must be z, x, or y");
        script = xsbridge::MotionScript::sinusoidal(
            {*joint, axis, stream_args.amplitude, stream_args.frequency}, scale,
            static_cast<uint8_t>(stream_args.character));
      } else {
        xsbridge::fail(xsbridge::ErrorCode::ConfigError, "script must be npose or sine");
      }
      xsbridge::StreamerOptions options;
      options.max_payload_bytes = stream_args.max_payload;
      options.send_metadata = !stream_args.no_metadata;
      options.first_sample_counter = stream_args.start_sample;
      options.stop = &g_stop;
      xsbridge::EmissionReport report = xsbridge::stream_synthetic(
          xsbridge::parse_endpoint(stream_args.to), stream_args.rate, script, stream_args.duration,
          options);
      std::fprintf(stderr,
                   "stream: %llu frames, %llu datagrams, %llu bytes in %.3f s "
                   "(max jitter %.3f ms, mean %.3f ms)\n",
                   static_cast<unsigned long long>(report.frames_sent),
                   static_cast<unsigned long long>(report.datagrams_sent),
                   static_cast<unsigned long long>(report.bytes_sent), report.duration_s,
                   report.max_jitter_ms, report.mean_jitter_ms);
      return xsbridge::kExitOk;
    }

    if (record_cmd->parsed()) {
      xsbridge::RecordOptions options;
      options.max_datagrams = record_args.count;
      options.max_duration_s = record_args.duration;
      options.stop = &g_stop;
      xsbridge::RecordReport report = xsbridge::record_stream(
          xsbridge::parse_endpoint(record_args.listen), record_args.out, options);
      std::fprintf(stderr, "record: %llu datagrams, %llu bytes -> %s\n",
                   static_cast<unsigned long long>(report.datagrams_written),
                   static_cast<unsigned long long>(report.bytes_written), record_args.out.c_str());
      return xsbridge::kExitOk;
    }

    if (replay_cmd->parsed()) {
      xsbridge::ReplayReport report =
          xsbridge::replay_log(replay_args.file, xsbridge::parse_endpoint(replay_args.to),
                               replay_args.rate_scale, &g_stop);
      std::fprintf(stderr, "replay: %llu datagrams, %llu bytes in %.3f s\n",
                   static_cast<unsigned long long>(report.datagrams_sent),
                   static_cast<unsigned long long>(report.bytes_sent), report.duration_s);
      return xsbridge::kExitOk;
    }

    if (dump_cmd->parsed()) {
      xsbridge::ByteBuffer bytes;
      if (!dump_args.hex.empty()) {
        bytes = parse_hex(dump_args.hex);
      } else {
        std::string content = read_file(dump_args.file);
        bytes.assign(content.begin(), content.end());
      }
      if (bytes.size() >= 8 && std::memcmp(bytes.data(), xsbridge::kLogMagic, 8) == 0) {
        for (const auto& record : xsbridge::read_log(dump_args.file)) {
          std::printf("@%llu us\n", static_cast<unsigned long long>(record.recv_timestamp_us));
          std::fputs(xsbridge::describe_datagram(xsbridge::parse_datagram(record.bytes)).c_str(),
                     stdout);
        }
      } else {
        // One or more back-to-back datagrams.
        size_t pos = 0;
        while (pos < bytes.size()) {
          auto header = xsbridge::parse_header(std::span(bytes).subspan(pos));
          size_t total = xsbridge::kHeaderSize + header.payload_size_bytes;
          auto one = std::span(bytes).subspan(pos, std::min(total, bytes.size() - pos));
          std::fputs(xsbridge::describe_datagram(xsbridge::parse_datagram(one)).c_str(), stdout);
          pos += total;
        }
      }
      return xsbridge::kExitOk;
    }
  } catch (const xsbridge::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return xsbridge::kExitConfig;
  }
  return xsbridge::kExitConfig;
}
