#include <doctest.h>

#include <chrono>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "helpers.hpp"
#include "xsbridge/bridge.hpp"
#include "xsbridge/logfile.hpp"
#include "xsbridge/synth.hpp"

using namespace xsbridge;
using namespace xsbridge::testing;
using namespace std::chrono_literals;

namespace {

std::string temp_path(const std::string& name) {
  return "/tmp/xsbridge_bridge_" + name + "_" + std::to_string(::getpid());
}

uint16_t free_udp_port() {
  UdpSocket probe = UdpSocket::bind("127.0.0.1", 0);
  return probe.local_port();
}

}  // namespace

TEST_CASE("bridge pipeline: jsonl, raw log, and republish sinks see consistent data") {
  UdpSocket capture = UdpSocket::bind("127.0.0.1", 0);
  uint16_t capture_port = capture.local_port();
  uint16_t listen_port = free_udp_port();

  std::string jsonl_path = temp_path("frames.jsonl");
  std::string log_path = temp_path("raw.xlog");

  BridgeConfig config;
  config.listen = {Transport::Udp, "127.0.0.1", listen_port};
  config.jsonl_path = jsonl_path;
  config.log_path = log_path;
  config.republish = Endpoint{Transport::Udp, "127.0.0.1", capture_port};
  config.max_frames = 5;
  config.max_seconds = 10.0;

  BridgeReport report;
  int exit_code = -1;
  std::thread bridge_thread([&] { exit_code = run_bridge(config, nullptr, &report); });
  std::this_thread::sleep_for(300ms);

  // Hand-built stream so the exact bytes on the wire are known.
  MotionScript script = MotionScript::sinusoidal({JointId::RightElbow, DofAxis::Z, 0.5, 0.5},
                                                 default_scale(1.70));
  std::vector<ByteBuffer> sent;
  UdpSocket sender = UdpSocket::dial("127.0.0.1", listen_port);
  for (uint32_t i = 0; i < 5; ++i) {
    MotionFrame frame = synth_frame(script, i / 60.0, i, i * 1000 / 60);
    for (const Datagram& d : frame_to_datagrams(frame, kDefaultMaxPayloadBytes)) {
      ByteBuffer bytes = serialize_datagram(d);
      sender.send(bytes);
      sent.push_back(std::move(bytes));
    }
    std::this_thread::sleep_for(5ms);
  }

  // Republished datagrams must be byte-identical to what was sent.
  std::vector<ByteBuffer> relayed;
  while (relayed.size() < sent.size()) {
    auto packet = capture.receive(2000);
    if (!packet) break;
    relayed.push_back(std::move(*packet));
  }

  bridge_thread.join();
  CHECK(exit_code == kExitOk);
  CHECK(report.frames_sunk == 5);
  CHECK(report.stream.frames_dropped == 0);

  REQUIRE(relayed.size() == sent.size());
  CHECK(relayed == sent);

  // The raw log captured the same byte sequence.
  std::vector<LogRecord> records = read_log(log_path);
  REQUIRE(records.size() == sent.size());
  for (size_t i = 0; i < sent.size(); ++i) CHECK(records[i].bytes == sent[i]);

  // JSONL: five records with the full 23/66/23 dimensions.
  std::ifstream in(jsonl_path);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    auto record = nlohmann::json::parse(line);
    CHECK(record["link_states"].size() == 23);
    CHECK(record["joint_state"]["name"].size() == 66);
    CHECK(record["joint_state"]["position"].size() == 66);
    CHECK(record["transforms"].size() == 23);
    CHECK(record["sample"] == lines);
    ++lines;
  }
  CHECK(lines == 5);

  std::remove(jsonl_path.c_str());
  std::remove(log_path.c_str());
}

TEST_CASE("urdf emission on startup produces a valid model file") {
  std::string urdf_path = temp_path("model.urdf");
  BridgeConfig config;
  config.listen = {Transport::Udp, "127.0.0.1", free_udp_port()};
  config.urdf_path = urdf_path;
  config.max_frames = 1;
  config.max_seconds = 0.4;  // no traffic; stop quickly

  int exit_code = run_bridge(config);
  CHECK(exit_code == kExitOk);

  std::ifstream in(urdf_path);
  REQUIRE(in.good());
  std::string xml((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(xml.find("<robot name=\"human\">") != std::string::npos);
  std::remove(urdf_path.c_str());
}

TEST_CASE("unwritable jsonl sink exits with the sink code") {
  BridgeConfig config;
  config.listen = {Transport::Udp, "127.0.0.1", free_udp_port()};
  config.jsonl_path = "/nonexistent_dir_xsbridge/frames.jsonl";
  CHECK(run_bridge(config) == kExitSink);
}

TEST_CASE("unbindable listen address exits with the network code") {
  BridgeConfig config;
  config.listen = {Transport::Udp, "203.0.113.7", 9};
  config.max_seconds = 5.0;
  CHECK(run_bridge(config) == kExitNetwork);
}
