#include <doctest.h>

#include "xsbridge/config.hpp"
#include "xsbridge/errors.hpp"

using namespace xsbridge;

namespace {

ErrorCode config_failure(const std::string& text,
                         const std::map<std::string, std::string>& overrides = {}) {
  try {
    parse_config(text, overrides);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected ConfigError");
  return ErrorCode::ConfigError;
}

}  // namespace

TEST_CASE("empty config yields the documented defaults") {
  BridgeConfig config = parse_config("");
  CHECK(config.listen == Endpoint{Transport::Udp, "0.0.0.0", 9763});
  CHECK(config.jsonl_path == "-");
  CHECK(!config.log_path.has_value());
  CHECK(!config.republish.has_value());
  CHECK(!config.character_filter.has_value());
  CHECK(config.queue_depth == 256);
  CHECK(config.axis_remap.is_identity());
  CHECK(config.reconnect.attempts == 3);
  CHECK(config.reconnect.delay_ms == 500);
}

TEST_CASE("file values parse; comments and blank lines are skipped") {
  std::string text = R"(
# motion stream input
listen = udp://192.168.1.50:9763
character = 2

; sinks
sinks.jsonl = /tmp/frames.jsonl
sinks.log = /tmp/raw.xlog
sinks.republish = udp://10.0.0.9:9764
urdf.path = /tmp/human.urdf
urdf.height = 1.83
queue.depth = 64
run.max_frames = 500
)";
  BridgeConfig config = parse_config(text);
  CHECK(config.listen.host == "192.168.1.50");
  CHECK(config.character_filter == uint8_t{2});
  CHECK(config.jsonl_path == "/tmp/frames.jsonl");
  CHECK(config.log_path == "/tmp/raw.xlog");
  REQUIRE(config.republish.has_value());
  CHECK(config.republish->port == 9764);
  CHECK(config.urdf_height_m == 1.83);
  CHECK(config.queue_depth == 64);
  CHECK(config.max_frames == 500);
}

TEST_CASE("flag overrides beat file values") {
  std::string text = "listen = udp://10.1.1.1:9763\n";
  BridgeConfig config = parse_config(text, {{"listen", "tcp://host:7000"}});
  CHECK(config.listen == Endpoint{Transport::Tcp, "host", 7000});
}

TEST_CASE("bad values name the offending key") {
  SUBCASE("negative queue depth") {
    try {
      parse_config("queue.depth = -5\n");
      FAIL("expected ConfigError");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ConfigError);
      CHECK(std::string(e.what()).find("queue.depth") != std::string::npos);
    }
  }
  SUBCASE("unknown key") {
    try {
      parse_config("queu.depth = 4\n");
      FAIL("expected ConfigError");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("queu.depth") != std::string::npos);
    }
  }
  SUBCASE("line without an equals sign") { CHECK(config_failure("listen\n") == ErrorCode::ConfigError); }
  SUBCASE("character outside a byte") {
    CHECK(config_failure("character = 300\n") == ErrorCode::ConfigError);
  }
  SUBCASE("tcp republish is unsupported") {
    CHECK(config_failure("sinks.republish = tcp://h:1\n") == ErrorCode::ConfigError);
  }
}

TEST_CASE("endpoint strings validate scheme, host, and port range") {
  CHECK(parse_endpoint("udp://0.0.0.0:9763") == Endpoint{Transport::Udp, "0.0.0.0", 9763});
  CHECK(parse_endpoint("tcp://example.org:1") == Endpoint{Transport::Tcp, "example.org", 1});
  CHECK_THROWS_AS(parse_endpoint("http://x:1"), Error);
  CHECK_THROWS_AS(parse_endpoint("udp://x"), Error);
  CHECK_THROWS_AS(parse_endpoint("udp://x:0"), Error);
  CHECK_THROWS_AS(parse_endpoint("udp://x:65536"), Error);
  CHECK_THROWS_AS(parse_endpoint("udp://:123"), Error);
}

TEST_CASE("at least one sink must remain configured") {
  CHECK(config_failure("sinks.jsonl = none\n") == ErrorCode::ConfigError);
  CHECK_NOTHROW(parse_config("sinks.jsonl = none\nsinks.log = /tmp/a.xlog\n"));
}

TEST_CASE("output paths must be distinct") {
  CHECK(config_failure("sinks.jsonl = /tmp/x\nsinks.log = /tmp/x\n") == ErrorCode::ConfigError);
  CHECK(config_failure("sinks.log = /tmp/y\nurdf.path = /tmp/y\n") == ErrorCode::ConfigError);
}

TEST_CASE("axis remap is parsed and validated") {
  BridgeConfig config = parse_config("axis_remap = y,-x,z\n");
  CHECK(!config.axis_remap.is_identity());
  CHECK(config_failure("axis_remap = x,y,-z\n") == ErrorCode::ConfigError);
}
