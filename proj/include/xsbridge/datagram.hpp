#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "xsbridge/wire.hpp"

namespace xsbridge {

/// Payload kinds with their two-digit wire codes. Codes outside this set are
/// carried through as raw bytes (see UnknownPayload) so streams with protocol
/// extensions keep flowing.
enum class PayloadKind : uint8_t {
  PoseEuler = 1,
  PoseQuaternion = 2,
  VirtualMarkers = 3,
  MetaText = 12,
  ScaleInfo = 13,
  JointAngles = 20,
  LinearKinematics = 21,
  AngularKinematics = 22,
  CenterOfMass = 24,
};

std::optional<PayloadKind> known_payload_kind(uint8_t code);
const char* payload_kind_name(uint8_t code);

constexpr size_t kHeaderSize = 24;
constexpr char kMagic[5] = "MXTP";

/// 24-byte datagram header:
///
///   0..5   "MXTP" + two ASCII decimal digits (payload kind code)
///   6..9   sample counter, u32
///   10     bit 7: last datagram of this kind for the sample; bits 0..6: index
///   11     item count, u8
///   12..15 time code, milliseconds, u32
///   16     character id
///   17     body segment count
///   18     prop count
///   19     finger segment count
///   20..21 reserved (zero on emit, preserved on parse)
///   22..23 payload size in bytes, u16
///
/// All integers and floats are big-endian.
struct DatagramHeader {
  uint8_t kind_code = 0;
  uint32_t sample_counter = 0;
  uint8_t datagram_index = 0;  // 0..127
  bool is_last_datagram = true;
  uint8_t item_count = 0;
  uint32_t time_code_ms = 0;
  uint8_t character_id = 0;
  uint8_t body_segment_count = 0;
  uint8_t prop_count = 0;
  uint8_t finger_segment_count = 0;
  uint16_t reserved = 0;
  uint16_t payload_size_bytes = 0;

  std::optional<PayloadKind> kind() const { return known_payload_kind(kind_code); }

  bool operator==(const DatagramHeader&) const = default;
};

// Payload items. Wire floats are IEEE-754 binary32, big-endian; angular
// quantities travel in degrees, positions in meters.

struct PoseEulerItem {  // 28 bytes
  uint32_t segment_index = 0;
  std::array<float, 3> position_m{};
  std::array<float, 3> euler_deg_zxy{};
  bool operator==(const PoseEulerItem&) const = default;
};

struct PoseQuaternionItem {  // 32 bytes
  uint32_t segment_index = 0;
  std::array<float, 3> position_m{};
  std::array<float, 4> quaternion_wxyz{1.f, 0.f, 0.f, 0.f};
  bool operator==(const PoseQuaternionItem&) const = default;
};

struct VirtualMarkerItem {  // 16 bytes
  uint32_t point_id = 0;
  std::array<float, 3> position_m{};
  bool operator==(const VirtualMarkerItem&) const = default;
};

struct TextItem {  // 4-byte length prefix + UTF-8 bytes
  std::string text;
  bool operator==(const TextItem&) const = default;
};

struct JointAngleItem {  // 20 bytes
  // Point ids encode segment_index * 256 + anatomical point offset.
  uint32_t parent_point = 0;
  uint32_t child_point = 0;
  std::array<float, 3> rotation_deg_zxy{};
  bool operator==(const JointAngleItem&) const = default;
};

struct LinearKinematicsItem {  // 40 bytes
  uint32_t segment_index = 0;
  std::array<float, 3> position_m{};
  std::array<float, 3> velocity_mps{};
  std::array<float, 3> acceleration_mps2{};
  bool operator==(const LinearKinematicsItem&) const = default;
};

struct AngularKinematicsItem {  // 44 bytes
  uint32_t segment_index = 0;
  std::array<float, 4> quaternion_wxyz{1.f, 0.f, 0.f, 0.f};
  std::array<float, 3> angular_velocity_dps{};
  std::array<float, 3> angular_acceleration_dps2{};
  bool operator==(const AngularKinematicsItem&) const = default;
};

struct CenterOfMassItem {  // 12 bytes; exactly one per datagram
  std::array<float, 3> position_m{};
  bool operator==(const CenterOfMassItem&) const = default;
};

struct UnknownPayload {
  ByteBuffer raw;
  bool operator==(const UnknownPayload&) const = default;
};

using DatagramPayload =
    std::variant<std::vector<PoseEulerItem>, std::vector<PoseQuaternionItem>,
                 std::vector<VirtualMarkerItem>, std::vector<TextItem>, std::vector<JointAngleItem>,
                 std::vector<LinearKinematicsItem>, std::vector<AngularKinematicsItem>,
                 std::vector<CenterOfMassItem>, UnknownPayload>;

struct Datagram {
  DatagramHeader header;
  DatagramPayload payload;

  bool operator==(const Datagram&) const = default;
};

/// Fixed per-item wire size; 0 for length-delimited text kinds.
size_t payload_item_size(PayloadKind kind);

/// Decodes the 24-byte header. Throws TooShort (<24 bytes) or BadMagic.
/// An unrecognized kind code is not an error.
DatagramHeader parse_header(std::span<const uint8_t> bytes);

/// Exactly 24 bytes; parse_header(serialize_header(h)) == h.
/// Throws FieldOverflow when a field exceeds its wire width.
ByteBuffer serialize_header(const DatagramHeader& h);

/// Full decode. The buffer must contain the header plus exactly
/// payload_size_bytes of payload; item decoding must consume it exactly.
/// Throws TooShort, BadMagic, PayloadSizeMismatch, ItemCountMismatch,
/// InvalidItem (segment index outside 1..23).
Datagram parse_datagram(std::span<const uint8_t> bytes);

/// Inverse of parse_datagram. payload_size_bytes and (for known kinds)
/// item_count are recomputed from the payload, never trusted from the input.
ByteBuffer serialize_datagram(const Datagram& d);

/// Human-readable decode, one field per line; used by the CLI dump command.
std::string describe_datagram(const Datagram& d);

// Convenience builders used by the synthesizer and tests.
Datagram make_datagram(PayloadKind kind, uint32_t sample_counter, uint32_t time_code_ms,
                       uint8_t character_id, DatagramPayload payload, uint8_t datagram_index = 0,
                       bool is_last = true);

}  // namespace xsbridge
