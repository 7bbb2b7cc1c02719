#include "xsbridge/datagram.hpp"

#include <cstdio>
#include <cstring>
#include <type_traits>

namespace xsbridge {

namespace {

constexpr uint8_t code_of(PayloadKind k) { return static_cast<uint8_t>(k); }

bool segment_index_ok(uint32_t idx) { return idx >= 1 && idx <= 23; }

void check_segment_index(uint32_t idx) {
  if (!segment_index_ok(idx))
    fail(ErrorCode::InvalidItem, "segment index " + std::to_string(idx) + " outside 1..23");
}

template <typename Item>
std::vector<Item> read_items(WireReader& r, size_t count);

template <>
std::vector<PoseEulerItem> read_items(WireReader& r, size_t count) {
  std::vector<PoseEulerItem> items(count);
  for (auto& it : items) {
    it.segment_index = r.u32();
    check_segment_index(it.segment_index);
    for (auto& v : it.position_m) v = r.f32();
    for (auto& v : it.euler_deg_zxy) v = r.f32();
  }
  return items;
}

template <>
std::vector<PoseQuaternionItem> read_items(WireReader& r, size_t count) {
  std::vector<PoseQuaternionItem> items(count);
  for (auto& it : items) {
    it.segment_index = r.u32();
    check_segment_index(it.segment_index);
    for (auto& v : it.position_m) v = r.f32();
    for (auto& v : it.quaternion_wxyz) v = r.f32();
  }
  return items;
}

template <>
std::vector<VirtualMarkerItem> read_items(WireReader& r, size_t count) {
  std::vector<VirtualMarkerItem> items(count);
  for (auto& it : items) {
    it.point_id = r.u32();
    for (auto& v : it.position_m) v = r.f32();
  }
  return items;
}

template <>
std::vector<JointAngleItem> read_items(WireReader& r, size_t count) {
  std::vector<JointAngleItem> items(count);
  for (auto& it : items) {
    it.parent_point = r.u32();
    it.child_point = r.u32();
    for (auto& v : it.rotation_deg_zxy) v = r.f32();
  }
  return items;
}

template <>
std::vector<LinearKinematicsItem> read_items(WireReader& r, size_t count) {
  std::vector<LinearKinematicsItem> items(count);
  for (auto& it : items) {
    it.segment_index = r.u32();
    check_segment_index(it.segment_index);
    for (auto& v : it.position_m) v = r.f32();
    for (auto& v : it.velocity_mps) v = r.f32();
    for (auto& v : it.acceleration_mps2) v = r.f32();
  }
  return items;
}

template <>
std::vector<AngularKinematicsItem> read_items(WireReader& r, size_t count) {
  std::vector<AngularKinematicsItem> items(count);
  for (auto& it : items) {
    it.segment_index = r.u32();
    check_segment_index(it.segment_index);
    for (auto& v : it.quaternion_wxyz) v = r.f32();
    for (auto& v : it.angular_velocity_dps) v = r.f32();
    for (auto& v : it.angular_acceleration_dps2) v = r.f32();
  }
  return items;
}

template <>
std::vector<CenterOfMassItem> read_items(WireReader& r, size_t count) {
  std::vector<CenterOfMassItem> items(count);
  for (auto& it : items)
    for (auto& v : it.position_m) v = r.f32();
  return items;
}

std::vector<TextItem> read_text_items(WireReader& r, size_t count) {
  std::vector<TextItem> items(count);
  for (auto& it : items) {
    uint32_t len = r.u32();
    it.text = r.text(len);  // reader throws ItemCountMismatch on overrun
  }
  return items;
}

void write_item(WireWriter& w, const PoseEulerItem& it) {
  check_segment_index(it.segment_index);
  w.u32(it.segment_index);
  for (float v : it.position_m) w.f32(v);
  for (float v : it.euler_deg_zxy) w.f32(v);
}

void write_item(WireWriter& w, const PoseQuaternionItem& it) {
  check_segment_index(it.segment_index);
  w.u32(it.segment_index);
  for (float v : it.position_m) w.f32(v);
  for (float v : it.quaternion_wxyz) w.f32(v);
}

void write_item(WireWriter& w, const VirtualMarkerItem& it) {
  w.u32(it.point_id);
  for (float v : it.position_m) w.f32(v);
}

void write_item(WireWriter& w, const TextItem& it) {
  if (it.text.size() > 0xFFFFFFFFull) fail(ErrorCode::FieldOverflow, "text item too long");
  w.u32(static_cast<uint32_t>(it.text.size()));
  w.text(it.text);
}

void write_item(WireWriter& w, const JointAngleItem& it) {
  w.u32(it.parent_point);
  w.u32(it.child_point);
  for (float v : it.rotation_deg_zxy) w.f32(v);
}

void write_item(WireWriter& w, const LinearKinematicsItem& it) {
  check_segment_index(it.segment_index);
  w.u32(it.segment_index);
  for (float v : it.position_m) w.f32(v);
  for (float v : it.velocity_mps) w.f32(v);
  for (float v : it.acceleration_mps2) w.f32(v);
}

void write_item(WireWriter& w, const AngularKinematicsItem& it) {
  check_segment_index(it.segment_index);
  w.u32(it.segment_index);
  for (float v : it.quaternion_wxyz) w.f32(v);
  for (float v : it.angular_velocity_dps) w.f32(v);
  for (float v : it.angular_acceleration_dps2) w.f32(v);
}

void write_item(WireWriter& w, const CenterOfMassItem& it) {
  for (float v : it.position_m) w.f32(v);
}

template <typename Item>
ByteBuffer write_payload(const std::vector<Item>& items) {
  WireWriter w;
  for (const auto& it : items) write_item(w, it);
  return w.take();
}

}  // namespace

std::optional<PayloadKind> known_payload_kind(uint8_t code) {
  switch (code) {
    case code_of(PayloadKind::PoseEuler):
    case code_of(PayloadKind::PoseQuaternion):
    case code_of(PayloadKind::VirtualMarkers):
    case code_of(PayloadKind::MetaText):
    case code_of(PayloadKind::ScaleInfo):
    case code_of(PayloadKind::JointAngles):
    case code_of(PayloadKind::LinearKinematics):
    case code_of(PayloadKind::AngularKinematics):
    case code_of(PayloadKind::CenterOfMass):
      return static_cast<PayloadKind>(code);
    default:
      return std::nullopt;
  }
}

const char* payload_kind_name(uint8_t code) {
  auto kind = known_payload_kind(code);
  if (!kind) return "Unknown";
  switch (*kind) {
    case PayloadKind::PoseEuler: return "PoseEuler";
    case PayloadKind::PoseQuaternion: return "PoseQuaternion";
    case PayloadKind::VirtualMarkers: return "VirtualMarkers";
    case PayloadKind::MetaText: return "MetaText";
    case PayloadKind::ScaleInfo: return "ScaleInfo";
    case PayloadKind::JointAngles: return "JointAngles";
    case PayloadKind::LinearKinematics: return "LinearKinematics";
    case PayloadKind::AngularKinematics: return "AngularKinematics";
    case PayloadKind::CenterOfMass: return "CenterOfMass";
  }
  return "Unknown";
}

size_t payload_item_size(PayloadKind kind) {
  switch (kind) {
    case PayloadKind::PoseEuler: return 28;
    case PayloadKind::PoseQuaternion: return 32;
    case PayloadKind::VirtualMarkers: return 16;
    case PayloadKind::MetaText: return 0;
    case PayloadKind::ScaleInfo: return 0;
    case PayloadKind::JointAngles: return 20;
    case PayloadKind::LinearKinematics: return 40;
    case PayloadKind::AngularKinematics: return 44;
    case PayloadKind::CenterOfMass: return 12;
  }
  return 0;
}

DatagramHeader parse_header(std::span<const uint8_t> bytes) {
  if (bytes.size() < kHeaderSize) fail(ErrorCode::TooShort, "header needs 24 bytes");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0)
    fail(ErrorCode::BadMagic, "expected MXTP magic");
  const uint8_t d1 = bytes[4], d2 = bytes[5];
  if (d1 < '0' || d1 > '9' || d2 < '0' || d2 > '9')
    fail(ErrorCode::BadMagic, "kind code digits not decimal");

  WireReader r(bytes.subspan(6, kHeaderSize - 6));
  DatagramHeader h;
  h.kind_code = static_cast<uint8_t>((d1 - '0') * 10 + (d2 - '0'));
  h.sample_counter = r.u32();
  uint8_t counter = r.u8();
  h.datagram_index = counter & 0x7F;
  h.is_last_datagram = (counter & 0x80) != 0;
  h.item_count = r.u8();
  h.time_code_ms = r.u32();
  h.character_id = r.u8();
  h.body_segment_count = r.u8();
  h.prop_count = r.u8();
  h.finger_segment_count = r.u8();
  h.reserved = r.u16();
  h.payload_size_bytes = r.u16();
  return h;
}

ByteBuffer serialize_header(const DatagramHeader& h) {
  if (h.kind_code > 99) fail(ErrorCode::FieldOverflow, "kind code exceeds two digits");
  if (h.datagram_index > 127) fail(ErrorCode::FieldOverflow, "datagram index exceeds 127");
  WireWriter w;
  w.text(kMagic);
  w.u8(static_cast<uint8_t>('0' + h.kind_code / 10));
  w.u8(static_cast<uint8_t>('0' + h.kind_code % 10));
  w.u32(h.sample_counter);
  w.u8(static_cast<uint8_t>(h.datagram_index | (h.is_last_datagram ? 0x80 : 0x00)));
  w.u8(h.item_count);
  w.u32(h.time_code_ms);
  w.u8(h.character_id);
  w.u8(h.body_segment_count);
  w.u8(h.prop_count);
  w.u8(h.finger_segment_count);
  w.u16(h.reserved);
  w.u16(h.payload_size_bytes);
  return w.take();
}

Datagram parse_datagram(std::span<const uint8_t> bytes) {
  Datagram d;
  d.header = parse_header(bytes);
  const size_t payload_len = bytes.size() - kHeaderSize;
  if (payload_len != d.header.payload_size_bytes)
    fail(ErrorCode::PayloadSizeMismatch,
         "declared " + std::to_string(d.header.payload_size_bytes) + " bytes, got " +
             std::to_string(payload_len));

  auto payload = bytes.subspan(kHeaderSize);
  auto kind = d.header.kind();
  if (!kind) {
    d.payload = UnknownPayload{ByteBuffer(payload.begin(), payload.end())};
    return d;
  }

  const size_t count = d.header.item_count;
  const size_t item_size = payload_item_size(*kind);
  if (item_size != 0 && payload.size() != count * item_size)
    fail(ErrorCode::ItemCountMismatch,
         std::to_string(count) + " items of " + std::to_string(item_size) + " bytes do not fill " +
             std::to_string(payload.size()) + " payload bytes");
  if (*kind == PayloadKind::CenterOfMass && count != 1)
    fail(ErrorCode::ItemCountMismatch, "center-of-mass datagrams carry exactly one item");

  WireReader r(payload, ErrorCode::ItemCountMismatch);
  switch (*kind) {
    case PayloadKind::PoseEuler: d.payload = read_items<PoseEulerItem>(r, count); break;
    case PayloadKind::PoseQuaternion: d.payload = read_items<PoseQuaternionItem>(r, count); break;
    case PayloadKind::VirtualMarkers: d.payload = read_items<VirtualMarkerItem>(r, count); break;
    case PayloadKind::MetaText:
    case PayloadKind::ScaleInfo: d.payload = read_text_items(r, count); break;
    case PayloadKind::JointAngles: d.payload = read_items<JointAngleItem>(r, count); break;
    case PayloadKind::LinearKinematics: d.payload = read_items<LinearKinematicsItem>(r, count); break;
    case PayloadKind::AngularKinematics:
      d.payload = read_items<AngularKinematicsItem>(r, count);
      break;
    case PayloadKind::CenterOfMass: d.payload = read_items<CenterOfMassItem>(r, count); break;
  }
  if (r.remaining() != 0)
    fail(ErrorCode::ItemCountMismatch,
         std::to_string(r.remaining()) + " payload bytes left after decoding all items");
  return d;
}

namespace {

template <typename Item>
ByteBuffer encode_known(const Datagram& d, PayloadKind kind) {
  const auto* items = std::get_if<std::vector<Item>>(&d.payload);
  if (!items)
    fail(ErrorCode::InvalidItem,
         std::string("payload variant does not match kind ") + payload_kind_name(code_of(kind)));
  if (kind == PayloadKind::CenterOfMass && items->size() != 1)
    fail(ErrorCode::ItemCountMismatch, "center-of-mass datagrams carry exactly one item");
  if (items->size() > 255) fail(ErrorCode::FieldOverflow, "more than 255 items");
  return write_payload(*items);
}

}  // namespace

ByteBuffer serialize_datagram(const Datagram& d) {
  DatagramHeader h = d.header;
  ByteBuffer payload;
  auto kind = d.header.kind();
  if (!kind) {
    const auto* unknown = std::get_if<UnknownPayload>(&d.payload);
    if (!unknown) fail(ErrorCode::InvalidItem, "unknown kind code requires a raw payload");
    payload = unknown->raw;
    // item_count is opaque for unknown kinds and passes through unchanged.
  } else {
    switch (*kind) {
      case PayloadKind::PoseEuler: payload = encode_known<PoseEulerItem>(d, *kind); break;
      case PayloadKind::PoseQuaternion: payload = encode_known<PoseQuaternionItem>(d, *kind); break;
      case PayloadKind::VirtualMarkers: payload = encode_known<VirtualMarkerItem>(d, *kind); break;
      case PayloadKind::MetaText:
      case PayloadKind::ScaleInfo: payload = encode_known<TextItem>(d, *kind); break;
      case PayloadKind::JointAngles: payload = encode_known<JointAngleItem>(d, *kind); break;
      case PayloadKind::LinearKinematics:
        payload = encode_known<LinearKinematicsItem>(d, *kind);
        break;
      case PayloadKind::AngularKinematics:
        payload = encode_known<AngularKinematicsItem>(d, *kind);
        break;
      case PayloadKind::CenterOfMass: payload = encode_known<CenterOfMassItem>(d, *kind); break;
    }
    h.item_count = static_cast<uint8_t>(
        std::visit([](const auto& v) -> size_t {
          if constexpr (std::is_same_v<std::decay_t<decltype(v)>, UnknownPayload>)
            return 0;
          else
            return v.size();
        }, d.payload));
  }
  if (payload.size() > 0xFFFF) fail(ErrorCode::FieldOverflow, "payload exceeds 65535 bytes");
  h.payload_size_bytes = static_cast<uint16_t>(payload.size());

  ByteBuffer out = serialize_header(h);
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

Datagram make_datagram(PayloadKind kind, uint32_t sample_counter, uint32_t time_code_ms,
                       uint8_t character_id, DatagramPayload payload, uint8_t datagram_index,
                       bool is_last) {
  Datagram d;
  d.header.kind_code = code_of(kind);
  d.header.sample_counter = sample_counter;
  d.header.time_code_ms = time_code_ms;
  d.header.character_id = character_id;
  d.header.datagram_index = datagram_index;
  d.header.is_last_datagram = is_last;
  d.header.body_segment_count = 23;
  d.payload = std::move(payload);
  // Size and count fields are filled in by serialize_datagram; keep the
  // in-memory header consistent for direct comparisons.
  d.header.item_count = static_cast<uint8_t>(std::visit(
      [](const auto& v) -> size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, UnknownPayload>)
          return 0;
        else
          return v.size();
      },
      d.payload));
  ByteBuffer payload_bytes = serialize_datagram(d);
  d.header.payload_size_bytes = static_cast<uint16_t>(payload_bytes.size() - kHeaderSize);
  return d;
}

namespace {

void describe_vec(std::string& out, const char* label, std::span<const float> v) {
  char buf[160];
  if (v.size() == 3)
    std::snprintf(buf, sizeof buf, "  %s (%g, %g, %g)\n", label, v[0], v[1], v[2]);
  else
    std::snprintf(buf, sizeof buf, "  %s (%g, %g, %g, %g)\n", label, v[0], v[1], v[2], v[3]);
  out += buf;
}

}  // namespace

std::string describe_datagram(const Datagram& d) {
  const auto& h = d.header;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "%s (code %02u) sample %u index %u%s items %u time %u ms char %u segments %u "
                "props %u fingers %u payload %u B\n",
                payload_kind_name(h.kind_code), h.kind_code, h.sample_counter, h.datagram_index,
                h.is_last_datagram ? " (last)" : "", h.item_count, h.time_code_ms, h.character_id,
                h.body_segment_count, h.prop_count, h.finger_segment_count, h.payload_size_bytes);
  std::string out = buf;

  std::visit(
      [&out](const auto& items) {
        using T = std::decay_t<decltype(items)>;
        if constexpr (std::is_same_v<T, UnknownPayload>) {
          out += "  " + std::to_string(items.raw.size()) + " raw bytes (unknown kind)\n";
        } else if constexpr (std::is_same_v<T, std::vector<TextItem>>) {
          for (const auto& it : items) out += "  text: " + it.text + "\n";
        } else {
          for (const auto& it : items) {
            using Item = std::decay_t<decltype(it)>;
            if constexpr (std::is_same_v<Item, PoseEulerItem>) {
              out += "  segment " + std::to_string(it.segment_index) + "\n";
              describe_vec(out, "position", it.position_m);
              describe_vec(out, "euler ZXY deg", it.euler_deg_zxy);
            } else if constexpr (std::is_same_v<Item, PoseQuaternionItem>) {
              out += "  segment " + std::to_string(it.segment_index) + "\n";
              describe_vec(out, "position", it.position_m);
              describe_vec(out, "quaternion wxyz", it.quaternion_wxyz);
            } else if constexpr (std::is_same_v<Item, VirtualMarkerItem>) {
              out += "  marker " + std::to_string(it.point_id) + "\n";
              describe_vec(out, "position", it.position_m);
            } else if constexpr (std::is_same_v<Item, JointAngleItem>) {
              out += "  joint points " + std::to_string(it.parent_point) + " -> " +
                     std::to_string(it.child_point) + "\n";
              describe_vec(out, "rotation ZXY deg", it.rotation_deg_zxy);
            } else if constexpr (std::is_same_v<Item, LinearKinematicsItem>) {
              out += "  segment " + std::to_string(it.segment_index) + "\n";
              describe_vec(out, "position", it.position_m);
              describe_vec(out, "velocity", it.velocity_mps);
              describe_vec(out, "acceleration", it.acceleration_mps2);
            } else if constexpr (std::is_same_v<Item, AngularKinematicsItem>) {
              out += "  segment " + std::to_string(it.segment_index) + "\n";
              describe_vec(out, "quaternion wxyz", it.quaternion_wxyz);
              describe_vec(out, "angular velocity deg/s", it.angular_velocity_dps);
              describe_vec(out, "angular acceleration deg/s2", it.angular_acceleration_dps2);
            } else if constexpr (std::is_same_v<Item, CenterOfMassItem>) {
              describe_vec(out, "center of mass", it.position_m);
            }
          }
        }
      },
      d.payload);
  return out;
}

}  // namespace xsbridge
