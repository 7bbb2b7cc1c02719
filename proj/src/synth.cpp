#include "xsbridge/synth.hpp"

#include <cmath>
#include <map>

#include "xsbridge/errors.hpp"

namespace xsbridge {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kAmplitudeCap = 1.5707963267948966 - 1e-2;

float q32(double v) { return static_cast<float>(v); }

std::array<float, 3> q32(const Vec3& v) { return {q32(v[0]), q32(v[1]), q32(v[2])}; }

std::array<float, 4> q32(const Quaternion& q) {
  return {q32(q.w), q32(q.x), q32(q.y), q32(q.z)};
}

// Rounds a double to float32 precision and back. The volatile is required:
// gcc's SLP vectorizer (seen on 11.x at -O3) pairs the two conversions away
// and the value silently keeps full double precision.
double wire_round(double v) {
  volatile float f = static_cast<float>(v);
  return static_cast<double>(f);
}

Vec3 wire_round(const Vec3& v) {
  return {wire_round(v[0]), wire_round(v[1]), wire_round(v[2])};
}

Quaternion wire_round(const Quaternion& q) {
  return {wire_round(q.w), wire_round(q.x), wire_round(q.y), wire_round(q.z)};
}

double& axis_of(RotationZXY& r, DofAxis axis) {
  switch (axis) {
    case DofAxis::Z: return r.z;
    case DofAxis::X: return r.x;
    case DofAxis::Y: return r.y;
  }
  return r.z;
}

}  // namespace

MotionScript MotionScript::npose(ScaleData scale, uint8_t character_id) {
  MotionScript s;
  s.kind = Kind::StaticNPose;
  s.scale = std::move(scale);
  s.character_id = character_id;
  return s;
}

MotionScript MotionScript::sinusoidal(SinusoidalMotion motion, ScaleData scale,
                                      uint8_t character_id) {
  MotionScript s;
  s.kind = Kind::Sinusoidal;
  s.motions = {motion};
  s.scale = std::move(scale);
  s.character_id = character_id;
  validate_script(s);
  return s;
}

MotionScript MotionScript::composite(std::vector<SinusoidalMotion> motions, ScaleData scale,
                                     uint8_t character_id) {
  MotionScript s;
  s.kind = Kind::Composite;
  s.motions = std::move(motions);
  s.scale = std::move(scale);
  s.character_id = character_id;
  validate_script(s);
  return s;
}

void validate_script(const MotionScript& script) {
  validate_scale(script.scale);
  std::map<std::pair<JointId, DofAxis>, double> amplitude_sum;
  for (const auto& m : script.motions) {
    if (!(m.frequency_hz >= 0.0) || !std::isfinite(m.amplitude_rad))
      fail(ErrorCode::OutOfRange, "motion parameters must be finite and non-negative");
    amplitude_sum[{m.joint, m.axis}] += std::abs(m.amplitude_rad);
  }
  for (const auto& [key, sum] : amplitude_sum)
    if (sum >= kAmplitudeCap)
      fail(ErrorCode::OutOfRange,
           "summed amplitude " + std::to_string(sum) + " rad reaches the gimbal-lock guard");
}

std::array<JointMotionSample, kJointCount> script_joint_motion(const MotionScript& script,
                                                               double t_s) {
  std::array<JointMotionSample, kJointCount> out{};
  if (script.kind == MotionScript::Kind::StaticNPose) return out;
  for (const auto& m : script.motions) {
    double omega = kTwoPi * m.frequency_hz;
    auto& sample = out[static_cast<size_t>(m.joint)];
    axis_of(sample.angle, m.axis) += m.amplitude_rad * std::sin(omega * t_s);
    axis_of(sample.rate, m.axis) += m.amplitude_rad * omega * std::cos(omega * t_s);
    axis_of(sample.acceleration, m.axis) += -m.amplitude_rad * omega * omega * std::sin(omega * t_s);
  }
  return out;
}

std::array<SegmentKinematics, kSegmentCount> synth_kinematics(const MotionScript& script,
                                                              double t_s) {
  if (t_s < 0.0) fail(ErrorCode::OutOfRange, "time must be non-negative");
  const auto joints = script_joint_motion(script, t_s);

  std::array<SegmentKinematics, kSegmentCount> out{};
  auto& pelvis = out[segment_index(SegmentId::Pelvis) - 1];
  pelvis.position = script.scale.of(SegmentId::Pelvis).offset_m;
  pelvis.orientation = Quaternion{1, 0, 0, 0};

  for (const auto& edge : joint_definitions()) {
    const auto& parent = out[segment_index(edge.parent) - 1];
    auto& child = out[segment_index(edge.child) - 1];
    const auto& motion = joints[static_cast<size_t>(edge.joint)];

    // Joint rotation and its derivatives in the parent frame. The rotation is
    // applied intrinsically Z, then X, then Y; each later axis is carried
    // along by the earlier rotations.
    const RotationZXY& ang = motion.angle;
    const Quaternion qz{std::cos(ang.z / 2), 0, 0, std::sin(ang.z / 2)};
    const Quaternion qx{std::cos(ang.x / 2), std::sin(ang.x / 2), 0, 0};
    const Quaternion q_joint = euler_zxy_to_quaternion(ang);

    const Vec3 u1{0, 0, 1};
    const Vec3 u2 = quat_rotate(qz, Vec3{1, 0, 0});
    const Vec3 u3 = quat_rotate(quat_multiply(qz, qx), Vec3{0, 1, 0});

    const Vec3 omega_local =
        motion.rate.z * u1 + motion.rate.x * u2 + motion.rate.y * u3;
    const Vec3 u2_dot = cross(motion.rate.z * u1, u2);
    const Vec3 u3_dot = cross(motion.rate.z * u1 + motion.rate.x * u2, u3);
    const Vec3 omega_local_dot = motion.acceleration.z * u1 + motion.acceleration.x * u2 +
                                 motion.acceleration.y * u3 + motion.rate.x * u2_dot +
                                 motion.rate.y * u3_dot;

    const Vec3 offset_global = quat_rotate(parent.orientation, script.scale.of(edge.child).offset_m);
    const Vec3 omega_joint_global = quat_rotate(parent.orientation, omega_local);

    child.orientation = quat_normalized(quat_multiply(parent.orientation, q_joint));
    child.position = parent.position + offset_global;
    child.velocity = parent.velocity + cross(parent.angular_velocity, offset_global);
    child.acceleration = parent.acceleration + cross(parent.angular_acceleration, offset_global) +
                         cross(parent.angular_velocity, cross(parent.angular_velocity, offset_global));
    child.angular_velocity = parent.angular_velocity + omega_joint_global;
    child.angular_acceleration = parent.angular_acceleration +
                                 quat_rotate(parent.orientation, omega_local_dot) +
                                 cross(parent.angular_velocity, omega_joint_global);
  }
  return out;
}

MotionFrame synth_frame(const MotionScript& script, double t_s, uint32_t sample_counter,
                        uint32_t time_code_ms) {
  const auto kin = synth_kinematics(script, t_s);
  const auto joints = script_joint_motion(script, t_s);

  MotionFrame frame;
  frame.sample_counter = sample_counter;
  frame.time_code_ms = time_code_ms;
  frame.character_id = script.character_id;

  for (int i = 0; i < kSegmentCount; ++i) {
    const auto& k = kin[i];
    // Round every wire quantity through float32 so the frame survives a
    // serialize/parse roundtrip unchanged.
    Vec3 pos = wire_round(k.position);
    Quaternion quat = wire_round(k.orientation);
    frame.poses[i] = SegmentPoseSample{pos, quat};
    frame.linear[i] =
        LinearKinematicsSample{pos, wire_round(k.velocity), wire_round(k.acceleration)};
    frame.angular[i] = AngularKinematicsSample{quat, wire_round(kDegPerRad * k.angular_velocity),
                                               wire_round(kDegPerRad * k.angular_acceleration)};
  }

  for (int j = 0; j < kJointCount; ++j) {
    const RotationZXY& a = joints[j].angle;
    frame.joint_angles_deg[j] =
        wire_round(Vec3{rad_to_deg(a.z), rad_to_deg(a.x), rad_to_deg(a.y)});
  }

  // Center of mass: mass-fraction-weighted mean of the wire-precision
  // positions, rounded to wire precision itself.
  Vec3 com{0, 0, 0};
  for (int i = 0; i < kSegmentCount; ++i) {
    double w = script.scale.segments[i].mass_fraction;
    com = com + w * frame.poses[i]->position_m;
  }
  frame.com_m = wire_round(com);

  // Anatomical landmarks, constant in their link frames.
  auto marker = [](SegmentId s, uint32_t point, const Vec3& p) {
    return MarkerSample{segment_index(s) * 256 + point, wire_round(p)};
  };
  frame.markers = {
      marker(SegmentId::Head, 1, {0.0, 0.0, 0.12}),
      marker(SegmentId::RightFoot, 1, {-0.06, 0.0, -0.04}),
      marker(SegmentId::LeftFoot, 1, {-0.06, 0.0, -0.04}),
  };
  return frame;
}

MotionFrame synth_frame(const MotionScript& script, double t_s) {
  return synth_frame(script, t_s, 0, static_cast<uint32_t>(t_s * 1000.0));
}

namespace {

template <typename Item>
void chunk_items(std::vector<Datagram>& out, const MotionFrame& frame, PayloadKind kind,
                 std::vector<Item> items, size_t max_payload_bytes) {
  if (items.empty()) return;
  const size_t item_size = payload_item_size(kind);
  const size_t per_datagram = max_payload_bytes / item_size;
  if (per_datagram == 0)
    fail(ErrorCode::PayloadTooSmall, std::string(payload_kind_name(static_cast<uint8_t>(kind))) +
                                         " item needs " + std::to_string(item_size) + " bytes");
  uint8_t index = 0;
  for (size_t begin = 0; begin < items.size(); begin += per_datagram, ++index) {
    size_t end = std::min(items.size(), begin + per_datagram);
    std::vector<Item> part(items.begin() + begin, items.begin() + end);
    bool last = end == items.size();
    out.push_back(make_datagram(kind, frame.sample_counter, frame.time_code_ms,
                                frame.character_id, std::move(part), index, last));
  }
}

void chunk_text(std::vector<Datagram>& out, const MotionFrame& frame, PayloadKind kind,
                const std::string& text, size_t max_payload_bytes) {
  // Text reassembles by plain concatenation, so splitting at any byte
  // boundary is safe; one length-prefixed item per datagram.
  if (max_payload_bytes < 5)
    fail(ErrorCode::PayloadTooSmall, "text items need at least 5 payload bytes");
  const size_t chunk = max_payload_bytes - 4;
  uint8_t index = 0;
  for (size_t begin = 0; begin < text.size() || begin == 0; begin += chunk, ++index) {
    std::string part = text.substr(begin, chunk);
    bool last = begin + chunk >= text.size();
    out.push_back(make_datagram(kind, frame.sample_counter, frame.time_code_ms,
                                frame.character_id, std::vector<TextItem>{{std::move(part)}},
                                index, last));
    if (last) break;
  }
}

}  // namespace

std::vector<Datagram> frame_to_datagrams(const MotionFrame& frame, size_t max_payload_bytes) {
  std::vector<Datagram> out;

  std::vector<PoseQuaternionItem> poses;
  std::vector<LinearKinematicsItem> linear;
  std::vector<AngularKinematicsItem> angular;
  for (int i = 0; i < kSegmentCount; ++i) {
    uint32_t seg = static_cast<uint32_t>(i + 1);
    if (frame.poses[i])
      poses.push_back({seg, q32(frame.poses[i]->position_m), q32(frame.poses[i]->orientation)});
    if (frame.linear[i])
      linear.push_back({seg, q32(frame.linear[i]->position_m), q32(frame.linear[i]->velocity_mps),
                        q32(frame.linear[i]->acceleration_mps2)});
    if (frame.angular[i])
      angular.push_back({seg, q32(frame.angular[i]->orientation),
                         q32(frame.angular[i]->angular_velocity_dps),
                         q32(frame.angular[i]->angular_acceleration_dps2)});
  }

  std::vector<VirtualMarkerItem> markers;
  for (const auto& m : frame.markers) markers.push_back({m.point_id, q32(m.position_m)});

  std::vector<JointAngleItem> joint_items;
  for (int j = 0; j < kJointCount; ++j) {
    if (!frame.joint_angles_deg[j]) continue;
    auto def = joint_definition(static_cast<JointId>(j));
    joint_items.push_back({segment_index(def.parent) * 256, segment_index(def.child) * 256,
                           q32(*frame.joint_angles_deg[j])});
  }

  chunk_items(out, frame, PayloadKind::PoseQuaternion, std::move(poses), max_payload_bytes);
  chunk_items(out, frame, PayloadKind::VirtualMarkers, std::move(markers), max_payload_bytes);
  if (frame.meta_text) chunk_text(out, frame, PayloadKind::MetaText, *frame.meta_text, max_payload_bytes);
  if (frame.scale_text)
    chunk_text(out, frame, PayloadKind::ScaleInfo, *frame.scale_text, max_payload_bytes);
  chunk_items(out, frame, PayloadKind::JointAngles, std::move(joint_items), max_payload_bytes);
  chunk_items(out, frame, PayloadKind::LinearKinematics, std::move(linear), max_payload_bytes);
  chunk_items(out, frame, PayloadKind::AngularKinematics, std::move(angular), max_payload_bytes);
  if (frame.com_m)
    chunk_items(out, frame, PayloadKind::CenterOfMass,
                std::vector<CenterOfMassItem>{{q32(*frame.com_m)}}, max_payload_bytes);
  return out;
}

}  // namespace xsbridge
