#include "xsbridge/mapper.hpp"

#include <cmath>

#include "xsbridge/errors.hpp"

namespace xsbridge {

bool AxisRemap::is_identity() const { return matrix == mat_identity(); }

Vec3 AxisRemap::apply(const Vec3& v) const {
  return is_identity() ? v : mat_apply(matrix, v);
}

Quaternion AxisRemap::apply(const Quaternion& q) const {
  if (is_identity()) return q;
  return quat_multiply(matrix_to_quat(matrix), q);
}

AxisRemap parse_axis_remap(const std::string& text) {
  AxisRemap remap;
  if (text == "identity" || text.empty()) return remap;

  Mat3 m{};
  size_t pos = 0;
  for (int row = 0; row < 3; ++row) {
    size_t end = text.find(',', pos);
    std::string tok = text.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
    if ((end == std::string::npos) != (row == 2))
      fail(ErrorCode::ConfigError, "axis remap needs three comma-separated axes: " + text);
    double sign = 1.0;
    if (!tok.empty() && (tok[0] == '-' || tok[0] == '+')) {
      sign = tok[0] == '-' ? -1.0 : 1.0;
      tok = tok.substr(1);
    }
    int col;
    if (tok == "x")
      col = 0;
    else if (tok == "y")
      col = 1;
    else if (tok == "z")
      col = 2;
    else
      fail(ErrorCode::ConfigError, "axis remap token must be +-x/y/z, got '" + tok + "'");
    m[row][col] = sign;
    pos = end + 1;
  }
  // determinant must be +1: a proper rotation, not a reflection
  double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
               m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  if (std::abs(det - 1.0) > 1e-12)
    fail(ErrorCode::ConfigError, "axis remap is not a proper rotation: " + text);
  remap.matrix = m;
  return remap;
}

namespace {

std::string missing_segments_message(const MotionFrame& frame) {
  std::string names;
  for (int i = 0; i < kSegmentCount; ++i)
    if (!frame.poses[i]) {
      if (!names.empty()) names += ", ";
      names += segment_name(static_cast<SegmentId>(i + 1));
    }
  return names;
}

}  // namespace

LinkStateMessage map_link_states(const MotionFrame& frame, const Stamp& stamp,
                                 const AxisRemap& remap) {
  if (!frame.has_all_poses())
    fail(ErrorCode::IncompleteFrame, "missing segment poses: " + missing_segments_message(frame));

  LinkStateMessage msg;
  msg.stamp = stamp;
  for (int i = 0; i < kSegmentCount; ++i) {
    auto& entry = msg.links[i];
    entry.name = segment_name(static_cast<SegmentId>(i + 1));
    const auto& pose = *frame.poses[i];
    entry.pose.position = remap.apply(pose.position_m);
    entry.pose.orientation = remap.apply(quat_normalized(pose.orientation));

    if (frame.linear[i]) {
      entry.has_linear_kinematics = true;
      entry.twist.linear_mps = remap.apply(frame.linear[i]->velocity_mps);
      entry.accel.linear_mps2 = remap.apply(frame.linear[i]->acceleration_mps2);
    }
    if (frame.angular[i]) {
      entry.has_angular_kinematics = true;
      entry.twist.angular_radps = remap.apply(kRadPerDeg * frame.angular[i]->angular_velocity_dps);
      entry.accel.angular_radps2 =
          remap.apply(kRadPerDeg * frame.angular[i]->angular_acceleration_dps2);
    }
  }
  return msg;
}

JointStateMessage map_joint_state(const MotionFrame& frame, const Stamp& stamp) {
  if (!frame.has_all_joint_angles()) {
    std::string names;
    for (int i = 0; i < kJointCount; ++i)
      if (!frame.joint_angles_deg[i]) {
        if (!names.empty()) names += ", ";
        names += joint_name(static_cast<JointId>(i));
      }
    fail(ErrorCode::IncompleteFrame, "missing joint angles: " + names);
  }

  JointStateMessage msg;
  msg.stamp = stamp;
  for (int i = 0; i < kJointCount; ++i) {
    const JointId joint = static_cast<JointId>(i);
    const Vec3& deg = *frame.joint_angles_deg[i];  // wire order z, x, y
    for (int a = 0; a < 3; ++a) {
      msg.names[i * 3 + a] = joint_dof_name(joint, static_cast<DofAxis>(a));
      msg.positions_rad[i * 3 + a] = deg_to_rad(deg[a]);
    }
  }
  return msg;
}

std::vector<TransformMessage> map_transforms(const MotionFrame& frame, const Stamp& stamp,
                                             const AxisRemap& remap) {
  LinkStateMessage links = map_link_states(frame, stamp, remap);
  std::vector<TransformMessage> out(kSegmentCount);
  for (int i = 0; i < kSegmentCount; ++i) {
    out[i].stamp = stamp;
    out[i].child_frame = links.links[i].name;
    out[i].translation_m = links.links[i].pose.position;
    out[i].rotation = links.links[i].pose.orientation;
  }
  return out;
}

std::optional<PointMessage> map_com(const MotionFrame& frame, const Stamp& stamp,
                                    const AxisRemap& remap) {
  if (!frame.com_m) return std::nullopt;
  PointMessage msg;
  msg.stamp = stamp;
  msg.position_m = remap.apply(*frame.com_m);
  return msg;
}

}  // namespace xsbridge
