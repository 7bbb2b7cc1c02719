#include "xsbridge/frame.hpp"

#include <algorithm>

namespace xsbridge {

namespace {

Vec3 to_vec3(const std::array<float, 3>& v) { return {v[0], v[1], v[2]}; }

Quaternion to_quat(const std::array<float, 4>& q) { return {q[0], q[1], q[2], q[3]}; }

/// Point ids encode segment_index * 256 + point offset.
std::optional<JointId> resolve_joint(uint32_t parent_point, uint32_t child_point) {
  uint32_t parent_seg = parent_point / 256;
  uint32_t child_seg = child_point / 256;
  if (child_seg < 1 || child_seg > 23 || parent_seg < 1 || parent_seg > 23) return std::nullopt;
  auto joint = joint_by_child(static_cast<SegmentId>(child_seg));
  if (!joint) return std::nullopt;
  if (segment_index(joint_definition(*joint).parent) != parent_seg) return std::nullopt;
  return joint;
}

void upsert_marker(std::vector<MarkerSample>& markers, MarkerSample m) {
  auto it = std::find_if(markers.begin(), markers.end(),
                         [&](const MarkerSample& x) { return x.point_id == m.point_id; });
  if (it != markers.end())
    *it = m;
  else
    markers.push_back(m);
}

}  // namespace

bool MotionFrame::has_all_poses() const {
  return std::all_of(poses.begin(), poses.end(), [](const auto& p) { return p.has_value(); });
}

bool MotionFrame::has_all_joint_angles() const {
  return std::all_of(joint_angles_deg.begin(), joint_angles_deg.end(),
                     [](const auto& a) { return a.has_value(); });
}

size_t merge_datagram_into_frame(MotionFrame& frame, const Datagram& d) {
  frame.sample_counter = d.header.sample_counter;
  frame.time_code_ms = d.header.time_code_ms;
  frame.character_id = d.header.character_id;

  size_t unresolved = 0;
  auto kind = d.header.kind();
  if (!kind) return 0;

  switch (*kind) {
    case PayloadKind::PoseEuler:
      for (const auto& it : std::get<std::vector<PoseEulerItem>>(d.payload)) {
        RotationZXY r{deg_to_rad(it.euler_deg_zxy[0]), deg_to_rad(it.euler_deg_zxy[1]),
                      deg_to_rad(it.euler_deg_zxy[2])};
        frame.poses[it.segment_index - 1] =
            SegmentPoseSample{to_vec3(it.position_m), euler_zxy_to_quaternion(r)};
      }
      break;
    case PayloadKind::PoseQuaternion:
      for (const auto& it : std::get<std::vector<PoseQuaternionItem>>(d.payload))
        frame.poses[it.segment_index - 1] =
            SegmentPoseSample{to_vec3(it.position_m), to_quat(it.quaternion_wxyz)};
      break;
    case PayloadKind::VirtualMarkers:
      for (const auto& it : std::get<std::vector<VirtualMarkerItem>>(d.payload))
        upsert_marker(frame.markers, {it.point_id, to_vec3(it.position_m)});
      break;
    case PayloadKind::MetaText: {
      std::string text;
      for (const auto& it : std::get<std::vector<TextItem>>(d.payload)) text += it.text;
      if (frame.meta_text)
        *frame.meta_text += text;
      else
        frame.meta_text = text;
      break;
    }
    case PayloadKind::ScaleInfo: {
      std::string text;
      for (const auto& it : std::get<std::vector<TextItem>>(d.payload)) text += it.text;
      if (frame.scale_text)
        *frame.scale_text += text;
      else
        frame.scale_text = text;
      break;
    }
    case PayloadKind::JointAngles:
      for (const auto& it : std::get<std::vector<JointAngleItem>>(d.payload)) {
        auto joint = resolve_joint(it.parent_point, it.child_point);
        if (!joint) {
          ++unresolved;
          continue;
        }
        frame.joint_angles_deg[static_cast<size_t>(*joint)] = to_vec3(it.rotation_deg_zxy);
      }
      break;
    case PayloadKind::LinearKinematics:
      for (const auto& it : std::get<std::vector<LinearKinematicsItem>>(d.payload))
        frame.linear[it.segment_index - 1] = LinearKinematicsSample{
            to_vec3(it.position_m), to_vec3(it.velocity_mps), to_vec3(it.acceleration_mps2)};
      break;
    case PayloadKind::AngularKinematics:
      for (const auto& it : std::get<std::vector<AngularKinematicsItem>>(d.payload))
        frame.angular[it.segment_index - 1] =
            AngularKinematicsSample{to_quat(it.quaternion_wxyz), to_vec3(it.angular_velocity_dps),
                                    to_vec3(it.angular_acceleration_dps2)};
      break;
    case PayloadKind::CenterOfMass:
      for (const auto& it : std::get<std::vector<CenterOfMassItem>>(d.payload))
        frame.com_m = to_vec3(it.position_m);
      break;
  }
  return unresolved;
}

}  // namespace xsbridge
