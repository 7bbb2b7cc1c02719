#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "xsbridge/datagram.hpp"
#include "xsbridge/geometry.hpp"
#include "xsbridge/skeleton.hpp"

namespace xsbridge {

/// One segment pose as carried on the wire. The orientation is the raw
/// streamed quaternion; consumers that need a unit quaternion normalize it.
struct SegmentPoseSample {
  Vec3 position_m{0, 0, 0};
  Quaternion orientation;
  bool operator==(const SegmentPoseSample&) const = default;
};

struct LinearKinematicsSample {
  Vec3 position_m{0, 0, 0};
  Vec3 velocity_mps{0, 0, 0};
  Vec3 acceleration_mps2{0, 0, 0};
  bool operator==(const LinearKinematicsSample&) const = default;
};

struct AngularKinematicsSample {
  Quaternion orientation;
  Vec3 angular_velocity_dps{0, 0, 0};
  Vec3 angular_acceleration_dps2{0, 0, 0};
  bool operator==(const AngularKinematicsSample&) const = default;
};

struct MarkerSample {
  uint32_t point_id = 0;
  Vec3 position_m{0, 0, 0};
  bool operator==(const MarkerSample&) const = default;
};

/// One assembled time sample: everything the stream carried for one value of
/// the sample counter. Segment slots are indexed by wire index - 1, joint
/// slots by JointId order; joint angles stay in wire degrees (ZXY).
struct MotionFrame {
  uint32_t sample_counter = 0;
  uint32_t time_code_ms = 0;
  uint8_t character_id = 0;

  std::array<std::optional<SegmentPoseSample>, kSegmentCount> poses{};
  std::array<std::optional<LinearKinematicsSample>, kSegmentCount> linear{};
  std::array<std::optional<AngularKinematicsSample>, kSegmentCount> angular{};
  std::array<std::optional<Vec3>, kJointCount> joint_angles_deg{};
  std::optional<Vec3> com_m;
  std::vector<MarkerSample> markers;
  std::optional<std::string> meta_text;
  std::optional<std::string> scale_text;

  bool has_all_poses() const;
  bool has_all_joint_angles() const;

  const std::optional<SegmentPoseSample>& pose(SegmentId s) const {
    return poses[segment_index(s) - 1];
  }
  const std::optional<Vec3>& joint_angle_deg(JointId j) const {
    return joint_angles_deg[static_cast<size_t>(j)];
  }

  bool operator==(const MotionFrame&) const = default;
};

/// Folds one datagram's items into the frame. Later items win on duplicate
/// keys; a quaternion pose overrides an Euler pose for the same segment.
/// Joint-angle items whose point ids do not resolve to a known joint are
/// skipped; the return value reports how many were.
size_t merge_datagram_into_frame(MotionFrame& frame, const Datagram& d);

}  // namespace xsbridge
