#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace xsbridge {

constexpr int kSegmentCount = 23;
constexpr int kJointCount = 22;
constexpr int kJointDofCount = kJointCount * 3;  // one revolute DoF per Euler axis

/// Body segments with their 1-based wire indices. Right side precedes left
/// within each limb pair.
enum class SegmentId : uint8_t {
  Pelvis = 1,
  L5 = 2,
  L3 = 3,
  T12 = 4,
  T8 = 5,
  Neck = 6,
  Head = 7,
  RightShoulder = 8,
  RightUpperArm = 9,
  RightForeArm = 10,
  RightHand = 11,
  LeftShoulder = 12,
  LeftUpperArm = 13,
  LeftForeArm = 14,
  LeftHand = 15,
  RightUpperLeg = 16,
  RightLowerLeg = 17,
  RightFoot = 18,
  RightToe = 19,
  LeftUpperLeg = 20,
  LeftLowerLeg = 21,
  LeftFoot = 22,
  LeftToe = 23,
};

/// Anatomical joints, ordered spine, right arm, left arm, right leg, left leg.
enum class JointId : uint8_t {
  L5S1 = 0,
  L4L3,
  L1T12,
  T9T8,
  T1C7,
  C1Head,
  RightT4Shoulder,
  RightShoulder,
  RightElbow,
  RightWrist,
  LeftT4Shoulder,
  LeftShoulder,
  LeftElbow,
  LeftWrist,
  RightHip,
  RightKnee,
  RightAnkle,
  RightBallFoot,
  LeftHip,
  LeftKnee,
  LeftAnkle,
  LeftBallFoot,
};

enum class DofAxis : uint8_t { Z = 0, X = 1, Y = 2 };

struct JointDefinition {
  JointId joint;
  SegmentId parent;
  SegmentId child;
};

/// The 23-segment, 22-joint kinematic tree rooted at the pelvis.
struct SkeletonTopology {
  SegmentId root;
  std::array<JointDefinition, kJointCount> edges;
};

const SkeletonTopology& default_topology();

/// Wire index (1..23) -> segment. Throws OutOfRange outside 1..23.
SegmentId segment_from_index(uint32_t index);
constexpr uint32_t segment_index(SegmentId s) { return static_cast<uint32_t>(s); }

std::string_view segment_name(SegmentId s);
std::optional<SegmentId> segment_from_name(std::string_view name);

/// Parent segment in the tree; empty for the pelvis root.
std::optional<SegmentId> parent_segment(SegmentId s);

const std::array<JointDefinition, kJointCount>& joint_definitions();

std::string_view joint_name(JointId j);
std::optional<JointId> joint_from_name(std::string_view name);
JointDefinition joint_definition(JointId j);

/// Joint whose child segment is s; empty for the pelvis root.
std::optional<JointId> joint_by_child(SegmentId s);

std::string_view dof_axis_name(DofAxis axis);

/// Name of one revolute DoF, e.g. ("jRightElbow", Z) -> "jRightElbow_z".
/// Injective over (joint, axis): 66 distinct names.
std::string joint_dof_name(JointId j, DofAxis axis);

}  // namespace xsbridge
