#include "xsbridge/skeleton.hpp"

#include "xsbridge/errors.hpp"

namespace xsbridge {

namespace {

constexpr std::array<std::string_view, kSegmentCount> kSegmentNames = {
    "Pelvis",       "L5",           "L3",           "T12",          "T8",
    "Neck",         "Head",         "RightShoulder", "RightUpperArm", "RightForeArm",
    "RightHand",    "LeftShoulder", "LeftUpperArm", "LeftForeArm",  "LeftHand",
    "RightUpperLeg", "RightLowerLeg", "RightFoot",   "RightToe",     "LeftUpperLeg",
    "LeftLowerLeg", "LeftFoot",     "LeftToe",
};

constexpr std::array<std::string_view, kJointCount> kJointNames = {
    "jL5S1",     "jL4L3",           "jL1T12",       "jT9T8",      "jT1C7",
    "jC1Head",   "jRightT4Shoulder", "jRightShoulder", "jRightElbow", "jRightWrist",
    "jLeftT4Shoulder", "jLeftShoulder", "jLeftElbow", "jLeftWrist", "jRightHip",
    "jRightKnee", "jRightAnkle",    "jRightBallFoot", "jLeftHip",   "jLeftKnee",
    "jLeftAnkle", "jLeftBallFoot",
};

constexpr SkeletonTopology kTopology = {
    SegmentId::Pelvis,
    {{
        {JointId::L5S1, SegmentId::Pelvis, SegmentId::L5},
        {JointId::L4L3, SegmentId::L5, SegmentId::L3},
        {JointId::L1T12, SegmentId::L3, SegmentId::T12},
        {JointId::T9T8, SegmentId::T12, SegmentId::T8},
        {JointId::T1C7, SegmentId::T8, SegmentId::Neck},
        {JointId::C1Head, SegmentId::Neck, SegmentId::Head},
        {JointId::RightT4Shoulder, SegmentId::T8, SegmentId::RightShoulder},
        {JointId::RightShoulder, SegmentId::RightShoulder, SegmentId::RightUpperArm},
        {JointId::RightElbow, SegmentId::RightUpperArm, SegmentId::RightForeArm},
        {JointId::RightWrist, SegmentId::RightForeArm, SegmentId::RightHand},
        {JointId::LeftT4Shoulder, SegmentId::T8, SegmentId::LeftShoulder},
        {JointId::LeftShoulder, SegmentId::LeftShoulder, SegmentId::LeftUpperArm},
        {JointId::LeftElbow, SegmentId::LeftUpperArm, SegmentId::LeftForeArm},
        {JointId::LeftWrist, SegmentId::LeftForeArm, SegmentId::LeftHand},
        {JointId::RightHip, SegmentId::Pelvis, SegmentId::RightUpperLeg},
        {JointId::RightKnee, SegmentId::RightUpperLeg, SegmentId::RightLowerLeg},
        {JointId::RightAnkle, SegmentId::RightLowerLeg, SegmentId::RightFoot},
        {JointId::RightBallFoot, SegmentId::RightFoot, SegmentId::RightToe},
        {JointId::LeftHip, SegmentId::Pelvis, SegmentId::LeftUpperLeg},
        {JointId::LeftKnee, SegmentId::LeftUpperLeg, SegmentId::LeftLowerLeg},
        {JointId::LeftAnkle, SegmentId::LeftLowerLeg, SegmentId::LeftFoot},
        {JointId::LeftBallFoot, SegmentId::LeftFoot, SegmentId::LeftToe},
    }},
};

}  // namespace

const SkeletonTopology& default_topology() { return kTopology; }

SegmentId segment_from_index(uint32_t index) {
  if (index < 1 || index > static_cast<uint32_t>(kSegmentCount))
    fail(ErrorCode::OutOfRange, "segment index " + std::to_string(index) + " outside 1..23");
  return static_cast<SegmentId>(index);
}

std::string_view segment_name(SegmentId s) { return kSegmentNames[segment_index(s) - 1]; }

std::optional<SegmentId> segment_from_name(std::string_view name) {
  for (int i = 0; i < kSegmentCount; ++i)
    if (kSegmentNames[i] == name) return static_cast<SegmentId>(i + 1);
  return std::nullopt;
}

std::optional<SegmentId> parent_segment(SegmentId s) {
  for (const auto& e : kTopology.edges)
    if (e.child == s) return e.parent;
  return std::nullopt;
}

const std::array<JointDefinition, kJointCount>& joint_definitions() { return kTopology.edges; }

std::string_view joint_name(JointId j) { return kJointNames[static_cast<size_t>(j)]; }

std::optional<JointId> joint_from_name(std::string_view name) {
  for (int i = 0; i < kJointCount; ++i)
    if (kJointNames[i] == name) return static_cast<JointId>(i);
  return std::nullopt;
}

JointDefinition joint_definition(JointId j) { return kTopology.edges[static_cast<size_t>(j)]; }

std::optional<JointId> joint_by_child(SegmentId s) {
  for (const auto& e : kTopology.edges)
    if (e.child == s) return e.joint;
  return std::nullopt;
}

std::string_view dof_axis_name(DofAxis axis) {
  switch (axis) {
    case DofAxis::Z: return "z";
    case DofAxis::X: return "x";
    case DofAxis::Y: return "y";
  }
  return "?";
}

std::string joint_dof_name(JointId j, DofAxis axis) {
  return std::string(joint_name(j)) + "_" + std::string(dof_axis_name(axis));
}

}  // namespace xsbridge
