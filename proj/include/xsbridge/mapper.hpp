#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "xsbridge/frame.hpp"
#include "xsbridge/geometry.hpp"
#include "xsbridge/skeleton.hpp"

namespace xsbridge {

/// Message timestamp: receive wall-clock time plus the wire time code.
struct Stamp {
  uint64_t recv_wall_us = 0;
  uint32_t time_code_ms = 0;
  bool operator==(const Stamp&) const = default;
};

struct Twist {
  Vec3 linear_mps{0, 0, 0};
  Vec3 angular_radps{0, 0, 0};
  bool operator==(const Twist&) const = default;
};

struct Accel {
  Vec3 linear_mps2{0, 0, 0};
  Vec3 angular_radps2{0, 0, 0};
  bool operator==(const Accel&) const = default;
};

struct LinkStateEntry {
  std::string name;
  Pose pose;     // orientation normalized to unit length
  Twist twist;   // zeros when the matching kinematics category was absent
  Accel accel;
  bool has_linear_kinematics = false;
  bool has_angular_kinematics = false;
  bool operator==(const LinkStateEntry&) const = default;
};

struct LinkStateMessage {
  Stamp stamp;
  std::array<LinkStateEntry, kSegmentCount> links;
  bool operator==(const LinkStateMessage&) const = default;
};

struct JointStateMessage {
  Stamp stamp;
  std::array<std::string, kJointDofCount> names;      // joint order x (z, x, y)
  std::array<double, kJointDofCount> positions_rad{};
  bool operator==(const JointStateMessage&) const = default;
};

struct TransformMessage {
  Stamp stamp;
  std::string parent_frame = "world";
  std::string child_frame;
  Vec3 translation_m{0, 0, 0};
  Quaternion rotation;  // unit length
  bool operator==(const TransformMessage&) const = default;
};

struct PointMessage {
  Stamp stamp;
  Vec3 position_m{0, 0, 0};
  bool operator==(const PointMessage&) const = default;
};

/// Optional axis change applied to every mapped vector and orientation.
/// Must be a proper rotation (det +1); defaults to identity.
struct AxisRemap {
  Mat3 matrix = mat_identity();
  bool is_identity() const;
  Vec3 apply(const Vec3& v) const;
  Quaternion apply(const Quaternion& q) const;
  bool operator==(const AxisRemap&) const = default;
};

/// Parses "identity" or a triple like "x,-z,y" naming the source axis (with
/// sign) for each output axis. Throws ConfigError on anything else or on an
/// improper (reflecting) triple.
AxisRemap parse_axis_remap(const std::string& text);

/// Throws IncompleteFrame (listing the segments) unless all 23 poses are
/// present. Wire degrees become radians; missing twist/accel categories are
/// zero-filled and flagged per entry.
LinkStateMessage map_link_states(const MotionFrame& frame, const Stamp& stamp,
                                 const AxisRemap& remap = {});

/// Throws IncompleteFrame (listing the joints) unless all 22 joint triplets
/// are present. 66 parallel name/position entries, radians.
JointStateMessage map_joint_state(const MotionFrame& frame, const Stamp& stamp);

/// One world->segment transform per segment, identical to the link poses.
std::vector<TransformMessage> map_transforms(const MotionFrame& frame, const Stamp& stamp,
                                             const AxisRemap& remap = {});

/// Passthrough of the frame's center of mass when present.
std::optional<PointMessage> map_com(const MotionFrame& frame, const Stamp& stamp,
                                    const AxisRemap& remap = {});

}  // namespace xsbridge
