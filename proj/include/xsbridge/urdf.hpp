#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xsbridge/geometry.hpp"
#include "xsbridge/scale.hpp"
#include "xsbridge/skeleton.hpp"

namespace xsbridge {

struct UrdfInertial {
  double mass_kg = 0.0;
  Vec3 origin_xyz{0, 0, 0};
  double inertia_diag = 1e-3;  // ixx = iyy = izz, kg m^2
  bool operator==(const UrdfInertial&) const = default;
};

struct UrdfVisual {
  enum class Shape { Cylinder, Sphere } shape = Shape::Sphere;
  Vec3 origin_xyz{0, 0, 0};
  Vec3 origin_rpy{0, 0, 0};
  double length_m = 0.0;  // cylinders only
  double radius_m = 0.0;
  bool operator==(const UrdfVisual&) const = default;
};

struct LinkSpec {
  enum class Kind { Segment, Virtual } kind = Kind::Segment;
  std::string name;
  std::optional<UrdfInertial> inertial;
  std::vector<UrdfVisual> visuals;
  bool operator==(const LinkSpec&) const = default;
};

struct JointSpec {
  std::string name;
  std::string type = "revolute";
  std::string parent_link;
  std::string child_link;
  Vec3 origin_xyz{0, 0, 0};
  Vec3 origin_rpy{0, 0, 0};
  Vec3 axis{0, 0, 1};
  double limit_lower = 0.0;
  double limit_upper = 0.0;
  double limit_effort = 100.0;
  double limit_velocity = 10.0;
  bool operator==(const JointSpec&) const = default;
};

struct UrdfDocument {
  std::string robot_name;
  std::vector<LinkSpec> links;
  std::vector<JointSpec> joints;
  std::vector<std::string> warnings;

  int segment_link_count() const;
  int virtual_link_count() const;
  int revolute_joint_count() const;
};

struct UrdfOptions {
  std::string robot_name = "human";
  double total_mass_kg = 70.0;
  /// Simple cylinder/sphere visuals on segment links.
  bool with_visuals = true;
  /// Give virtual links a 1e-6 kg inertial so physics engines accept the
  /// chain; zero-content links otherwise.
  bool physics_mass = false;
};

/// Builds the human model: one link per body segment plus, for every
/// anatomical joint, a Z->X->Y chain of three revolute joints threaded
/// through two massless virtual links. 23 segment links, 44 virtual links,
/// 66 revolute joints. The first revolute joint of each triple carries the
/// segment's scale offset. Throws InvalidScale on bad scale data.
UrdfDocument generate_urdf(const SkeletonTopology& topo, const ScaleData& scale,
                           const UrdfOptions& options = {});
UrdfDocument generate_urdf(const SkeletonTopology& topo, const ScaleData& scale,
                           const std::string& robot_name);

/// Deterministic XML rendering in topology order; rendering twice yields
/// byte-identical output.
std::string render_xml(const UrdfDocument& doc);

struct UrdfCounts {
  int links = 0;           // links with substance (inertial mass or visuals)
  int virtual_links = 0;   // empty helper links
  int revolute_joints = 0;
  bool is_tree = false;

  bool operator==(const UrdfCounts&) const = default;
};

/// Re-parses rendered (or hand-written) URDF text and reports structural
/// counts; independent of generate_urdf. Throws MalformedXml on broken XML
/// and UnsupportedJointType on joint types other than revolute/fixed.
UrdfCounts validate_urdf(std::string_view xml_text);

}  // namespace xsbridge
