#include "xsbridge/urdf.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>

#include "xsbridge/errors.hpp"
#include "xsbridge/xml.hpp"

namespace xsbridge {

namespace {

std::string fmt(double v) {
  if (v == 0.0) v = 0.0;  // avoid "-0" in rendered attributes
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string fmt(const Vec3& v) { return fmt(v[0]) + " " + fmt(v[1]) + " " + fmt(v[2]); }

constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Roll-pitch-yaw (fixed-axis XYZ) from a rotation matrix.
Vec3 matrix_to_rpy(const Mat3& m) {
  double pitch = std::asin(std::clamp(-m[2][0], -1.0, 1.0));
  double roll, yaw;
  if (std::abs(m[2][0]) > 1.0 - 1e-12) {
    roll = std::atan2(-m[0][1], m[1][1]);
    yaw = 0.0;
  } else {
    roll = std::atan2(m[2][1], m[2][2]);
    yaw = std::atan2(m[1][0], m[0][0]);
  }
  return {roll, pitch, yaw};
}

/// rpy for a cylinder whose +z axis should point along dir.
Vec3 rpy_aligning_z_to(const Vec3& dir) {
  double len = norm(dir);
  if (len < 1e-12) return {0, 0, 0};
  Vec3 d = (1.0 / len) * dir;
  Vec3 z{0, 0, 1};
  Vec3 axis = cross(z, d);
  double s = norm(axis);
  double c = dot(z, d);
  Quaternion q;
  if (s < 1e-12) {
    q = c > 0 ? Quaternion{1, 0, 0, 0} : Quaternion{0, 1, 0, 0};  // flip about x
  } else {
    double angle = std::atan2(s, c);
    Vec3 a = (1.0 / s) * axis;
    double half = angle / 2;
    q = {std::cos(half), a[0] * std::sin(half), a[1] * std::sin(half), a[2] * std::sin(half)};
  }
  return matrix_to_rpy(quat_to_matrix(q));
}

UrdfVisual bone_visual(const Vec3& offset) {
  UrdfVisual v;
  v.shape = UrdfVisual::Shape::Cylinder;
  double len = norm(offset);
  v.length_m = len;
  v.radius_m = std::clamp(0.15 * len, 0.01, 0.05);
  v.origin_xyz = 0.5 * offset;
  v.origin_rpy = rpy_aligning_z_to(offset);
  return v;
}

}  // namespace

int UrdfDocument::segment_link_count() const {
  return static_cast<int>(std::count_if(links.begin(), links.end(), [](const LinkSpec& l) {
    return l.kind == LinkSpec::Kind::Segment;
  }));
}

int UrdfDocument::virtual_link_count() const {
  return static_cast<int>(links.size()) - segment_link_count();
}

int UrdfDocument::revolute_joint_count() const {
  return static_cast<int>(std::count_if(joints.begin(), joints.end(), [](const JointSpec& j) {
    return j.type == "revolute";
  }));
}

UrdfDocument generate_urdf(const SkeletonTopology& topo, const ScaleData& scale,
                           const std::string& robot_name) {
  UrdfOptions options;
  options.robot_name = robot_name;
  return generate_urdf(topo, scale, options);
}

UrdfDocument generate_urdf(const SkeletonTopology& topo, const ScaleData& scale,
                           const UrdfOptions& options) {
  validate_scale(scale);

  UrdfDocument doc;
  doc.robot_name = options.robot_name;
  if (options.robot_name.empty()) doc.warnings.push_back("robot name is empty");

  auto segment_link = [&](SegmentId s) {
    LinkSpec link;
    link.kind = LinkSpec::Kind::Segment;
    link.name = segment_name(s);
    UrdfInertial inertial;
    inertial.mass_kg = scale.of(s).mass_fraction * options.total_mass_kg;
    inertial.inertia_diag = std::max(1e-6, inertial.mass_kg * 1e-3);
    link.inertial = inertial;
    if (options.with_visuals) {
      for (const auto& edge : topo.edges)
        if (edge.parent == s && norm(scale.of(edge.child).offset_m) > 1e-9)
          link.visuals.push_back(bone_visual(scale.of(edge.child).offset_m));
      if (link.visuals.empty()) {
        UrdfVisual marker;
        marker.shape = UrdfVisual::Shape::Sphere;
        marker.radius_m = s == SegmentId::Head ? 0.08 : 0.03;
        link.visuals.push_back(marker);
      }
    }
    return link;
  };

  auto virtual_link = [&](const std::string& name) {
    LinkSpec link;
    link.kind = LinkSpec::Kind::Virtual;
    link.name = name;
    if (options.physics_mass) link.inertial = UrdfInertial{1e-6, {0, 0, 0}, 1e-9};
    return link;
  };

  doc.links.push_back(segment_link(topo.root));

  // Z -> X -> Y revolute chain per anatomical joint; the first joint of the
  // triple carries the child segment's offset in the parent frame.
  constexpr Vec3 kAxes[3] = {{0, 0, 1}, {1, 0, 0}, {0, 1, 0}};
  for (const auto& edge : topo.edges) {
    const std::string jname(joint_name(edge.joint));
    const Vec3& offset = scale.of(edge.child).offset_m;
    if (norm(offset) < 1e-12)
      doc.warnings.push_back("zero-length offset for " + jname + ": joint origins coincide");

    const std::string virt_z = jname + "_virt_z";
    const std::string virt_x = jname + "_virt_x";
    doc.links.push_back(virtual_link(virt_z));
    doc.links.push_back(virtual_link(virt_x));
    doc.links.push_back(segment_link(edge.child));

    const std::string parents[3] = {std::string(segment_name(edge.parent)), virt_z, virt_x};
    const std::string children[3] = {virt_z, virt_x, std::string(segment_name(edge.child))};
    for (int a = 0; a < 3; ++a) {
      JointSpec joint;
      joint.name = joint_dof_name(edge.joint, static_cast<DofAxis>(a));
      joint.parent_link = parents[a];
      joint.child_link = children[a];
      joint.origin_xyz = a == 0 ? offset : Vec3{0, 0, 0};
      joint.axis = kAxes[a];
      joint.limit_lower = -kTwoPi;
      joint.limit_upper = kTwoPi;
      doc.joints.push_back(joint);
    }
  }
  return doc;
}

std::string render_xml(const UrdfDocument& doc) {
  xml::Element robot;
  robot.name = "robot";
  robot.attributes.emplace_back("name", doc.robot_name);

  for (const auto& link : doc.links) {
    xml::Element e;
    e.name = "link";
    e.attributes.emplace_back("name", link.name);
    if (link.inertial) {
      xml::Element inertial;
      inertial.name = "inertial";
      xml::Element origin;
      origin.name = "origin";
      origin.attributes.emplace_back("xyz", fmt(link.inertial->origin_xyz));
      origin.attributes.emplace_back("rpy", "0 0 0");
      xml::Element mass;
      mass.name = "mass";
      mass.attributes.emplace_back("value", fmt(link.inertial->mass_kg));
      xml::Element inertia;
      inertia.name = "inertia";
      const std::string diag = fmt(link.inertial->inertia_diag);
      inertia.attributes.emplace_back("ixx", diag);
      inertia.attributes.emplace_back("ixy", "0");
      inertia.attributes.emplace_back("ixz", "0");
      inertia.attributes.emplace_back("iyy", diag);
      inertia.attributes.emplace_back("iyz", "0");
      inertia.attributes.emplace_back("izz", diag);
      inertial.children = {origin, mass, inertia};
      e.children.push_back(inertial);
    }
    for (const auto& visual : link.visuals) {
      xml::Element v;
      v.name = "visual";
      xml::Element origin;
      origin.name = "origin";
      origin.attributes.emplace_back("xyz", fmt(visual.origin_xyz));
      origin.attributes.emplace_back("rpy", fmt(visual.origin_rpy));
      xml::Element geometry;
      geometry.name = "geometry";
      xml::Element shape;
      if (visual.shape == UrdfVisual::Shape::Cylinder) {
        shape.name = "cylinder";
        shape.attributes.emplace_back("radius", fmt(visual.radius_m));
        shape.attributes.emplace_back("length", fmt(visual.length_m));
      } else {
        shape.name = "sphere";
        shape.attributes.emplace_back("radius", fmt(visual.radius_m));
      }
      geometry.children.push_back(shape);
      v.children = {origin, geometry};
      e.children.push_back(v);
    }
    robot.children.push_back(std::move(e));
  }

  for (const auto& joint : doc.joints) {
    xml::Element e;
    e.name = "joint";
    e.attributes.emplace_back("name", joint.name);
    e.attributes.emplace_back("type", joint.type);
    xml::Element parent;
    parent.name = "parent";
    parent.attributes.emplace_back("link", joint.parent_link);
    xml::Element child;
    child.name = "child";
    child.attributes.emplace_back("link", joint.child_link);
    xml::Element origin;
    origin.name = "origin";
    origin.attributes.emplace_back("xyz", fmt(joint.origin_xyz));
    origin.attributes.emplace_back("rpy", fmt(joint.origin_rpy));
    xml::Element axis;
    axis.name = "axis";
    axis.attributes.emplace_back("xyz", fmt(joint.axis));
    e.children = {parent, child, origin, axis};
    if (joint.type == "revolute") {
      xml::Element limit;
      limit.name = "limit";
      limit.attributes.emplace_back("lower", fmt(joint.limit_lower));
      limit.attributes.emplace_back("upper", fmt(joint.limit_upper));
      limit.attributes.emplace_back("effort", fmt(joint.limit_effort));
      limit.attributes.emplace_back("velocity", fmt(joint.limit_velocity));
      e.children.push_back(limit);
    }
    robot.children.push_back(std::move(e));
  }

  return xml::render_document(robot);
}

UrdfCounts validate_urdf(std::string_view xml_text) {
  xml::Element root = xml::parse_document(xml_text);
  if (root.name != "robot") fail(ErrorCode::MalformedXml, "root element must be <robot>");

  UrdfCounts counts;
  std::map<std::string, bool> link_is_virtual;  // name -> virtual?
  for (const xml::Element* link : root.children_named("link")) {
    const std::string* name = link->attribute("name");
    if (!name) fail(ErrorCode::MalformedXml, "link without a name attribute");
    bool has_visual = link->first_child("visual") != nullptr;
    double mass = 0.0;
    if (const xml::Element* inertial = link->first_child("inertial")) {
      if (const xml::Element* mass_el = inertial->first_child("mass")) {
        if (const std::string* value = mass_el->attribute("value")) {
          try {
            mass = std::stod(*value);
          } catch (const std::exception&) {
            fail(ErrorCode::MalformedXml, "bad mass value on link " + *name);
          }
        }
      }
    }
    bool is_virtual = !has_visual && mass <= 1e-6;
    if (link_is_virtual.contains(*name))
      fail(ErrorCode::MalformedXml, "duplicate link name " + *name);
    link_is_virtual[*name] = is_virtual;
    if (is_virtual)
      ++counts.virtual_links;
    else
      ++counts.links;
  }

  struct EdgeRef {
    std::string parent;
    std::string child;
  };
  std::vector<EdgeRef> edges;
  for (const xml::Element* joint : root.children_named("joint")) {
    const std::string* type = joint->attribute("type");
    if (!type) fail(ErrorCode::MalformedXml, "joint without a type attribute");
    if (*type == "revolute")
      ++counts.revolute_joints;
    else if (*type != "fixed")
      fail(ErrorCode::UnsupportedJointType, "joint type " + *type);
    const xml::Element* parent = joint->first_child("parent");
    const xml::Element* child = joint->first_child("child");
    if (!parent || !child || !parent->attribute("link") || !child->attribute("link"))
      fail(ErrorCode::MalformedXml, "joint without parent/child link references");
    edges.push_back({*parent->attribute("link"), *child->attribute("link")});
  }

  // Tree check: every link except a single root is the child of exactly one
  // joint, all references resolve, and every link is reachable from the root.
  counts.is_tree = [&] {
    if (link_is_virtual.empty()) return false;
    std::map<std::string, int> child_times;
    for (const auto& e : edges) {
      if (!link_is_virtual.contains(e.parent) || !link_is_virtual.contains(e.child)) return false;
      ++child_times[e.child];
    }
    std::string seed_root;
    int roots = 0;
    for (const auto& [name, _] : link_is_virtual) {
      if (!child_times.contains(name)) {
        ++roots;
        seed_root = name;
      }
    }
    if (roots != 1) return false;
    for (const auto& [name, times] : child_times)
      if (times != 1) return false;
    // reachability
    std::set<std::string> reached{seed_root};
    bool grew = true;
    while (grew) {
      grew = false;
      for (const auto& e : edges)
        if (reached.contains(e.parent) && !reached.contains(e.child)) {
          reached.insert(e.child);
          grew = true;
        }
    }
    return reached.size() == link_is_virtual.size();
  }();

  return counts;
}

}  // namespace xsbridge
