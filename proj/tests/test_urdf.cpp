#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "helpers.hpp"
#include "xsbridge/errors.hpp"
#include "xsbridge/urdf.hpp"
#include "xsbridge/xml.hpp"

using namespace xsbridge;
using namespace xsbridge::testing;

namespace {

/// Independent forward-kinematics oracle: walks the rendered XML text only,
/// accumulating joint origins at zero joint positions from a given root pose.
std::map<std::string, Vec3> fk_from_xml(const std::string& xml_text, const Vec3& root_position) {
  xml::Element robot = xml::parse_document(xml_text);
  struct JointEdge {
    std::string parent, child;
    Vec3 xyz{0, 0, 0};
    Vec3 rpy{0, 0, 0};
  };
  std::vector<JointEdge> edges;
  std::set<std::string> links, children;
  for (const auto* link : robot.children_named("link")) links.insert(*link->attribute("name"));
  for (const auto* joint : robot.children_named("joint")) {
    JointEdge e;
    e.parent = *joint->first_child("parent")->attribute("link");
    e.child = *joint->first_child("child")->attribute("link");
    if (const auto* origin = joint->first_child("origin")) {
      if (const auto* xyz = origin->attribute("xyz"))
        REQUIRE(std::sscanf(xyz->c_str(), "%lf %lf %lf", &e.xyz[0], &e.xyz[1], &e.xyz[2]) == 3);
      if (const auto* rpy = origin->attribute("rpy"))
        REQUIRE(std::sscanf(rpy->c_str(), "%lf %lf %lf", &e.rpy[0], &e.rpy[1], &e.rpy[2]) == 3);
    }
    edges.push_back(e);
    children.insert(e.child);
  }

  std::string root;
  for (const auto& name : links)
    if (!children.contains(name)) root = name;
  REQUIRE(!root.empty());

  // rpy is fixed-axis XYZ: R = Rz(yaw) Ry(pitch) Rx(roll).
  auto rpy_matrix = [](const Vec3& rpy) {
    double cr = std::cos(rpy[0]), sr = std::sin(rpy[0]);
    double cp = std::cos(rpy[1]), sp = std::sin(rpy[1]);
    double cy = std::cos(rpy[2]), sy = std::sin(rpy[2]);
    Mat3 rx{{{1, 0, 0}, {0, cr, -sr}, {0, sr, cr}}};
    Mat3 ry{{{cp, 0, sp}, {0, 1, 0}, {-sp, 0, cp}}};
    Mat3 rz{{{cy, -sy, 0}, {sy, cy, 0}, {0, 0, 1}}};
    return mat_mul(rz, mat_mul(ry, rx));
  };

  std::map<std::string, Vec3> position{{root, root_position}};
  std::map<std::string, Mat3> rotation{{root, mat_identity()}};
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& e : edges) {
      if (!position.contains(e.parent) || position.contains(e.child)) continue;
      position[e.child] = position[e.parent] + mat_apply(rotation[e.parent], e.xyz);
      rotation[e.child] = mat_mul(rotation[e.parent], rpy_matrix(e.rpy));
      grew = true;
    }
  }
  return position;
}

}  // namespace

TEST_CASE("generated document counts: 23 segment links, 44 virtual links, 66 revolute joints") {
  UrdfDocument doc = generate_urdf(default_topology(), default_scale(1.70), "human");
  CHECK(doc.segment_link_count() == 23);
  CHECK(doc.virtual_link_count() == 44);
  CHECK(doc.links.size() == 67);
  CHECK(doc.revolute_joint_count() == 66);
  CHECK(doc.joints.size() == 66);
}

TEST_CASE("joint names equal the 66 DoF names, so joint states drive the model directly") {
  UrdfDocument doc = generate_urdf(default_topology(), default_scale(1.70), "human");
  std::set<std::string> joint_names;
  for (const auto& j : doc.joints) joint_names.insert(j.name);
  CHECK(joint_names.size() == 66);
  for (const auto& def : joint_definitions())
    for (DofAxis axis : {DofAxis::Z, DofAxis::X, DofAxis::Y})
      CHECK(joint_names.contains(joint_dof_name(def.joint, axis)));

  for (const auto& j : doc.joints) {
    CHECK(j.type == "revolute");
    CHECK(std::abs(norm(j.axis) - 1.0) < 1e-12);
    CHECK(j.limit_lower == doctest::Approx(-2 * 3.14159265358979).epsilon(1e-12));
    CHECK(j.limit_upper == doctest::Approx(2 * 3.14159265358979).epsilon(1e-12));
  }
}

TEST_CASE("rendering is deterministic and validates back to the same counts") {
  UrdfDocument doc = generate_urdf(default_topology(), default_scale(1.70), "human");
  std::string xml1 = render_xml(doc);
  std::string xml2 = render_xml(doc);
  CHECK(xml1 == xml2);

  UrdfCounts counts = validate_urdf(xml1);
  CHECK(counts == UrdfCounts{23, 44, 66, true});
}

TEST_CASE("rendered default model matches the committed golden file") {
  UrdfDocument doc = generate_urdf(default_topology(), default_scale(kDefaultHeightM), "human");
  std::string xml = render_xml(doc);
  CHECK(xml == load_fixture_text("human_default.urdf"));
}

TEST_CASE("zero-length offsets are accepted with a warning") {
  ScaleData scale = default_scale(1.70);
  scale.of(SegmentId::L5).offset_m = {0, 0, 0};
  UrdfDocument doc = generate_urdf(default_topology(), scale, "human");
  bool warned = false;
  for (const auto& w : doc.warnings) warned = warned || w.find("jL5S1") != std::string::npos;
  CHECK(warned);
  CHECK(validate_urdf(render_xml(doc)).is_tree);
}

TEST_CASE("empty robot name renders legally but is warned about") {
  UrdfDocument doc = generate_urdf(default_topology(), default_scale(1.70), "");
  CHECK(!doc.warnings.empty());
  std::string xml = render_xml(doc);
  CHECK(xml.find("<robot name=\"\">") != std::string::npos);
  CHECK(validate_urdf(xml).is_tree);
}

TEST_CASE("invalid scale is rejected") {
  ScaleData scale = default_scale(1.70);
  scale.of(SegmentId::Head).offset_m[0] = std::nan("");
  try {
    generate_urdf(default_topology(), scale, "human");
    FAIL("expected InvalidScale");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidScale);
  }
}

TEST_CASE("validator is structural: cycles, truncation, foreign joint types") {
  SUBCASE("hand-written cycle is not a tree") {
    const char* cyclic = R"(<?xml version="1.0"?>
<robot name="loop">
  <link name="a"><inertial><mass value="1"/></inertial></link>
  <link name="b"><inertial><mass value="1"/></inertial></link>
  <joint name="ab" type="revolute"><parent link="a"/><child link="b"/></joint>
  <joint name="ba" type="revolute"><parent link="b"/><child link="a"/></joint>
</robot>)";
    UrdfCounts counts = validate_urdf(cyclic);
    CHECK(!counts.is_tree);
    CHECK(counts.revolute_joints == 2);
  }
  SUBCASE("truncated document is malformed") {
    std::string xml = render_xml(generate_urdf(default_topology(), default_scale(1.70), "human"));
    try {
      validate_urdf(xml.substr(0, xml.size() / 2));
      FAIL("expected MalformedXml");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::MalformedXml);
    }
  }
  SUBCASE("non-revolute, non-fixed joints are unsupported") {
    const char* planar = R"(<robot name="r">
  <link name="a"/>
  <link name="b"/>
  <joint name="j" type="planar"><parent link="a"/><child link="b"/></joint>
</robot>)";
    try {
      validate_urdf(planar);
      FAIL("expected UnsupportedJointType");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::UnsupportedJointType);
    }
  }
  SUBCASE("fixed joints are tolerated and not counted as revolute") {
    const char* fixed = R"(<robot name="r">
  <link name="a"><visual><geometry><sphere radius="0.1"/></geometry></visual></link>
  <link name="b"/>
  <joint name="j" type="fixed"><parent link="a"/><child link="b"/></joint>
</robot>)";
    UrdfCounts counts = validate_urdf(fixed);
    CHECK(counts.revolute_joints == 0);
    CHECK(counts.links == 1);
    CHECK(counts.virtual_links == 1);
    CHECK(counts.is_tree);
  }
}

TEST_CASE("FK of the rendered chain at zero angles reproduces the neutral pose (1e-9 m)") {
  ScaleData scale = default_scale(1.70);
  auto npose = forward_npose(scale);
  std::string xml = render_xml(generate_urdf(default_topology(), scale, "human"));

  Vec3 pelvis = npose[segment_index(SegmentId::Pelvis) - 1].position;
  auto fk = fk_from_xml(xml, pelvis);

  for (uint32_t i = 1; i <= 23; ++i) {
    SegmentId s = segment_from_index(i);
    const std::string name(segment_name(s));
    REQUIRE(fk.contains(name));
    Vec3 expected = npose[i - 1].position;
    for (int k = 0; k < 3; ++k) CHECK(std::abs(fk[name][k] - expected[k]) < 1e-9);
  }
}

TEST_CASE("physics-mass variant keeps virtual links classified as virtual") {
  UrdfOptions options;
  options.physics_mass = true;
  UrdfDocument doc = generate_urdf(default_topology(), default_scale(1.70), options);
  UrdfCounts counts = validate_urdf(render_xml(doc));
  CHECK(counts == UrdfCounts{23, 44, 66, true});
}

TEST_CASE("no-visuals variant still classifies segment links by inertial mass") {
  UrdfOptions options;
  options.with_visuals = false;
  UrdfDocument doc = generate_urdf(default_topology(), default_scale(1.70), options);
  UrdfCounts counts = validate_urdf(render_xml(doc));
  CHECK(counts == UrdfCounts{23, 44, 66, true});
}
