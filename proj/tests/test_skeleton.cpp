#include <doctest.h>

#include <set>

#include "xsbridge/errors.hpp"
#include "xsbridge/skeleton.hpp"

using namespace xsbridge;

TEST_CASE("segment enumeration covers wire indices 1..23 exactly once") {
  std::set<std::string_view> names;
  for (uint32_t i = 1; i <= 23; ++i) {
    SegmentId s = segment_from_index(i);
    CHECK(segment_index(s) == i);
    names.insert(segment_name(s));
  }
  CHECK(names.size() == 23);
  CHECK(segment_from_index(1) == SegmentId::Pelvis);
  CHECK(segment_name(segment_from_index(1)) == "Pelvis");
  CHECK(segment_name(segment_from_index(2)) == "L5");
  // Walking the full enumeration, the 23rd and last segment is the left toe.
  CHECK(segment_from_index(23) == SegmentId::LeftToe);
  CHECK(segment_name(SegmentId::LeftToe) == "LeftToe");
}

TEST_CASE("segment_from_index rejects indices outside 1..23") {
  CHECK_THROWS_AS(segment_from_index(0), Error);
  CHECK_THROWS_AS(segment_from_index(24), Error);
  try {
    segment_from_index(0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OutOfRange);
  }
}

TEST_CASE("segment names round-trip through lookup") {
  for (uint32_t i = 1; i <= 23; ++i) {
    SegmentId s = segment_from_index(i);
    auto back = segment_from_name(segment_name(s));
    REQUIRE(back.has_value());
    CHECK(*back == s);
  }
  CHECK(!segment_from_name("Spine99").has_value());
}

TEST_CASE("parent relations follow the body chains") {
  CHECK(!parent_segment(SegmentId::Pelvis).has_value());
  CHECK(parent_segment(SegmentId::Head) == SegmentId::Neck);
  CHECK(parent_segment(SegmentId::RightHand) == SegmentId::RightForeArm);
  CHECK(parent_segment(SegmentId::L5) == SegmentId::Pelvis);
  CHECK(parent_segment(SegmentId::RightShoulder) == SegmentId::T8);
  CHECK(parent_segment(SegmentId::LeftShoulder) == SegmentId::T8);
  CHECK(parent_segment(SegmentId::RightUpperLeg) == SegmentId::Pelvis);
  CHECK(parent_segment(SegmentId::LeftToe) == SegmentId::LeftFoot);
}

TEST_CASE("joint definitions: 22 joints, every non-root segment is a child once") {
  const auto& joints = joint_definitions();
  CHECK(joints.size() == 22);

  std::set<SegmentId> children;
  for (const auto& j : joints) {
    CHECK(children.insert(j.child).second);  // no segment is a child twice
    CHECK(j.child != SegmentId::Pelvis);
  }
  CHECK(children.size() == 22);

  JointDefinition elbow = joint_definition(JointId::RightElbow);
  CHECK(elbow.parent == SegmentId::RightUpperArm);
  CHECK(elbow.child == SegmentId::RightForeArm);
  CHECK(joint_name(JointId::RightElbow) == "jRightElbow");
  CHECK(joint_name(JointId::L5S1) == "jL5S1");
  CHECK(joint_from_name("jLeftKnee") == JointId::LeftKnee);
}

TEST_CASE("topology is a tree rooted at the pelvis") {
  const auto& topo = default_topology();
  CHECK(topo.root == SegmentId::Pelvis);
  CHECK(topo.edges.size() == 22);

  // Traverse from the root; every segment must be visited exactly once.
  std::set<SegmentId> visited{SegmentId::Pelvis};
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& e : topo.edges)
      if (visited.contains(e.parent) && !visited.contains(e.child)) {
        visited.insert(e.child);
        grew = true;
      }
  }
  CHECK(visited.size() == 23);
}

TEST_CASE("chains match the body layout") {
  auto chain_ok = [](std::initializer_list<SegmentId> chain) {
    auto it = chain.begin();
    SegmentId parent = *it++;
    for (; it != chain.end(); ++it) {
      if (parent_segment(*it) != parent) return false;
      parent = *it;
    }
    return true;
  };
  CHECK(chain_ok({SegmentId::Pelvis, SegmentId::L5, SegmentId::L3, SegmentId::T12, SegmentId::T8,
                  SegmentId::Neck, SegmentId::Head}));
  CHECK(chain_ok({SegmentId::T8, SegmentId::RightShoulder, SegmentId::RightUpperArm,
                  SegmentId::RightForeArm, SegmentId::RightHand}));
  CHECK(chain_ok({SegmentId::T8, SegmentId::LeftShoulder, SegmentId::LeftUpperArm,
                  SegmentId::LeftForeArm, SegmentId::LeftHand}));
  CHECK(chain_ok({SegmentId::Pelvis, SegmentId::RightUpperLeg, SegmentId::RightLowerLeg,
                  SegmentId::RightFoot, SegmentId::RightToe}));
  CHECK(chain_ok({SegmentId::Pelvis, SegmentId::LeftUpperLeg, SegmentId::LeftLowerLeg,
                  SegmentId::LeftFoot, SegmentId::LeftToe}));
}

TEST_CASE("joint DoF names: 66 distinct, none collides with a segment name") {
  std::set<std::string> names;
  for (const auto& j : joint_definitions())
    for (DofAxis axis : {DofAxis::Z, DofAxis::X, DofAxis::Y})
      names.insert(joint_dof_name(j.joint, axis));
  CHECK(names.size() == 66);
  CHECK(names.contains("jL5S1_z"));
  CHECK(names.contains("jRightElbow_z"));
  for (uint32_t i = 1; i <= 23; ++i)
    CHECK(!names.contains(std::string(segment_name(segment_from_index(i)))));
}
