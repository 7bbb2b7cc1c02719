#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "xsbridge/errors.hpp"
#include "xsbridge/mapper.hpp"
#include "xsbridge/synth.hpp"

using namespace xsbridge;

namespace {

constexpr double kPi = 3.14159265358979323846;

MotionFrame complete_frame(uint32_t sample = 0) {
  MotionScript script = MotionScript::npose(default_scale(1.70));
  return synth_frame(script, 0.0, sample, 0);
}

MotionFrame random_frame(uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<float> val(-20.f, 20.f);
  MotionFrame f = complete_frame();
  for (int i = 0; i < kSegmentCount; ++i) {
    f.poses[i]->position_m = {val(rng), val(rng), val(rng)};
    f.linear[i]->velocity_mps = {val(rng), val(rng), val(rng)};
    f.angular[i]->angular_velocity_dps = {val(rng), val(rng), val(rng)};
  }
  for (int j = 0; j < kJointCount; ++j) f.joint_angles_deg[j] = {val(rng), val(rng), val(rng)};
  return f;
}

const Stamp kStamp{123456789, 42};

}  // namespace

TEST_CASE("neutral-pose frame maps to 23 identity link states") {
  LinkStateMessage msg = map_link_states(complete_frame(), kStamp);
  CHECK(msg.links.size() == 23);
  std::set<std::string> names;
  for (const auto& link : msg.links) {
    names.insert(link.name);
    CHECK(link.pose.orientation.w == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(link.pose.orientation.x) < 1e-12);
    CHECK(std::abs(quat_norm(link.pose.orientation) - 1.0) <= 1e-9);
  }
  CHECK(names.size() == 23);
  CHECK(names.contains("Pelvis"));
  CHECK(names.contains("LeftToe"));
  CHECK(msg.stamp == kStamp);
}

TEST_CASE("angular wire degrees become radians") {
  MotionFrame f = complete_frame();
  f.angular[0]->angular_velocity_dps = {0.0, 0.0, 180.0};
  LinkStateMessage msg = map_link_states(f, kStamp);
  CHECK(msg.links[0].twist.angular_radps[2] == doctest::Approx(kPi).epsilon(1e-12));
}

TEST_CASE("positions pass through bit-exactly") {
  MotionFrame f = random_frame(31);
  LinkStateMessage msg = map_link_states(f, kStamp);
  for (int i = 0; i < kSegmentCount; ++i) {
    CHECK(msg.links[i].pose.position == f.poses[i]->position_m);
    CHECK(msg.links[i].twist.linear_mps == f.linear[i]->velocity_mps);
    CHECK(msg.links[i].has_linear_kinematics);
    CHECK(msg.links[i].has_angular_kinematics);
  }
}

TEST_CASE("missing kinematics categories are zero-filled and flagged") {
  MotionFrame f = complete_frame();
  for (int i = 0; i < kSegmentCount; ++i) {
    f.linear[i].reset();
    f.angular[i].reset();
  }
  LinkStateMessage msg = map_link_states(f, kStamp);
  for (const auto& link : msg.links) {
    CHECK(!link.has_linear_kinematics);
    CHECK(!link.has_angular_kinematics);
    CHECK(link.twist.linear_mps == Vec3{0, 0, 0});
    CHECK(link.accel.angular_radps2 == Vec3{0, 0, 0});
  }
}

TEST_CASE("missing segment pose raises IncompleteFrame naming the segment") {
  MotionFrame f = complete_frame();
  f.poses[segment_index(SegmentId::T8) - 1].reset();
  try {
    map_link_states(f, kStamp);
    FAIL("expected IncompleteFrame");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IncompleteFrame);
    CHECK(std::string(e.what()).find("T8") != std::string::npos);
  }
}

TEST_CASE("joint state: 66 parallel entries in joint-definition x (z,x,y) order") {
  JointStateMessage msg = map_joint_state(complete_frame(), kStamp);
  CHECK(msg.names.size() == 66);
  CHECK(msg.positions_rad.size() == 66);
  for (double p : msg.positions_rad) CHECK(p == 0.0);

  std::set<std::string> unique(msg.names.begin(), msg.names.end());
  CHECK(unique.size() == 66);
  CHECK(msg.names[0] == "jL5S1_z");
  CHECK(msg.names[1] == "jL5S1_x");
  CHECK(msg.names[2] == "jL5S1_y");

  // Names follow joint_dof_name exactly.
  const auto& defs = joint_definitions();
  for (int j = 0; j < kJointCount; ++j)
    for (int a = 0; a < 3; ++a)
      CHECK(msg.names[j * 3 + a] == joint_dof_name(defs[j].joint, static_cast<DofAxis>(a)));
}

TEST_CASE("a 90-degree elbow flexion maps to pi/2 at jRightElbow_z") {
  MotionFrame f = complete_frame();
  f.joint_angles_deg[static_cast<size_t>(JointId::RightElbow)] = {90.0, 0.0, 0.0};
  JointStateMessage msg = map_joint_state(f, kStamp);
  size_t idx = 0;
  while (msg.names[idx] != "jRightElbow_z") ++idx;
  CHECK(msg.positions_rad[idx] == doctest::Approx(kPi / 2).epsilon(1e-12));
}

TEST_CASE("missing joint raises IncompleteFrame listing it") {
  MotionFrame f = complete_frame();
  f.joint_angles_deg[static_cast<size_t>(JointId::LeftKnee)].reset();
  try {
    map_joint_state(f, kStamp);
    FAIL("expected IncompleteFrame");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IncompleteFrame);
    CHECK(std::string(e.what()).find("jLeftKnee") != std::string::npos);
  }
}

TEST_CASE("doubling every joint angle doubles every mapped position exactly") {
  MotionFrame f = random_frame(77);
  MotionFrame doubled = f;
  for (auto& a : doubled.joint_angles_deg)
    *a = {2.0 * (*a)[0], 2.0 * (*a)[1], 2.0 * (*a)[2]};
  JointStateMessage base = map_joint_state(f, kStamp);
  JointStateMessage twice = map_joint_state(doubled, kStamp);
  for (size_t i = 0; i < base.positions_rad.size(); ++i)
    CHECK(twice.positions_rad[i] == 2.0 * base.positions_rad[i]);
}

TEST_CASE("transforms mirror the link states one to one") {
  MotionFrame f = random_frame(5);
  LinkStateMessage links = map_link_states(f, kStamp);
  auto transforms = map_transforms(f, kStamp);
  REQUIRE(transforms.size() == 23);
  std::set<std::string> children;
  for (int i = 0; i < kSegmentCount; ++i) {
    CHECK(transforms[i].parent_frame == "world");
    CHECK(transforms[i].child_frame == links.links[i].name);
    CHECK(transforms[i].translation_m == links.links[i].pose.position);
    CHECK(transforms[i].rotation == links.links[i].pose.orientation);
    children.insert(transforms[i].child_frame);
  }
  CHECK(children.size() == 23);
}

TEST_CASE("center of mass passes through when present, absent otherwise") {
  MotionFrame f = complete_frame();
  f.com_m = Vec3{0.0, 0.1, 0.9};
  auto com = map_com(f, kStamp);
  REQUIRE(com.has_value());
  CHECK(com->position_m == Vec3{0.0, 0.1, 0.9});

  f.com_m.reset();
  CHECK(!map_com(f, kStamp).has_value());
}

TEST_CASE("mapping is stateless: identical output on repeated calls") {
  MotionFrame f = random_frame(1234);
  CHECK(map_link_states(f, kStamp) == map_link_states(f, kStamp));
  CHECK(map_joint_state(f, kStamp) == map_joint_state(f, kStamp));
  CHECK(map_transforms(f, kStamp) == map_transforms(f, kStamp));
}

TEST_CASE("axis remap: permutations apply to vectors and orientations") {
  CHECK(parse_axis_remap("identity").is_identity());
  CHECK(parse_axis_remap("x,y,z").is_identity());

  // Output x := old y, output y := old -x (a +90 degree yaw of the frame).
  AxisRemap remap = parse_axis_remap("y,-x,z");
  Vec3 v = remap.apply(Vec3{1.0, 2.0, 3.0});
  CHECK(v[0] == 2.0);
  CHECK(v[1] == -1.0);
  CHECK(v[2] == 3.0);
  CHECK(std::abs(quat_norm(remap.apply(Quaternion{1, 0, 0, 0})) - 1.0) < 1e-12);

  CHECK_THROWS_AS(parse_axis_remap("x,y,-z"), Error);  // reflection
  CHECK_THROWS_AS(parse_axis_remap("x,y"), Error);
  CHECK_THROWS_AS(parse_axis_remap("a,b,c"), Error);

  MotionFrame f = random_frame(8);
  LinkStateMessage mapped = map_link_states(f, kStamp, remap);
  CHECK(mapped.links[0].pose.position[0] == f.poses[0]->position_m[1]);
  CHECK(mapped.links[0].pose.position[1] == -f.poses[0]->position_m[0]);
}
