#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "helpers.hpp"
#include "xsbridge/errors.hpp"
#include "xsbridge/synth.hpp"

using namespace xsbridge;
using namespace xsbridge::testing;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

MotionScript elbow_script(double amplitude = 0.5, double freq = 0.5) {
  return MotionScript::sinusoidal({JointId::RightElbow, DofAxis::Z, amplitude, freq},
                                  default_scale(1.70));
}

}  // namespace

TEST_CASE("static N-pose: zero angles, identity orientations, zero rates at any t") {
  MotionScript script = MotionScript::npose(default_scale(1.70));
  for (double t : {0.0, 0.25, 3.0}) {
    MotionFrame f = synth_frame(script, t);
    for (const auto& a : f.joint_angles_deg) {
      REQUIRE(a.has_value());
      CHECK(*a == Vec3{0, 0, 0});
    }
    for (const auto& p : f.poses) {
      REQUIRE(p.has_value());
      CHECK(p->orientation == Quaternion{1, 0, 0, 0});
    }
    for (const auto& k : f.angular) {
      REQUIRE(k.has_value());
      CHECK(k->angular_velocity_dps == Vec3{0, 0, 0});
    }
  }
}

TEST_CASE("sinusoidal elbow at t=0: zero angle, angular rate amplitude*2*pi*f") {
  const double amplitude = 0.5, freq = 0.5;
  auto kin = synth_kinematics(elbow_script(amplitude, freq), 0.0);
  auto joints = script_joint_motion(elbow_script(amplitude, freq), 0.0);

  const auto& elbow = joints[static_cast<size_t>(JointId::RightElbow)];
  CHECK(elbow.angle.z == 0.0);
  CHECK(elbow.rate.z == doctest::Approx(amplitude * kTwoPi * freq).epsilon(1e-12));

  // The forearm's angular speed equals the joint rate; its parent is static.
  const auto& forearm = kin[segment_index(SegmentId::RightForeArm) - 1];
  CHECK(norm(forearm.angular_velocity) == doctest::Approx(amplitude * kTwoPi * freq).epsilon(1e-12));
  // Everything upstream of the elbow does not move.
  const auto& upper_arm = kin[segment_index(SegmentId::RightUpperArm) - 1];
  CHECK(norm(upper_arm.angular_velocity) == 0.0);
}

TEST_CASE("center of mass equals the brute-force weighted mean of frame positions") {
  MotionScript script = elbow_script(0.8, 1.3);
  for (double t : {0.0, 0.1, 0.37, 2.0}) {
    MotionFrame f = synth_frame(script, t);
    REQUIRE(f.com_m.has_value());
    // Independent accumulation at extended precision, then wire rounding.
    long double acc[3] = {0, 0, 0};
    for (int i = 0; i < kSegmentCount; ++i) {
      long double w = script.scale.segments[i].mass_fraction;
      for (int k = 0; k < 3; ++k) acc[k] += w * static_cast<long double>(f.poses[i]->position_m[k]);
    }
    for (int k = 0; k < 3; ++k) {
      double oracle = static_cast<double>(static_cast<float>(static_cast<double>(acc[k])));
      CHECK(std::abs((*f.com_m)[k] - oracle) <= 1e-12);
    }
  }
}

TEST_CASE("uniform mass fractions: center of mass equals the plain mean") {
  ScaleData scale = default_scale(1.70);
  for (auto& s : scale.segments) s.mass_fraction = 1.0 / kSegmentCount;
  MotionScript script = MotionScript::sinusoidal({JointId::LeftHip, DofAxis::X, 0.3, 0.8}, scale);
  MotionFrame f = synth_frame(script, 0.4);
  for (int k = 0; k < 3; ++k) {
    double mean = 0;
    for (int i = 0; i < kSegmentCount; ++i) mean += f.poses[i]->position_m[k];
    mean /= kSegmentCount;
    CHECK((*f.com_m)[k] == doctest::Approx(mean).epsilon(1e-6));
  }
}

TEST_CASE("analytic derivatives agree with central finite differences (h=1e-4, tol 1e-5)") {
  std::vector<MotionScript> scripts = {
      elbow_script(0.6, 0.7),
      MotionScript::composite({{JointId::RightShoulder, DofAxis::X, 0.4, 0.9},
                               {JointId::LeftKnee, DofAxis::Z, 0.7, 0.3},
                               {JointId::T9T8, DofAxis::Y, 0.2, 1.1}},
                              default_scale(1.70)),
  };
  const double h = 1e-4;
  for (const auto& script : scripts) {
    for (double t : {0.31, 1.07}) {
      auto k0 = synth_kinematics(script, t);
      auto kp = synth_kinematics(script, t + h);
      auto km = synth_kinematics(script, t - h);

      for (int i = 0; i < kSegmentCount; ++i) {
        // Linear velocity and acceleration against position differences.
        for (int a = 0; a < 3; ++a) {
          double fd_v = (kp[i].position[a] - km[i].position[a]) / (2 * h);
          CHECK(std::abs(fd_v - k0[i].velocity[a]) < 1e-5);
          double fd_acc = (kp[i].velocity[a] - km[i].velocity[a]) / (2 * h);
          CHECK(std::abs(fd_acc - k0[i].acceleration[a]) < 1e-5);
          double fd_alpha = (kp[i].angular_velocity[a] - km[i].angular_velocity[a]) / (2 * h);
          CHECK(std::abs(fd_alpha - k0[i].angular_acceleration[a]) < 1e-5);
        }

        // Angular velocity against the rotation matrix derivative:
        // W = dR/dt * R^T must equal [omega]x.
        Mat3 rp = quat_to_matrix(kp[i].orientation);
        Mat3 rm = quat_to_matrix(km[i].orientation);
        Mat3 r0 = quat_to_matrix(k0[i].orientation);
        Mat3 rdot{};
        for (int r = 0; r < 3; ++r)
          for (int c = 0; c < 3; ++c) rdot[r][c] = (rp[r][c] - rm[r][c]) / (2 * h);
        Mat3 w{};
        for (int r = 0; r < 3; ++r)
          for (int c = 0; c < 3; ++c)
            w[r][c] = rdot[r][0] * r0[c][0] + rdot[r][1] * r0[c][1] + rdot[r][2] * r0[c][2];
        Vec3 omega_fd{w[2][1], w[0][2], w[1][0]};
        for (int a = 0; a < 3; ++a)
          CHECK(std::abs(omega_fd[a] - k0[i].angular_velocity[a]) < 1e-5);
      }
    }
  }
}

TEST_CASE("script validation: gimbal guard on summed amplitudes") {
  CHECK_THROWS_AS(elbow_script(1.57, 0.5), Error);
  CHECK_THROWS_AS(MotionScript::composite({{JointId::RightElbow, DofAxis::Z, 0.9, 0.5},
                                           {JointId::RightElbow, DofAxis::Z, 0.8, 0.2}},
                                          default_scale(1.70)),
                  Error);
  CHECK_NOTHROW(elbow_script(1.55, 0.5));
}

TEST_CASE("frame_to_datagrams: a full frame fits one datagram per kind at 1400 bytes") {
  MotionFrame f = synth_frame(elbow_script(), 0.5);
  auto datagrams = frame_to_datagrams(f, 1400);
  // poses, markers, joint angles, linear, angular, com
  CHECK(datagrams.size() == 6);
  for (const auto& d : datagrams) {
    CHECK(d.header.datagram_index == 0);
    CHECK(d.header.is_last_datagram);
    CHECK(d.header.sample_counter == f.sample_counter);
    CHECK(d.header.payload_size_bytes <= 1400);
    CHECK(d.header.body_segment_count == 23);
  }
  // The largest kind: 23 angular items at 44 bytes.
  auto biggest = std::max_element(datagrams.begin(), datagrams.end(),
                                  [](const Datagram& a, const Datagram& b) {
                                    return a.header.payload_size_bytes < b.header.payload_size_bytes;
                                  });
  CHECK(biggest->header.payload_size_bytes == 23 * 44);
}

TEST_CASE("frame_to_datagrams: 300-byte limit splits poses into ceil(23/9) datagrams") {
  MotionFrame f = synth_frame(elbow_script(), 0.5);
  auto datagrams = frame_to_datagrams(f, 300);
  std::vector<const Datagram*> poses;
  for (const auto& d : datagrams)
    if (d.header.kind() == PayloadKind::PoseQuaternion) poses.push_back(&d);
  REQUIRE(poses.size() == 3);  // 9 + 9 + 5 items
  CHECK(poses[0]->header.item_count == 9);
  CHECK(poses[0]->header.payload_size_bytes == 288);
  CHECK(poses[1]->header.item_count == 9);
  CHECK(poses[2]->header.item_count == 5);
  CHECK(!poses[0]->header.is_last_datagram);
  CHECK(!poses[1]->header.is_last_datagram);
  CHECK(poses[2]->header.is_last_datagram);
  CHECK(poses[0]->header.datagram_index == 0);
  CHECK(poses[1]->header.datagram_index == 1);
  CHECK(poses[2]->header.datagram_index == 2);
}

TEST_CASE("frame_to_datagrams: limits below one item are rejected") {
  MotionFrame f = synth_frame(elbow_script(), 0.5);
  try {
    frame_to_datagrams(f, 40);  // angular kinematics items need 44 bytes
    FAIL("expected PayloadTooSmall");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PayloadTooSmall);
  }
}

TEST_CASE("shuffled datagrams reassemble into the original frame, bit-exact") {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    std::uniform_real_distribution<double> amp(0.05, 1.5);
    std::uniform_real_distribution<double> freq(0.1, 3.0);
    std::uniform_real_distribution<double> time(0.0, 5.0);
    std::uniform_int_distribution<size_t> payload(44, 2000);

    MotionScript script = MotionScript::sinusoidal(
        {static_cast<JointId>(trial % kJointCount), static_cast<DofAxis>(trial % 3), amp(rng),
         freq(rng)},
        default_scale(1.70));
    MotionFrame original = synth_frame(script, time(rng), 42, 1000);
    if (trial % 3 == 0) {
      original.meta_text = "name=synthetic";
      original.scale_text = scale_to_text(script.scale);
    }

    auto datagrams = frame_to_datagrams(original, payload(rng));
    std::shuffle(datagrams.begin(), datagrams.end(), rng);

    FrameAssembler assembler;
    std::vector<MotionFrame> frames;
    for (const auto& d : datagrams) {
      // Serialize/parse on the way in: the full wire path.
      Datagram parsed = parse_datagram(serialize_datagram(d));
      for (auto& f : assembler.feed(parsed)) frames.push_back(std::move(f));
    }
    for (auto& f : assembler.flush()) frames.push_back(std::move(f));

    REQUIRE(frames.size() == 1);
    CHECK(frames[0] == original);
  }
}

TEST_CASE("synth frames carry consecutive metadata") {
  MotionFrame f = synth_frame(elbow_script(), 1.5, 90, 1500);
  CHECK(f.sample_counter == 90);
  CHECK(f.time_code_ms == 1500);
  CHECK(f.markers.size() == 3);
  CHECK(synth_frame(elbow_script(), 1.5, 90, 1500) == f);  // deterministic
}

TEST_CASE("negative time is rejected") {
  CHECK_THROWS_AS(synth_kinematics(elbow_script(), -0.1), Error);
}
