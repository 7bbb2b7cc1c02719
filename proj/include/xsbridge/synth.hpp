#pragma once

#include <vector>

#include "xsbridge/frame.hpp"
#include "xsbridge/scale.hpp"

namespace xsbridge {

struct SinusoidalMotion {
  JointId joint = JointId::RightElbow;
  DofAxis axis = DofAxis::Z;
  double amplitude_rad = 0.5;
  double frequency_hz = 0.5;
};

/// Synthetic motion description. Amplitudes are capped below pi/2 - 1e-2 per
/// joint axis so Euler roundtrips stay away from gimbal lock.
struct MotionScript {
  enum class Kind { StaticNPose, Sinusoidal, Composite };
  Kind kind = Kind::StaticNPose;
  std::vector<SinusoidalMotion> motions;
  ScaleData scale;
  uint8_t character_id = 0;

  static MotionScript npose(ScaleData scale, uint8_t character_id = 0);
  static MotionScript sinusoidal(SinusoidalMotion motion, ScaleData scale,
                                 uint8_t character_id = 0);
  static MotionScript composite(std::vector<SinusoidalMotion> motions, ScaleData scale,
                                uint8_t character_id = 0);
};

/// Throws OutOfRange when summed amplitudes reach the gimbal-lock guard.
void validate_script(const MotionScript& script);

struct JointMotionSample {
  RotationZXY angle;         // radians
  RotationZXY rate;          // rad/s
  RotationZXY acceleration;  // rad/s^2
};

/// Scripted joint trajectories at time t, exact doubles.
std::array<JointMotionSample, kJointCount> script_joint_motion(const MotionScript& script,
                                                               double t_s);

struct SegmentKinematics {
  Vec3 position{0, 0, 0};
  Quaternion orientation;
  Vec3 velocity{0, 0, 0};
  Vec3 acceleration{0, 0, 0};
  Vec3 angular_velocity{0, 0, 0};      // rad/s, global frame
  Vec3 angular_acceleration{0, 0, 0};  // rad/s^2, global frame
};

/// Forward kinematics with analytic first and second derivatives, propagated
/// from the pelvis. Unquantized doubles; synth_frame rounds these through
/// the wire's float32 before building the frame.
std::array<SegmentKinematics, kSegmentCount> synth_kinematics(const MotionScript& script,
                                                              double t_s);

/// Complete frame for one instant: poses, linear and angular kinematics,
/// joint angles (wire degrees), markers, and the center of mass as the
/// mass-fraction-weighted mean of the (wire-precision) segment positions.
/// Every stored value is exactly representable in the wire's float32, so a
/// serialize/parse/assemble roundtrip reproduces the frame bit-exactly.
MotionFrame synth_frame(const MotionScript& script, double t_s, uint32_t sample_counter,
                        uint32_t time_code_ms);
MotionFrame synth_frame(const MotionScript& script, double t_s);

/// Splits one frame into datagram sequences, one per payload kind present,
/// chunked so no payload exceeds max_payload_bytes. Indices restart per kind
/// and the final chunk of each kind carries the last flag. Throws
/// PayloadTooSmall when a single item cannot fit.
std::vector<Datagram> frame_to_datagrams(const MotionFrame& frame, size_t max_payload_bytes);

constexpr size_t kDefaultMaxPayloadBytes = 1400;

}  // namespace xsbridge
