#pragma once

#include <array>
#include <cstddef>

namespace xsbridge {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

Vec3 operator+(const Vec3& a, const Vec3& b);
Vec3 operator-(const Vec3& a, const Vec3& b);
Vec3 operator*(double s, const Vec3& v);
Vec3 cross(const Vec3& a, const Vec3& b);
double dot(const Vec3& a, const Vec3& b);
double norm(const Vec3& v);
bool finite(const Vec3& v);

Mat3 mat_mul(const Mat3& a, const Mat3& b);
Vec3 mat_apply(const Mat3& m, const Vec3& v);
Mat3 mat_identity();

/// Scalar-first quaternion (w, x, y, z). Conversion routines keep the norm
/// within 1e-9 of one; raw wire values may carry float32 rounding until
/// normalized.
struct Quaternion {
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  bool operator==(const Quaternion&) const = default;
};

/// Joint rotation as intrinsic Z-X-Y Euler angles, radians.
/// z = flexion/extension, x = abduction/adduction, y = internal/external.
struct RotationZXY {
  double z = 0.0;
  double x = 0.0;
  double y = 0.0;

  bool operator==(const RotationZXY&) const = default;
};

struct Pose {
  Vec3 position{0.0, 0.0, 0.0};
  Quaternion orientation{};

  bool operator==(const Pose&) const = default;
};

double quat_norm(const Quaternion& q);
Quaternion quat_normalized(const Quaternion& q);
Quaternion quat_multiply(const Quaternion& a, const Quaternion& b);
Quaternion quat_conjugate(const Quaternion& q);
Mat3 quat_to_matrix(const Quaternion& q);
Quaternion matrix_to_quat(const Mat3& m);
Vec3 quat_rotate(const Quaternion& q, const Vec3& v);

/// q such that rotation(q) = Rz(r.z) * Rx(r.x) * Ry(r.y).
/// Throws NonFinite on NaN/inf input.
Quaternion euler_zxy_to_quaternion(const RotationZXY& r);

/// Inverse of euler_zxy_to_quaternion away from gimbal lock; within 1e-3 rad
/// of |x| = pi/2 the y angle is set to zero and the residual folded into z.
/// Throws NotNormalized when the input norm deviates from 1 by more than 1e-6.
RotationZXY quaternion_to_euler_zxy(const Quaternion& q);

constexpr double kDegPerRad = 57.29577951308232087679815481410517;
constexpr double kRadPerDeg = 0.017453292519943295769236907684886;

inline double deg_to_rad(double deg) { return deg * kRadPerDeg; }
inline double rad_to_deg(double rad) { return rad * kDegPerRad; }

}  // namespace xsbridge
