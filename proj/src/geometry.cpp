#include "xsbridge/geometry.hpp"

#include <cmath>

#include "xsbridge/errors.hpp"

namespace xsbridge {

Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 operator*(double s, const Vec3& v) { return {s * v[0], s * v[1], s * v[2]}; }

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

bool finite(const Vec3& v) {
  return std::isfinite(v[0]) && std::isfinite(v[1]) && std::isfinite(v[2]);
}

Mat3 mat_mul(const Mat3& a, const Mat3& b) {
  Mat3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
  return out;
}

Vec3 mat_apply(const Mat3& m, const Vec3& v) {
  return {m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
          m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
          m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2]};
}

Mat3 mat_identity() { return {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}; }

double quat_norm(const Quaternion& q) {
  return std::sqrt(q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z);
}

Quaternion quat_normalized(const Quaternion& q) {
  double n = quat_norm(q);
  if (!(n > 0.0) || !std::isfinite(n)) fail(ErrorCode::NotNormalized, "zero or non-finite quaternion");
  return {q.w / n, q.x / n, q.y / n, q.z / n};
}

Quaternion quat_multiply(const Quaternion& a, const Quaternion& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

Quaternion quat_conjugate(const Quaternion& q) { return {q.w, -q.x, -q.y, -q.z}; }

Mat3 quat_to_matrix(const Quaternion& q) {
  const double w = q.w, x = q.x, y = q.y, z = q.z;
  return {{{1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)},
           {2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)},
           {2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)}}};
}

Quaternion matrix_to_quat(const Mat3& m) {
  Quaternion q;
  double trace = m[0][0] + m[1][1] + m[2][2];
  if (trace > 0.0) {
    double s = std::sqrt(trace + 1.0) * 2.0;
    q.w = 0.25 * s;
    q.x = (m[2][1] - m[1][2]) / s;
    q.y = (m[0][2] - m[2][0]) / s;
    q.z = (m[1][0] - m[0][1]) / s;
  } else if (m[0][0] > m[1][1] && m[0][0] > m[2][2]) {
    double s = std::sqrt(1.0 + m[0][0] - m[1][1] - m[2][2]) * 2.0;
    q.w = (m[2][1] - m[1][2]) / s;
    q.x = 0.25 * s;
    q.y = (m[0][1] + m[1][0]) / s;
    q.z = (m[0][2] + m[2][0]) / s;
  } else if (m[1][1] > m[2][2]) {
    double s = std::sqrt(1.0 + m[1][1] - m[0][0] - m[2][2]) * 2.0;
    q.w = (m[0][2] - m[2][0]) / s;
    q.x = (m[0][1] + m[1][0]) / s;
    q.y = 0.25 * s;
    q.z = (m[1][2] + m[2][1]) / s;
  } else {
    double s = std::sqrt(1.0 + m[2][2] - m[0][0] - m[1][1]) * 2.0;
    q.w = (m[1][0] - m[0][1]) / s;
    q.x = (m[0][2] + m[2][0]) / s;
    q.y = (m[1][2] + m[2][1]) / s;
    q.z = 0.25 * s;
  }
  return quat_normalized(q);
}

Vec3 quat_rotate(const Quaternion& q, const Vec3& v) {
  // v' = v + 2*qv x (qv x v + w*v)
  Vec3 qv{q.x, q.y, q.z};
  Vec3 t = cross(qv, cross(qv, v) + q.w * v);
  return v + 2.0 * t;
}

Quaternion euler_zxy_to_quaternion(const RotationZXY& r) {
  if (!std::isfinite(r.z) || !std::isfinite(r.x) || !std::isfinite(r.y))
    fail(ErrorCode::NonFinite, "euler angles must be finite");
  const Quaternion qz{std::cos(r.z / 2), 0.0, 0.0, std::sin(r.z / 2)};
  const Quaternion qx{std::cos(r.x / 2), std::sin(r.x / 2), 0.0, 0.0};
  const Quaternion qy{std::cos(r.y / 2), 0.0, std::sin(r.y / 2), 0.0};
  return quat_normalized(quat_multiply(quat_multiply(qz, qx), qy));
}

RotationZXY quaternion_to_euler_zxy(const Quaternion& q) {
  double n = quat_norm(q);
  if (std::abs(n - 1.0) > 1e-6)
    fail(ErrorCode::NotNormalized, "quaternion norm deviates from 1 by more than 1e-6");
  Quaternion u = quat_normalized(q);
  Mat3 m = quat_to_matrix(u);

  RotationZXY r;
  double sx = m[2][1];
  if (sx > 1.0) sx = 1.0;
  if (sx < -1.0) sx = -1.0;
  r.x = std::asin(sx);

  constexpr double kHalfPi = 1.5707963267948966;
  if (std::abs(r.x) > kHalfPi - 1e-3) {
    // Gimbal lock: y is indistinguishable from z, fold everything into z.
    r.y = 0.0;
    r.z = std::atan2(m[1][0], m[0][0]);
  } else {
    r.z = std::atan2(-m[0][1], m[1][1]);
    r.y = std::atan2(-m[2][0], m[2][2]);
  }
  return r;
}

}  // namespace xsbridge
