#include "xsbridge/scale.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "xsbridge/errors.hpp"

namespace xsbridge {

namespace {

struct DefaultRow {
  SegmentId segment;
  // Offset as a fraction of total height, global axes: x forward, y left, z up.
  Vec3 offset_fraction;
  double mass_weight;  // normalized over the table at construction
};

// Segment origin offsets follow common anthropometric proportions. The pelvis
// row is the root placement that puts the right heel on the global origin:
// it cancels the right-leg chain (hip lateral 0.052, leg drop 0.546) and adds
// the 0.039 ankle height back.
constexpr DefaultRow kDefaultRows[kSegmentCount] = {
    {SegmentId::Pelvis, {0.0, 0.052, 0.585}, 0.112},
    {SegmentId::L5, {0.0, 0.0, 0.050}, 0.048},
    {SegmentId::L3, {0.0, 0.0, 0.045}, 0.048},
    {SegmentId::T12, {0.0, 0.0, 0.048}, 0.048},
    {SegmentId::T8, {0.0, 0.0, 0.052}, 0.112},
    {SegmentId::Neck, {0.0, 0.0, 0.095}, 0.012},
    {SegmentId::Head, {0.0, 0.0, 0.055}, 0.057},
    {SegmentId::RightShoulder, {0.0, -0.020, 0.038}, 0.016},
    {SegmentId::RightUpperArm, {0.0, -0.109, 0.0}, 0.027},
    {SegmentId::RightForeArm, {0.0, 0.0, -0.188}, 0.016},
    {SegmentId::RightHand, {0.0, 0.0, -0.145}, 0.006},
    {SegmentId::LeftShoulder, {0.0, 0.020, 0.038}, 0.016},
    {SegmentId::LeftUpperArm, {0.0, 0.109, 0.0}, 0.027},
    {SegmentId::LeftForeArm, {0.0, 0.0, -0.188}, 0.016},
    {SegmentId::LeftHand, {0.0, 0.0, -0.145}, 0.006},
    {SegmentId::RightUpperLeg, {0.0, -0.052, -0.055}, 0.103},
    {SegmentId::RightLowerLeg, {0.0, 0.0, -0.245}, 0.047},
    {SegmentId::RightFoot, {0.0, 0.0, -0.246}, 0.013},
    {SegmentId::RightToe, {0.130, 0.0, -0.039}, 0.002},
    {SegmentId::LeftUpperLeg, {0.0, 0.052, -0.055}, 0.103},
    {SegmentId::LeftLowerLeg, {0.0, 0.0, -0.245}, 0.047},
    {SegmentId::LeftFoot, {0.0, 0.0, -0.246}, 0.013},
    {SegmentId::LeftToe, {0.130, 0.0, -0.039}, 0.002},
};

double default_mass_total() {
  double total = 0.0;
  for (const auto& row : kDefaultRows) total += row.mass_weight;
  return total;
}

}  // namespace

void validate_scale(const ScaleData& scale) {
  double sum = 0.0;
  for (int i = 0; i < kSegmentCount; ++i) {
    const auto& s = scale.segments[i];
    if (!finite(s.offset_m))
      fail(ErrorCode::InvalidScale,
           "non-finite offset for segment " + std::string(segment_name(static_cast<SegmentId>(i + 1))));
    if (!(s.mass_fraction >= 0.0))
      fail(ErrorCode::InvalidScale,
           "negative mass fraction for segment " + std::string(segment_name(static_cast<SegmentId>(i + 1))));
    sum += s.mass_fraction;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    fail(ErrorCode::InvalidScale, "mass fractions sum to " + std::to_string(sum));
}

ScaleData default_scale(double height_m) {
  if (!(height_m >= 0.5 && height_m <= 2.5))
    fail(ErrorCode::OutOfRange, "height " + std::to_string(height_m) + " outside 0.5..2.5 m");
  const double mass_total = default_mass_total();
  ScaleData scale;
  for (const auto& row : kDefaultRows) {
    auto& s = scale.of(row.segment);
    s.offset_m = {row.offset_fraction[0] * height_m, row.offset_fraction[1] * height_m,
                  row.offset_fraction[2] * height_m};
    s.mass_fraction = row.mass_weight / mass_total;
  }
  return scale;
}

std::array<Pose, kSegmentCount> forward_npose(const ScaleData& scale) {
  std::array<Pose, kSegmentCount> poses{};
  poses[segment_index(SegmentId::Pelvis) - 1].position = scale.of(SegmentId::Pelvis).offset_m;
  // Edges are listed parent-first, so one pass settles every segment.
  for (const auto& edge : joint_definitions()) {
    const Vec3& parent_pos = poses[segment_index(edge.parent) - 1].position;
    poses[segment_index(edge.child) - 1].position = parent_pos + scale.of(edge.child).offset_m;
  }
  return poses;
}

std::string scale_to_text(const ScaleData& scale) {
  std::string out;
  char line[160];
  for (int i = 0; i < kSegmentCount; ++i) {
    const auto& s = scale.segments[i];
    std::snprintf(line, sizeof line, "%s %.17g %.17g %.17g %.17g\n",
                  std::string(segment_name(static_cast<SegmentId>(i + 1))).c_str(), s.offset_m[0],
                  s.offset_m[1], s.offset_m[2], s.mass_fraction);
    out += line;
  }
  return out;
}

ScaleData scale_from_text(const std::string& text) {
  ScaleData scale;
  std::array<bool, kSegmentCount> seen{};
  std::istringstream stream(text);
  std::string line;
  while (std::getline(stream, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string name;
    double ox, oy, oz, mass;
    if (!(fields >> name >> ox >> oy >> oz >> mass))
      fail(ErrorCode::InvalidScale, "bad scale line: " + line);
    auto seg = segment_from_name(name);
    if (!seg) fail(ErrorCode::InvalidScale, "unknown segment name: " + name);
    scale.of(*seg) = {{ox, oy, oz}, mass};
    seen[segment_index(*seg) - 1] = true;
  }
  for (int i = 0; i < kSegmentCount; ++i)
    if (!seen[i])
      fail(ErrorCode::InvalidScale,
           "missing segment " + std::string(segment_name(static_cast<SegmentId>(i + 1))));
  return scale;
}

}  // namespace xsbridge
