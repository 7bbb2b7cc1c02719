#pragma once

#include <array>
#include <string>

#include "xsbridge/geometry.hpp"
#include "xsbridge/skeleton.hpp"

namespace xsbridge {

/// Per-segment body dimensions. The offset of a segment is the position of
/// its origin in the parent segment's frame; the pelvis offset places the
/// root relative to the global origin (the subject's right heel).
struct SegmentScale {
  Vec3 offset_m{0.0, 0.0, 0.0};
  double mass_fraction = 0.0;

  bool operator==(const SegmentScale&) const = default;
};

struct ScaleData {
  std::array<SegmentScale, kSegmentCount> segments{};

  const SegmentScale& of(SegmentId s) const { return segments[segment_index(s) - 1]; }
  SegmentScale& of(SegmentId s) { return segments[segment_index(s) - 1]; }

  bool operator==(const ScaleData&) const = default;
};

/// Throws InvalidScale if an offset is non-finite, a mass fraction is
/// negative, or the fractions do not sum to 1 within 1e-9.
void validate_scale(const ScaleData& scale);

/// Anthropometric defaults scaled linearly with total height.
/// Accepts 0.5 m <= height_m <= 2.5 m; throws OutOfRange otherwise.
ScaleData default_scale(double height_m);

constexpr double kDefaultHeightM = 1.70;

/// All segment poses in the neutral standing pose: identity orientations,
/// positions accumulated down the tree, right heel on the global origin.
std::array<Pose, kSegmentCount> forward_npose(const ScaleData& scale);

/// Text form used by scale-info payloads: one line per segment,
/// "name ox oy oz mass_fraction". Parsing rejects unknown segment names and
/// missing segments (InvalidScale).
std::string scale_to_text(const ScaleData& scale);
ScaleData scale_from_text(const std::string& text);

}  // namespace xsbridge
