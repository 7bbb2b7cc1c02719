#pragma once

#include <string>

#include "xsbridge/frame.hpp"
#include "xsbridge/mapper.hpp"

namespace xsbridge {

/// One frame as a single JSON line (no trailing newline): sample metadata,
/// 23 link states, the 66-entry joint state, 23 transforms, the center of
/// mass (null when absent) and raw markers. Throws IncompleteFrame when the
/// frame lacks poses or joint angles.
std::string frame_to_jsonl(const MotionFrame& frame, const Stamp& stamp,
                           const AxisRemap& remap = {});

}  // namespace xsbridge
