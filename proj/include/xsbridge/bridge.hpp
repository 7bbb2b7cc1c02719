#pragma once

#include <atomic>

#include "xsbridge/config.hpp"

namespace xsbridge {

struct BridgeReport {
  uint64_t frames_sunk = 0;
  uint64_t frames_incomplete = 0;
  uint64_t queue_overflow = 0;
  StreamStats stream;
};

/// Runs the full pipeline: URDF emission (when configured), receive loop,
/// frame mapping, and sinks. Blocks until a stop condition: the external
/// stop flag, run.max_frames, run.max_seconds, or a fatal error. Returns
/// one of the kExit* codes; diagnostics go to stderr, data to the sinks.
int run_bridge(const BridgeConfig& config, const std::atomic<bool>* external_stop = nullptr,
               BridgeReport* report_out = nullptr);

}  // namespace xsbridge
