#include "xsbridge/assembler.hpp"

#include <algorithm>
#include <chrono>

namespace xsbridge {

namespace {

uint64_t steady_now_us() {
  return static_cast<uint64_t>(std::chrono::duration_cast<std::chrono::microseconds>(
                                   std::chrono::steady_clock::now().time_since_epoch())
                                   .count());
}

}  // namespace

bool FrameAssembler::PendingKind::complete() const {
  if (last_index < 0) return false;
  if (parts.size() != static_cast<size_t>(last_index) + 1) return false;
  // Keys are sorted; a full 0..last run means rbegin is the last index.
  return static_cast<int>(parts.rbegin()->first) == last_index;
}

FrameAssembler::FrameAssembler(AssemblerOptions options) : options_(std::move(options)) {
  if (!options_.now_us) options_.now_us = steady_now_us;
  if (options_.capacity == 0) options_.capacity = 1;
}

std::vector<MotionFrame> FrameAssembler::feed(const Datagram& d) {
  ++stats_.datagrams_received;

  if (!d.header.kind()) {
    ++stats_.unknown_kind_count;
    return {};
  }

  if (options_.character_filter) {
    if (d.header.character_id != *options_.character_filter) {
      ++stats_.filtered_character;
      return {};
    }
  } else if (locked_character_) {
    if (d.header.character_id != *locked_character_) {
      ++stats_.filtered_character;
      return {};
    }
  } else {
    locked_character_ = d.header.character_id;
  }

  const uint32_t s = d.header.sample_counter;
  if (last_finalized_ && !sample_before(*last_finalized_, s)) {
    ++stats_.stale_discarded;
    return {};
  }

  auto& kind_state = pending_[s].kinds[d.header.kind_code];
  if (!kind_state.parts.contains(d.header.datagram_index)) {
    kind_state.parts.emplace(d.header.datagram_index, d);
    if (d.header.is_last_datagram) kind_state.last_index = d.header.datagram_index;
  }

  if (!max_seen_ || sample_before(*max_seen_, s)) max_seen_ = s;

  std::vector<MotionFrame> out;
  auto finalize_ready = [&] {
    for (;;) {
      // Oldest pending sample in wraparound-aware order.
      std::optional<uint32_t> oldest;
      for (const auto& [sample, _] : pending_)
        if (!oldest || sample_before(sample, *oldest)) oldest = sample;
      if (!oldest) return;

      bool late = *max_seen_ - *oldest >= options_.lateness_samples;
      bool over_capacity = pending_.size() > options_.capacity;
      if (!late && !over_capacity) return;

      if (auto frame = finalize(*oldest)) out.push_back(std::move(*frame));
    }
  };
  finalize_ready();
  return out;
}

std::optional<MotionFrame> FrameAssembler::finalize(uint32_t sample) {
  auto node = pending_.extract(sample);
  last_finalized_ = sample;
  if (node.empty()) return std::nullopt;

  const PendingSample& ps = node.mapped();
  bool all_complete = !ps.kinds.empty() &&
                      std::all_of(ps.kinds.begin(), ps.kinds.end(),
                                  [](const auto& kv) { return kv.second.complete(); });
  if (!all_complete) return std::nullopt;  // shows up as a gap in emissions

  MotionFrame frame;
  for (const auto& [code, kind_state] : ps.kinds)
    for (const auto& [index, datagram] : kind_state.parts)
      stats_.unresolved_joint_items += merge_datagram_into_frame(frame, datagram);

  note_emission(sample);
  return frame;
}

void FrameAssembler::note_emission(uint32_t sample) {
  ++stats_.frames_emitted;
  if (last_emitted_) stats_.frames_dropped += (sample - *last_emitted_) - 1;
  last_emitted_ = sample;

  uint64_t now = options_.now_us();
  emission_times_us_.push_back(now);
  while (!emission_times_us_.empty() && emission_times_us_.front() + 1'000'000 <= now &&
         emission_times_us_.size() > 1)
    emission_times_us_.pop_front();
  if (emission_times_us_.size() > 4096) emission_times_us_.pop_front();
}

std::vector<MotionFrame> FrameAssembler::flush() {
  std::vector<MotionFrame> out;
  while (!pending_.empty()) {
    std::optional<uint32_t> oldest;
    for (const auto& [sample, _] : pending_)
      if (!oldest || sample_before(sample, *oldest)) oldest = sample;
    if (auto frame = finalize(*oldest)) out.push_back(std::move(*frame));
  }
  return out;
}

StreamStats FrameAssembler::stats() const {
  StreamStats snapshot = stats_;
  uint64_t now = options_.now_us();
  uint64_t window_start = now >= 1'000'000 ? now - 1'000'000 : 0;
  snapshot.estimated_rate_hz = static_cast<double>(
      std::count_if(emission_times_us_.begin(), emission_times_us_.end(),
                    [&](uint64_t t) { return t > window_start; }));
  return snapshot;
}

}  // namespace xsbridge
