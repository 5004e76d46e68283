#pragma once

#include <cstdint>
#include <random>

namespace latentcl {

/// Seeded random stream addressed by (root_seed, stream_index, lane).
///
/// Identical addresses replay bit-identical draw sequences. The engine is
/// seeded through std::seed_seq over all six 32-bit halves of the address, so
/// neighbouring indices give unrelated states.
class RngStream {
 public:
  RngStream(std::uint64_t root_seed, std::uint64_t stream_index, std::uint64_t lane = 0);

  std::uint64_t root_seed() const noexcept { return root_seed_; }
  std::uint64_t stream_index() const noexcept { return stream_index_; }
  std::uint64_t lane() const noexcept { return lane_; }

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }

  /// Fresh stream sharing this stream's address but drawing from another lane.
  RngStream substream(std::uint64_t lane) const { return {root_seed_, stream_index_, lane}; }

  /// Stream index of trial `trial` inside experiment `experiment`.
  static constexpr std::uint64_t trial_stream(std::uint64_t experiment, std::uint64_t trial) noexcept {
    return (experiment << 32) + trial;
  }

 private:
  std::uint64_t root_seed_;
  std::uint64_t stream_index_;
  std::uint64_t lane_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace latentcl
