#include "latentcl/rng.hpp"

#include <array>

namespace latentcl {

namespace {

std::mt19937_64 seeded_engine(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  const std::array<std::uint32_t, 6> words{
      static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
      static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t root_seed, std::uint64_t stream_index, std::uint64_t lane)
    : root_seed_(root_seed),
      stream_index_(stream_index),
      lane_(lane),
      engine_(seeded_engine(root_seed, stream_index, lane)) {}

}  // namespace latentcl
