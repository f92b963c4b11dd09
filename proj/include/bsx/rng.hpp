// Counter-based generator: Philox4x32 with 10 rounds (Salmon et al., SC'11).
// A stream is addressed by (seed, stream id); draw i of a stream is a pure
// function of (seed, stream, i), so parallel replicas never share state.
#pragma once

#include <array>
#include <cstdint>

namespace bsx {

class Philox {
 public:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  Philox(std::uint64_t seed, std::uint64_t stream);

  static Block bijection(Block ctr, Key key);

  std::uint64_t next_u64();
  double uniform();  // in [0, 1), 53 random bits
  double normal();   // Box-Muller, one value per call

 private:
  Key key_{};
  std::uint64_t stream_ = 0;
  std::uint64_t block_index_ = 0;
  Block buf_{};
  int used_ = 4;
};

}  // namespace bsx
