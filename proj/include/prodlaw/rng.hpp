#pragma once

#include <cstdint>
#include <utility>

namespace prodlaw {

// splitmix64 finalizer; the fixed mixing step of the substream scheme.
std::uint64_t mix64(std::uint64_t x);

// xoshiro256++ keyed by the tuple (seed, stream, trial). The tuple itself is
// the substream key (trivially injective); the generator state is derived by
// chaining mix64 over the tuple words. Streams never share state, so trials
// can run on any worker in any order with identical output.
class SubstreamRng {
 public:
  SubstreamRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t trial);

  std::uint64_t next_u64();
  double uniform01();       // 53-bit uniform in [0, 1)
  double uniform01_open();  // in (0, 1], safe under log

  // two independent N(0,1) draws via the trigonometric Box-Muller map;
  // rejection-free, so the draw count per entry is fixed
  std::pair<double, double> gauss_pair();

 private:
  std::uint64_t s_[4];
};

}  // namespace prodlaw
