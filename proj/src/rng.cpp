#include "prodlaw/rng.hpp"

#include <cmath>
#include <numbers>

namespace prodlaw {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {
inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
}  // namespace

SubstreamRng::SubstreamRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t trial) {
  // absorb the key words one by one, then expand to the four state words
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ (stream + 0x9e3779b97f4a7c15ULL));
  h = mix64(h ^ (trial + 0x7f4a7c15f39cc060ULL));
  for (auto& w : s_) {
    h = mix64(h);
    w = h;
  }
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t SubstreamRng::next_u64() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double SubstreamRng::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SubstreamRng::uniform01_open() {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

std::pair<double, double> SubstreamRng::gauss_pair() {
  const double u1 = uniform01_open();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double th = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(th), r * std::sin(th)};
}

}  // namespace prodlaw
