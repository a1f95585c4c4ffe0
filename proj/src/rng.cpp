#include "mixlab/rng.hpp"

namespace mixlab {
namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t Rng::mix(Seed s) {
  std::uint64_t x = s.master;
  std::uint64_t a = splitmix64(x);
  x ^= s.stream + 0x9e3779b97f4a7c15ULL;
  std::uint64_t b = splitmix64(x);
  return a ^ (b + 0x632be59bd9b4e019ULL);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound <= 1) return 0;
  std::uint64_t mask = ~std::uint64_t{0} >> __builtin_clzll(bound - 1);
  for (;;) {
    std::uint64_t r = eng_() & mask;
    if (r < bound) return r;
  }
}

}  // namespace mixlab
