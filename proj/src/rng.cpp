#include "brgcl/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace brgcl {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t mix_seed(std::uint64_t root, std::uint64_t a, std::uint64_t b) {
  std::uint64_t state = root;
  std::uint64_t h = splitmix64(state);
  state ^= a + 0x9e3779b97f4a7c15ULL;
  h ^= splitmix64(state);
  state ^= b + 0xc2b2ae3d27d4eb4fULL;
  h ^= splitmix64(state);
  return h;
}

std::size_t Rng::uniform_int(std::size_t n) {
  if (n == 0) throw std::invalid_argument("Rng::uniform_int: n must be >= 1");
  std::size_t r = static_cast<std::size_t>(uniform() * static_cast<double>(n));
  return r < n ? r : n - 1;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = 1.0 - uniform();
  double u2 = uniform();
  double mag = std::sqrt(-2.0 * std::log(u1));
  double angle = 2.0 * std::numbers::pi * u2;
  spare_ = mag * std::sin(angle);
  has_spare_ = true;
  return mag * std::cos(angle);
}

}  // namespace brgcl
