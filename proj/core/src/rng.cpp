#include "sagail/rng.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sagail {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : seed_(seed), gen_(splitmix64(seed)) {}

Rng Rng::derive(std::initializer_list<std::uint64_t> path) const {
  std::uint64_t h = seed_;
  for (std::uint64_t p : path) h = splitmix64(h ^ splitmix64(p));
  return Rng(h);
}

std::uint64_t Rng::next_u64() { return gen_(); }

double Rng::uniform01() {
  // 53 random bits -> double in [0, 1)
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

int Rng::uniform_int(int n) {
  if (n < 1) throw std::invalid_argument("Rng::uniform_int: n must be >= 1");
  // Rejection sampling, no modulo bias.
  const std::uint64_t un = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
  std::uint64_t x;
  do {
    x = gen_();
  } while (x >= limit);
  return static_cast<int>(x % un);
}

double Rng::normal() {
  const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

bool Rng::bernoulli(double p) { return uniform01() < p; }

std::string Rng::save_state() const {
  std::ostringstream os;
  os << seed_ << ' ' << gen_;
  return os.str();
}

void Rng::restore_state(const std::string& text) {
  std::istringstream is(text);
  is >> seed_ >> gen_;
  if (!is) throw std::runtime_error("Rng::restore_state: malformed state string");
}

}  // namespace sagail
