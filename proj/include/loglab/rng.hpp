#ifndef LOGLAB_RNG_HPP
#define LOGLAB_RNG_HPP

#include <cmath>
#include <cstdint>

namespace loglab {

// Counter-based generator: output j of stream (seed, stream) is a pure
// function of (seed, stream, j), so rows can be sampled in any order or in
// parallel with bit-identical results.
namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace detail

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(detail::mix64(seed ^ detail::mix64(stream))), counter_(0) {}

  std::uint64_t next_u64() { return detail::mix64(key_ + 0x632be59bd9b4e019ULL * ++counter_); }

  // uniform in the open interval (0,1)
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // standard normal via Box-Muller; draws are consumed in pairs
  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = next_uniform();
    double u2 = next_uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace loglab

#endif  // LOGLAB_RNG_HPP
