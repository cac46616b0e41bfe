#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace latentbandit {

using Rng = std::mt19937_64;

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace detail

/// Counter-based seed derivation: the stream for (master, index, label) does
/// not depend on how many other streams were derived before it.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                                    std::string_view label) noexcept {
  std::uint64_t h = detail::splitmix64(master);
  h = detail::splitmix64(h ^ detail::splitmix64(index + 0x632be59bd9b4e019ULL));
  return detail::splitmix64(h ^ detail::fnv1a(label));
}

inline Rng make_stream(std::uint64_t master, std::uint64_t index,
                       std::string_view label) {
  return Rng{derive_seed(master, index, label)};
}

/// Beta(a, b) variate via the gamma ratio construction.
template <class Gen>
double sample_beta(double a, double b, Gen& gen) {
  std::gamma_distribution<double> ga(a, 1.0);
  std::gamma_distribution<double> gb(b, 1.0);
  const double x = ga(gen);
  const double y = gb(gen);
  const double s = x + y;
  if (s <= 0.0) {
    // Both gammas underflowed; only possible for tiny shapes.
    return std::uniform_real_distribution<double>(0.0, 1.0)(gen) < a / (a + b) ? 1.0 : 0.0;
  }
  return x / s;
}

template <class Gen>
double uniform01(Gen& gen) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(gen);
}

template <class Gen>
std::size_t uniform_index(std::size_t n, Gen& gen) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(gen);
}

}  // namespace latentbandit
