#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace ellkurt {

/// Mixes a 64-bit value (splitmix64 finalizer).
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Derives a well-separated seed from a master seed and a list of coordinates,
/// e.g. (family id, p, replication). Order of coordinates matters.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> coords) noexcept;

/// Random stream used by every sampler in the library.
///
/// Built on std::mt19937_64, whose output sequence is fixed by the standard,
/// with the variate transforms implemented here so that draws are identical
/// across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1).
  double uniform_open();
  double normal();
  double exponential();
  /// Gamma(shape, scale = 1); shape > 0.
  double gamma(double shape);
  /// Chi-squared with `dof` > 0 degrees of freedom.
  double chi_squared(double dof);

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ellkurt
