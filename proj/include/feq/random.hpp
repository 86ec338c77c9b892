#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "feq/defect.hpp"
#include "feq/families.hpp"
#include "feq/fnexpr.hpp"

namespace feq {

/// SplitMix64 finaliser; also the stream-splitting hash.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Deterministic generator. Every randomized choice descends from one 64-bit
/// seed: the child for stream k is seeded with splitmix64(seed + (k+1) * golden),
/// and draws come from std::mt19937_64 with explicit bit-to-double conversion so
/// results do not depend on the standard library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }
  Rng split(std::uint64_t stream) const;

  std::uint64_t bits();
  /// Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi);
  /// Uniform integer in [lo, hi].
  std::int64_t integer(std::int64_t lo, std::int64_t hi);
  bool coin();
  /// Complex number with modulus uniform in [lo, hi] and uniform phase.
  Complex scalar(double lo = 0.5, double hi = 2.0);

  template <typename T>
  const T& pick(const std::vector<T>& items) {
    return items[static_cast<std::size_t>(integer(0, static_cast<std::int64_t>(items.size()) - 1))];
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

enum class Parity { kAny, kEven, kOdd };

/// Random table supported on window(support_radius) with values of modulus at
/// most max_abs; the declared bound is the exact maximum modulus.
FnExpr random_table(const GroupSpec& spec, Rng& rng, std::int64_t support_radius = 4,
                    double max_abs = 1.0, Parity parity = Parity::kAny);

/// Multiplicative node with free ratios drawn from `ratios` and random torsion roots.
FnExpr random_character(const GroupSpec& spec, Rng& rng, const std::vector<Complex>& ratios);

FnExpr random_additive(const GroupSpec& spec, Rng& rng);

/// Random mixture of Table, Additive and Multiplicative nodes under sums,
/// products and scalings.
FnExpr random_expr(const GroupSpec& spec, Rng& rng, int depth = 2);

Triple random_triple(const GroupSpec& spec, Rng& rng);

/// Parameters inside the documented ranges: scalar moduli in [0.5, 2],
/// character ratios in {+-2, +-1/2} (unbounded) or {1, -1, e^{i theta}}
/// (bounded), tables supported within radius 4.
FamilyParams random_family_params(FamilyTag tag, const GroupSpec& spec, Rng& rng);

}  // namespace feq
