#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "feq/fnexpr.hpp"
#include "feq/group.hpp"

namespace feq {

using SampleMap = std::map<Element, Complex>;

/// Dense samples of a function on window(spec, radius), with per-point
/// magnitudes for the rounding-noise floor.
class Samples {
 public:
  Samples(GroupSpec spec, std::int64_t radius);

  static Samples of(const FnExpr& expr, const GroupSpec& spec, std::int64_t radius);
  /// Every window point must be present in the map; throws DegenerateError otherwise.
  static Samples from_map(const SampleMap& samples, const GroupSpec& spec, std::int64_t radius);

  const WindowIndex& index() const noexcept { return index_; }
  const GroupSpec& spec() const noexcept { return index_.spec(); }
  std::int64_t radius() const noexcept { return index_.radius(); }
  std::size_t size() const noexcept { return values_.size(); }

  Complex operator[](std::size_t i) const { return values_[i]; }
  Complex at(const Element& x) const { return values_[index_.index_of(x)]; }
  double magnitude(std::size_t i) const { return mags_[i]; }
  const std::vector<Complex>& values() const noexcept { return values_; }

  void set(std::size_t i, Complex v, double magnitude);

  /// Position of -x for the point at position i.
  std::size_t neg_index(std::size_t i) const { return neg_[i]; }

  Samples even() const;
  Samples odd() const;
  Samples restrict_to(std::int64_t radius) const;

  Samples& operator+=(const Samples& other);
  Samples& operator-=(const Samples& other);
  Samples& operator*=(Complex c);

  /// Sum of conj(this) * other.
  Complex dot(const Samples& other) const;
  double norm2() const;
  double sup() const;
  double max_magnitude() const;
  /// |value| within the rounding-noise floor of its own magnitude.
  bool negligible_at(std::size_t i) const { return std::abs(values_[i]) <= noise_floor(mags_[i]); }
  /// Every value is negligible.
  bool negligible() const;

  /// Growth verdict using nested sub-windows at the scheduled radii.
  GrowthEvidence verdict(const std::vector<std::int64_t>& schedule,
                         double ratio_tol = kDefaultRatioTol) const;

  /// Table over the window (default 0, bound = sup).
  FnExpr to_table() const;
  SampleMap to_map() const;

 private:
  WindowIndex index_;
  std::vector<Complex> values_;
  std::vector<double> mags_;
  std::vector<std::size_t> neg_;
};

Samples operator+(Samples a, const Samples& b);
Samples operator-(Samples a, const Samples& b);
Samples operator*(Complex c, Samples a);
/// Pointwise product.
Samples pointwise(const Samples& a, const Samples& b);

/// {R/8, R/4, R/2, R} with duplicates removed; R must be at least 8.
std::vector<std::int64_t> nested_schedule(std::int64_t radius);

}  // namespace feq
