#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace feq {

/// Finitely generated abelian group Z^d x Z_{n1} x ... x Z_{nk}.
struct GroupSpec {
  std::size_t free_rank = 1;
  std::vector<std::int64_t> torsion_orders;

  std::size_t rank() const noexcept { return free_rank + torsion_orders.size(); }
  bool operator==(const GroupSpec&) const = default;

  /// Throws DimensionError if some torsion order is below 2.
  void validate() const;

  static GroupSpec integers() { return GroupSpec{1, {}}; }
};

/// A point of a GroupSpec. Torsion coordinates are kept reduced to [0, n).
struct Element {
  std::vector<std::int64_t> free;
  std::vector<std::int64_t> torsion;

  auto operator<=>(const Element&) const = default;
  bool operator==(const Element&) const = default;

  /// Max-norm of the free coordinates.
  std::int64_t free_norm() const noexcept;
};

/// Builds an element from a flat coordinate list (free coordinates first),
/// reducing torsion coordinates modulo their orders.
Element make_element(const GroupSpec& spec, std::span<const std::int64_t> coords);
Element make_element(const GroupSpec& spec, std::initializer_list<std::int64_t> coords);

Element identity(const GroupSpec& spec);

/// Flat coordinate list, free coordinates first.
std::vector<std::int64_t> coordinates(const Element& x);

void check_conforms(const GroupSpec& spec, const Element& x);

Element add(const GroupSpec& spec, const Element& x, const Element& y);
Element neg(const GroupSpec& spec, const Element& x);
Element sub(const GroupSpec& spec, const Element& x, const Element& y);

/// Unit vector along generator `i` (free generators first, then torsion).
Element generator(const GroupSpec& spec, std::size_t i);

/// Integer multiple k*x.
Element scale(const GroupSpec& spec, std::int64_t k, const Element& x);

/// Number of elements in window(spec, radius), with overflow checks.
std::size_t window_size(const GroupSpec& spec, std::int64_t radius);

/// All elements whose free coordinates have max-norm <= radius, crossed with
/// the full torsion part, in lexicographic order.
std::vector<Element> window(const GroupSpec& spec, std::int64_t radius);

/// Dense indexing of window(spec, radius) in the same lexicographic order.
class WindowIndex {
 public:
  WindowIndex(GroupSpec spec, std::int64_t radius);

  std::size_t size() const noexcept { return size_; }
  std::int64_t radius() const noexcept { return radius_; }
  const GroupSpec& spec() const noexcept { return spec_; }

  bool contains(const Element& x) const noexcept;
  /// Position of x in the window; x must be contained.
  std::size_t index_of(const Element& x) const;
  Element element_at(std::size_t index) const;

 private:
  GroupSpec spec_;
  std::int64_t radius_;
  std::size_t size_;
  std::vector<std::size_t> strides_;
};

std::string to_string(const Element& x);

}  // namespace feq
