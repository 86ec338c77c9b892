#include "feq/group.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "feq/error.hpp"

namespace feq {

namespace {

constexpr std::int64_t kMaxRadius = 1'000'000;

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) {
    throw RangeError("free coordinate overflow in group addition");
  }
  return out;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw RangeError("free coordinate overflow in integer multiple");
  }
  return out;
}

std::int64_t reduce(std::int64_t value, std::int64_t order) {
  std::int64_t r = value % order;
  return r < 0 ? r + order : r;
}

}  // namespace

void GroupSpec::validate() const {
  for (std::int64_t n : torsion_orders) {
    if (n < 2) {
      throw DimensionError("torsion order must be >= 2, got " + std::to_string(n));
    }
  }
}

std::int64_t Element::free_norm() const noexcept {
  std::int64_t norm = 0;
  for (std::int64_t c : free) {
    norm = std::max(norm, c < 0 ? -c : c);
  }
  return norm;
}

Element make_element(const GroupSpec& spec, std::span<const std::int64_t> coords) {
  if (coords.size() != spec.rank()) {
    throw DimensionError("element has " + std::to_string(coords.size()) +
                         " coordinates, group expects " + std::to_string(spec.rank()));
  }
  Element x;
  x.free.assign(coords.begin(), coords.begin() + static_cast<std::ptrdiff_t>(spec.free_rank));
  x.torsion.reserve(spec.torsion_orders.size());
  for (std::size_t i = 0; i < spec.torsion_orders.size(); ++i) {
    x.torsion.push_back(reduce(coords[spec.free_rank + i], spec.torsion_orders[i]));
  }
  return x;
}

Element make_element(const GroupSpec& spec, std::initializer_list<std::int64_t> coords) {
  return make_element(spec, std::span<const std::int64_t>(coords.begin(), coords.size()));
}

Element identity(const GroupSpec& spec) {
  return Element{std::vector<std::int64_t>(spec.free_rank, 0),
                 std::vector<std::int64_t>(spec.torsion_orders.size(), 0)};
}

std::vector<std::int64_t> coordinates(const Element& x) {
  std::vector<std::int64_t> out = x.free;
  out.insert(out.end(), x.torsion.begin(), x.torsion.end());
  return out;
}

void check_conforms(const GroupSpec& spec, const Element& x) {
  if (x.free.size() != spec.free_rank || x.torsion.size() != spec.torsion_orders.size()) {
    throw DimensionError("element " + to_string(x) + " does not match group of rank " +
                         std::to_string(spec.rank()));
  }
  for (std::size_t i = 0; i < x.torsion.size(); ++i) {
    if (x.torsion[i] < 0 || x.torsion[i] >= spec.torsion_orders[i]) {
      throw DimensionError("torsion coordinate out of range in " + to_string(x));
    }
  }
}

Element add(const GroupSpec& spec, const Element& x, const Element& y) {
  check_conforms(spec, x);
  check_conforms(spec, y);
  Element out;
  out.free.resize(x.free.size());
  for (std::size_t i = 0; i < x.free.size(); ++i) {
    out.free[i] = checked_add(x.free[i], y.free[i]);
  }
  out.torsion.resize(x.torsion.size());
  for (std::size_t i = 0; i < x.torsion.size(); ++i) {
    out.torsion[i] = (x.torsion[i] + y.torsion[i]) % spec.torsion_orders[i];
  }
  return out;
}

Element neg(const GroupSpec& spec, const Element& x) {
  check_conforms(spec, x);
  Element out;
  out.free.resize(x.free.size());
  for (std::size_t i = 0; i < x.free.size(); ++i) {
    if (x.free[i] == std::numeric_limits<std::int64_t>::min()) {
      throw RangeError("free coordinate overflow in negation");
    }
    out.free[i] = -x.free[i];
  }
  out.torsion.resize(x.torsion.size());
  for (std::size_t i = 0; i < x.torsion.size(); ++i) {
    out.torsion[i] = reduce(-x.torsion[i], spec.torsion_orders[i]);
  }
  return out;
}

Element sub(const GroupSpec& spec, const Element& x, const Element& y) {
  return add(spec, x, neg(spec, y));
}

Element generator(const GroupSpec& spec, std::size_t i) {
  if (i >= spec.rank()) {
    throw DimensionError("generator index " + std::to_string(i) + " out of range");
  }
  Element e = identity(spec);
  if (i < spec.free_rank) {
    e.free[i] = 1;
  } else {
    e.torsion[i - spec.free_rank] = 1 % spec.torsion_orders[i - spec.free_rank];
  }
  return e;
}

Element scale(const GroupSpec& spec, std::int64_t k, const Element& x) {
  check_conforms(spec, x);
  Element out = x;
  for (auto& c : out.free) c = checked_mul(c, k);
  for (std::size_t i = 0; i < out.torsion.size(); ++i) {
    const std::int64_t n = spec.torsion_orders[i];
    out.torsion[i] = reduce(reduce(k, n) * out.torsion[i], n);
  }
  return out;
}

std::size_t window_size(const GroupSpec& spec, std::int64_t radius) {
  if (radius < 0) throw RangeError("window radius must be non-negative");
  if (radius > kMaxRadius) throw RangeError("window radius above 1e6");
  std::size_t size = 1;
  const auto side = static_cast<std::size_t>(2 * radius + 1);
  auto mul = [&](std::size_t k) {
    if (__builtin_mul_overflow(size, k, &size)) {
      throw RangeError("window size overflows");
    }
  };
  for (std::size_t i = 0; i < spec.free_rank; ++i) mul(side);
  for (std::int64_t n : spec.torsion_orders) mul(static_cast<std::size_t>(n));
  return size;
}

WindowIndex::WindowIndex(GroupSpec spec, std::int64_t radius)
    : spec_(std::move(spec)), radius_(radius), size_(window_size(spec_, radius)) {
  spec_.validate();
  const std::size_t rank = spec_.rank();
  strides_.assign(rank, 1);
  for (std::size_t i = rank; i-- > 1;) {
    const std::size_t extent = i < spec_.free_rank
                                   ? static_cast<std::size_t>(2 * radius_ + 1)
                                   : static_cast<std::size_t>(spec_.torsion_orders[i - spec_.free_rank]);
    strides_[i - 1] = strides_[i] * extent;
  }
}

bool WindowIndex::contains(const Element& x) const noexcept {
  if (x.free.size() != spec_.free_rank || x.torsion.size() != spec_.torsion_orders.size()) {
    return false;
  }
  return x.free_norm() <= radius_;
}

std::size_t WindowIndex::index_of(const Element& x) const {
  if (!contains(x)) {
    throw DimensionError("element " + to_string(x) + " is outside the window of radius " +
                         std::to_string(radius_));
  }
  std::size_t idx = 0;
  for (std::size_t i = 0; i < spec_.free_rank; ++i) {
    idx += static_cast<std::size_t>(x.free[i] + radius_) * strides_[i];
  }
  for (std::size_t i = 0; i < x.torsion.size(); ++i) {
    idx += static_cast<std::size_t>(x.torsion[i]) * strides_[spec_.free_rank + i];
  }
  return idx;
}

Element WindowIndex::element_at(std::size_t index) const {
  Element x = identity(spec_);
  for (std::size_t i = 0; i < spec_.rank(); ++i) {
    const auto digit = static_cast<std::int64_t>(index / strides_[i]);
    index %= strides_[i];
    if (i < spec_.free_rank) {
      x.free[i] = digit - radius_;
    } else {
      x.torsion[i - spec_.free_rank] = digit;
    }
  }
  return x;
}

std::vector<Element> window(const GroupSpec& spec, std::int64_t radius) {
  WindowIndex index(spec, radius);
  std::vector<Element> out;
  out.reserve(index.size());
  for (std::size_t i = 0; i < index.size(); ++i) out.push_back(index.element_at(i));
  return out;
}

std::string to_string(const Element& x) {
  std::ostringstream os;
  os << '(';
  bool first = true;
  for (std::int64_t c : coordinates(x)) {
    if (!first) os << ',';
    os << c;
    first = false;
  }
  os << ')';
  return os.str();
}

}  // namespace feq
