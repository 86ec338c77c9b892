#include "feq/random.hpp"

#include <cmath>
#include <numbers>

namespace feq {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

Rng Rng::split(std::uint64_t stream) const {
  return Rng(splitmix64(seed_ + (stream + 1) * 0x9E3779B97F4A7C15ULL));
}

std::uint64_t Rng::bits() { return engine_(); }

double Rng::uniform() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::int64_t Rng::integer(std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(bits() % span);
}

bool Rng::coin() { return (bits() >> 63) != 0; }

Complex Rng::scalar(double lo, double hi) {
  const double r = uniform(lo, hi);
  return std::polar(r, uniform(-std::numbers::pi, std::numbers::pi));
}

FnExpr random_table(const GroupSpec& spec, Rng& rng, std::int64_t support_radius, double max_abs,
                    Parity parity) {
  std::map<Element, Complex> entries;
  double bound = 0.0;
  for (const Element& x : window(spec, support_radius)) {
    const Element nx = neg(spec, x);
    if (parity != Parity::kAny && entries.count(nx)) continue;
    Complex v = rng.scalar(0.0, max_abs);
    if (parity == Parity::kOdd && x == nx) v = 0.0;
    entries[x] = v;
    if (parity != Parity::kAny && !(x == nx)) entries[nx] = parity == Parity::kEven ? v : -v;
    bound = std::max(bound, std::abs(v));
  }
  return FnExpr::table(std::move(entries), Complex(0.0, 0.0), bound);
}

namespace {

std::vector<Complex> torsion_roots(const GroupSpec& spec, Rng& rng) {
  std::vector<Complex> roots;
  for (std::int64_t n : spec.torsion_orders) {
    const double k = static_cast<double>(rng.integer(0, n - 1));
    roots.push_back(std::polar(1.0, 2.0 * std::numbers::pi * k / static_cast<double>(n)));
  }
  return roots;
}

/// Roots in {1, -1} where the order allows it, so the character stays even.
std::vector<Complex> even_torsion_roots(const GroupSpec& spec, Rng& rng) {
  std::vector<Complex> roots;
  for (std::int64_t n : spec.torsion_orders) {
    roots.push_back(n % 2 == 0 && rng.coin() ? Complex(-1.0, 0.0) : Complex(1.0, 0.0));
  }
  return roots;
}

const std::vector<Complex> kUnboundedRatios{2.0, -2.0, 0.5, -0.5};
const std::vector<Complex> kEvenRatios{1.0, -1.0};

FnExpr even_character(const GroupSpec& spec, Rng& rng) {
  std::vector<Complex> ratios;
  for (std::size_t i = 0; i < spec.free_rank; ++i) ratios.push_back(rng.pick(kEvenRatios));
  return FnExpr::multiplicative(std::move(ratios), even_torsion_roots(spec, rng));
}

FnExpr bounded_character(const GroupSpec& spec, Rng& rng) {
  std::vector<Complex> ratios;
  const int choice = static_cast<int>(rng.integer(0, 2));
  for (std::size_t i = 0; i < spec.free_rank; ++i) {
    if (choice == 0) {
      ratios.push_back(1.0);
    } else if (choice == 1) {
      ratios.push_back(-1.0);
    } else {
      ratios.push_back(std::polar(1.0, rng.uniform(0.3, 2.8)));
    }
  }
  return FnExpr::multiplicative(std::move(ratios), torsion_roots(spec, rng));
}

FnExpr unbounded_character(const GroupSpec& spec, Rng& rng) {
  return random_character(spec, rng, kUnboundedRatios);
}

}  // namespace

FnExpr random_character(const GroupSpec& spec, Rng& rng, const std::vector<Complex>& ratios) {
  std::vector<Complex> free;
  for (std::size_t i = 0; i < spec.free_rank; ++i) free.push_back(rng.pick(ratios));
  return FnExpr::multiplicative(std::move(free), torsion_roots(spec, rng));
}

FnExpr random_additive(const GroupSpec& spec, Rng& rng) {
  std::vector<Complex> coeffs;
  for (std::size_t i = 0; i < spec.free_rank; ++i) coeffs.push_back(rng.scalar());
  return FnExpr::additive(std::move(coeffs));
}

FnExpr random_expr(const GroupSpec& spec, Rng& rng, int depth) {
  const int leaf_kinds = 3;
  const int kind = static_cast<int>(rng.integer(0, depth > 0 ? leaf_kinds + 2 : leaf_kinds - 1));
  switch (kind) {
    case 0:
      return random_table(spec, rng, 4, 2.0);
    case 1:
      return random_additive(spec, rng);
    case 2: {
      std::vector<Complex> ratios;
      for (std::size_t i = 0; i < spec.free_rank; ++i) ratios.push_back(rng.scalar(0.5, 2.0));
      return FnExpr::multiplicative(std::move(ratios), torsion_roots(spec, rng));
    }
    case 3:
      return random_expr(spec, rng, depth - 1) + random_expr(spec, rng, depth - 1);
    case 4:
      return random_expr(spec, rng, depth - 1) * random_expr(spec, rng, depth - 1);
    default:
      return rng.scalar() * random_expr(spec, rng, depth - 1);
  }
}

Triple random_triple(const GroupSpec& spec, Rng& rng) {
  Triple t;
  t.spec = spec;
  t.f = random_expr(spec, rng);
  t.g = random_expr(spec, rng);
  t.h = random_expr(spec, rng);
  return t;
}

FamilyParams random_family_params(FamilyTag tag, const GroupSpec& spec, Rng& rng) {
  FamilyParams p;
  auto table = [&](Parity parity = Parity::kAny) { return random_table(spec, rng, 4, 1.0, parity); };
  auto character_pair = [&](const FnExpr& chi1, const FnExpr& chi2) {
    CosinePair c;
    c.kind = CosineKind::kCharacterPair;
    c.chi1 = chi1;
    c.chi2 = chi2;
    return c;
  };
  switch (tag) {
    case FamilyTag::T1:
      p.functions["g"] = table() + random_additive(spec, rng);
      p.functions["h"] = table();
      break;
    case FamilyTag::T2:
      p.functions["f"] = table();
      p.functions["g"] = table();
      p.functions["h"] = table();
      break;
    case FamilyTag::T3:
      p.scalars["alpha"] = rng.scalar();
      p.scalars["lambda"] = rng.scalar();
      p.functions["m"] = bounded_character(spec, rng);
      p.functions["b"] = table();
      p.functions["phi"] = table();
      break;
    case FamilyTag::T4:
      p.scalars["lambda"] = rng.scalar();
      p.functions["f0"] = FnExpr::constant(rng.scalar());
      p.functions["g0"] = FnExpr::constant(0.5);
      p.functions["b"] = table();
      break;
    case FamilyTag::T5:
      p.scalars["lambda"] = rng.scalar();
      p.scalars["rho"] = rng.scalar();
      p.cosine_pair = character_pair(even_character(spec, rng), even_character(spec, rng));
      p.functions["b"] = table();
      break;
    case FamilyTag::T6: {
      p.scalars["lambda"] = rng.scalar();
      const FnExpr chi = unbounded_character(spec, rng);
      p.cosine_pair = character_pair(chi, reciprocal_multiplicative(chi));
      p.functions["b"] = table();
      break;
    }
    case FamilyTag::T7:
      p.functions["m"] = even_character(spec, rng);
      p.functions["a"] = random_additive(spec, rng);
      p.functions["b"] = table(Parity::kOdd);
      break;
    case FamilyTag::T8: {
      FamilyParams q;
      q.functions["m"] = even_character(spec, rng);
      q.functions["a"] = random_additive(spec, rng);
      const FamilyInstance inst = assemble_family(FamilyTag::T7, q, spec);
      p.functions["f"] = inst.triple.f;
      p.functions["g"] = inst.triple.g;
      p.functions["h"] = inst.triple.h;
      break;
    }
    case FamilyTag::T9:
      p.scalars["delta"] = rng.scalar();
      p.functions["phi"] = table(Parity::kOdd);
      if (rng.coin()) {
        p.form = T9Form::kCosine;
        p.scalars["lambda"] = rng.scalar();
        const FnExpr chi = unbounded_character(spec, rng);
        p.cosine_pair = character_pair(chi, reciprocal_multiplicative(chi));
        p.functions["b"] = table(Parity::kEven);
      } else {
        p.form = T9Form::kQuadratic;
        p.functions["m"] = even_character(spec, rng);
        p.functions["a"] = random_additive(spec, rng);
      }
      break;
    case FamilyTag::P33:
      p.functions["m"] = even_character(spec, rng);
      p.functions["a"] = random_additive(spec, rng);
      break;
    case FamilyTag::P34_1:
      p.scalars["lambda"] = rng.scalar();
      p.scalars["rho"] = rng.scalar();
      p.cosine_pair = character_pair(unbounded_character(spec, rng), unbounded_character(spec, rng));
      p.functions["b"] = table();
      break;
    case FamilyTag::P34_2:
      p.scalars["lambda"] = rng.scalar();
      p.scalars["beta"] = rng.scalar();
      p.functions["m"] = bounded_character(spec, rng);
      p.functions["M"] = unbounded_character(spec, rng);
      p.functions["a"] = random_additive(spec, rng);
      p.functions["b"] = table();
      break;
    case FamilyTag::P34_3:
      p.scalars["beta"] = rng.scalar();
      p.functions["m"] = bounded_character(spec, rng);
      p.functions["a"] = random_additive(spec, rng);
      p.functions["a1"] = random_additive(spec, rng);
      p.functions["b"] = table();
      break;
    case FamilyTag::P34_4:
      p.scalars["beta"] = rng.scalar();
      p.functions["m"] = bounded_character(spec, rng);
      p.functions["a"] = random_additive(spec, rng);
      p.functions["a1"] = random_additive(spec, rng);
      break;
  }
  return p;
}

}  // namespace feq
