#include "feq/defect.hpp"

#include <algorithm>
#include <cmath>

namespace feq {

std::string_view to_string(EquationKind k) noexcept {
  return k == EquationKind::kMinus ? "minus" : "plus";
}

void check_conforms(const Triple& t) {
  t.spec.validate();
  check_conforms(t.f, t.spec);
  check_conforms(t.g, t.spec);
  check_conforms(t.h, t.spec);
}

Complex defect(const Triple& t, EquationKind kind, const Element& x, const Element& y) {
  const Element z = kind == EquationKind::kMinus ? sub(t.spec, x, y) : add(t.spec, x, y);
  return eval(t.f, t.spec, z) - eval(t.f, t.spec, x) * eval(t.g, t.spec, y) -
         eval(t.g, t.spec, x) * eval(t.f, t.spec, y) - eval(t.h, t.spec, x) * eval(t.h, t.spec, y);
}

Complex psi(const Triple& t, const Element& x, const Element& y) {
  return defect(t, EquationKind::kMinus, x, y);
}

Complex plus_defect(const Triple& t, const Element& x, const Element& y) {
  return defect(t, EquationKind::kPlus, x, y);
}

Complex antisym_defect(const Triple& t, const Element& x, const Element& y) {
  return eval(t.f, t.spec, sub(t.spec, x, y)) - eval(t.f, t.spec, sub(t.spec, y, x));
}

TripleCache::TripleCache(const Triple& t, std::int64_t radius) : index_(t.spec, radius) {
  f_.reserve(index_.size());
  g_.reserve(index_.size());
  h_.reserve(index_.size());
  for (std::size_t i = 0; i < index_.size(); ++i) {
    const Element x = index_.element_at(i);
    f_.push_back(eval_detail(t.f, t.spec, x));
    g_.push_back(eval_detail(t.g, t.spec, x));
    h_.push_back(eval_detail(t.h, t.spec, x));
  }
}

Evaluated TripleCache::defect(EquationKind kind, const Element& x, const Element& y) const {
  const Element z = kind == EquationKind::kMinus ? sub(spec(), x, y) : add(spec(), x, y);
  const Evaluated& fz = f(z);
  const Evaluated& fx = f(x);
  const Evaluated& fy = f(y);
  const Evaluated& gx = g(x);
  const Evaluated& gy = g(y);
  const Evaluated& hx = h(x);
  const Evaluated& hy = h(y);
  return {fz.value - fx.value * gy.value - gx.value * fy.value - hx.value * hy.value,
          fz.magnitude + fx.magnitude * gy.magnitude + gx.magnitude * fy.magnitude +
              hx.magnitude * hy.magnitude};
}

DefectReport defect_report(const Triple& t, const std::vector<std::int64_t>& schedule,
                           double ratio_tol, EquationKind kind) {
  check_schedule(schedule);
  const std::int64_t r_max = schedule.back();
  TripleCache cache(t, 2 * r_max);
  const std::vector<Element> pts = window(t.spec, r_max);

  // Per level (max of the two free norms): sup, first argmax, largest term magnitude.
  struct Level {
    double sup = -1.0;
    std::size_t ix = 0;
    std::size_t iy = 0;
    double mag = 0.0;
    double eff = 0.0;
  };
  std::vector<Level> levels(static_cast<std::size_t>(r_max) + 1);
  std::vector<std::int64_t> norms(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) norms[i] = pts[i].free_norm();

  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const Evaluated d = cache.defect(kind, pts[i], pts[j]);
      Level& lv = levels[static_cast<std::size_t>(std::max(norms[i], norms[j]))];
      const double a = std::abs(d.value);
      if (a > lv.sup) {
        lv.sup = a;
        lv.ix = i;
        lv.iy = j;
      }
      lv.mag = std::max(lv.mag, d.magnitude);
      lv.eff = std::max(lv.eff, a - noise_floor(d.magnitude));
    }
  }

  DefectReport report;
  report.equation = kind;
  std::vector<double> sups;
  std::vector<double> floors;
  std::vector<double> effective;
  double run_sup = -1.0;
  double run_mag = 0.0;
  double run_eff = 0.0;
  std::size_t best_i = 0;
  std::size_t best_j = 0;
  std::size_t next = 0;
  for (std::size_t level = 0; level < levels.size(); ++level) {
    const Level& lv = levels[level];
    if (lv.sup > run_sup) {
      run_sup = lv.sup;
      best_i = lv.ix;
      best_j = lv.iy;
    }
    run_mag = std::max(run_mag, lv.mag);
    run_eff = std::max(run_eff, lv.eff);
    while (next < schedule.size() && static_cast<std::size_t>(schedule[next]) == level) {
      RadiusRecord rec;
      rec.radius = schedule[next];
      rec.sup = std::max(run_sup, 0.0);
      rec.argmax_x = pts[best_i];
      rec.argmax_y = pts[best_j];
      rec.noise_floor = noise_floor(run_mag);
      sups.push_back(rec.sup);
      floors.push_back(rec.noise_floor);
      effective.push_back(run_eff);
      report.per_radius.push_back(std::move(rec));
      ++next;
    }
  }
  report.scale = 1.0 + run_mag;
  report.growth =
      classify_growth(schedule, std::move(sups), std::move(floors), std::move(effective), ratio_tol);
  return report;
}

}  // namespace feq
