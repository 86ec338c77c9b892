#include "feq/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "feq/error.hpp"

namespace feq {

Samples::Samples(GroupSpec spec, std::int64_t radius)
    : index_(std::move(spec), radius),
      values_(index_.size(), Complex(0.0, 0.0)),
      mags_(index_.size(), 0.0),
      neg_(index_.size()) {
  for (std::size_t i = 0; i < index_.size(); ++i) {
    neg_[i] = index_.index_of(neg(index_.spec(), index_.element_at(i)));
  }
}

Samples Samples::of(const FnExpr& expr, const GroupSpec& spec, std::int64_t radius) {
  Samples s(spec, radius);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const Evaluated e = eval_detail(expr, spec, s.index_.element_at(i));
    s.values_[i] = e.value;
    s.mags_[i] = e.magnitude;
  }
  return s;
}

Samples Samples::from_map(const SampleMap& samples, const GroupSpec& spec, std::int64_t radius) {
  Samples s(spec, radius);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const Element x = s.index_.element_at(i);
    auto it = samples.find(x);
    if (it == samples.end()) {
      throw DegenerateError("no sample at " + to_string(x));
    }
    s.values_[i] = it->second;
    s.mags_[i] = std::abs(it->second);
  }
  return s;
}

void Samples::set(std::size_t i, Complex v, double magnitude) {
  values_[i] = v;
  mags_[i] = magnitude;
}

Samples Samples::even() const {
  Samples out = *this;
  for (std::size_t i = 0; i < size(); ++i) {
    out.values_[i] = 0.5 * (values_[i] + values_[neg_[i]]);
    out.mags_[i] = 0.5 * (mags_[i] + mags_[neg_[i]]);
  }
  return out;
}

Samples Samples::odd() const {
  Samples out = *this;
  for (std::size_t i = 0; i < size(); ++i) {
    out.values_[i] = 0.5 * (values_[i] - values_[neg_[i]]);
    out.mags_[i] = 0.5 * (mags_[i] + mags_[neg_[i]]);
  }
  return out;
}

Samples Samples::restrict_to(std::int64_t radius) const {
  if (radius > this->radius()) throw std::invalid_argument("restriction radius exceeds window");
  Samples out(spec(), radius);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::size_t j = index_.index_of(out.index_.element_at(i));
    out.values_[i] = values_[j];
    out.mags_[i] = mags_[j];
  }
  return out;
}

namespace {

void check_same(const Samples& a, const Samples& b) {
  if (a.radius() != b.radius() || !(a.spec() == b.spec())) {
    throw std::invalid_argument("samples live on different windows");
  }
}

}  // namespace

Samples& Samples::operator+=(const Samples& other) {
  check_same(*this, other);
  for (std::size_t i = 0; i < size(); ++i) {
    values_[i] += other.values_[i];
    mags_[i] += other.mags_[i];
  }
  return *this;
}

Samples& Samples::operator-=(const Samples& other) {
  check_same(*this, other);
  for (std::size_t i = 0; i < size(); ++i) {
    values_[i] -= other.values_[i];
    mags_[i] += other.mags_[i];
  }
  return *this;
}

Samples& Samples::operator*=(Complex c) {
  for (std::size_t i = 0; i < size(); ++i) {
    values_[i] *= c;
    mags_[i] *= std::abs(c);
  }
  return *this;
}

Complex Samples::dot(const Samples& other) const {
  check_same(*this, other);
  Complex total(0.0, 0.0);
  for (std::size_t i = 0; i < size(); ++i) total += std::conj(values_[i]) * other.values_[i];
  return total;
}

double Samples::norm2() const {
  double total = 0.0;
  for (const Complex& v : values_) total += std::norm(v);
  return total;
}

double Samples::sup() const {
  double best = 0.0;
  for (const Complex& v : values_) best = std::max(best, std::abs(v));
  return best;
}

double Samples::max_magnitude() const {
  double best = 0.0;
  for (double m : mags_) best = std::max(best, m);
  return best;
}

bool Samples::negligible() const {
  for (std::size_t i = 0; i < size(); ++i) {
    if (!negligible_at(i)) return false;
  }
  return true;
}

GrowthEvidence Samples::verdict(const std::vector<std::int64_t>& schedule, double ratio_tol) const {
  check_schedule(schedule);
  if (schedule.back() > radius()) throw std::invalid_argument("schedule exceeds sampled window");
  std::vector<double> sups;
  std::vector<double> floors;
  std::vector<double> effective;
  for (std::int64_t r : schedule) {
    double s = 0.0;
    double m = 0.0;
    double e = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
      if (index_.element_at(i).free_norm() <= r) {
        s = std::max(s, std::abs(values_[i]));
        m = std::max(m, mags_[i]);
        e = std::max(e, std::abs(values_[i]) - noise_floor(mags_[i]));
      }
    }
    sups.push_back(s);
    floors.push_back(noise_floor(m));
    effective.push_back(e);
  }
  return classify_growth(schedule, std::move(sups), std::move(floors), std::move(effective), ratio_tol);
}

FnExpr Samples::to_table() const {
  std::map<Element, Complex> entries;
  for (std::size_t i = 0; i < size(); ++i) {
    if (values_[i] != Complex(0.0, 0.0)) entries.emplace(index_.element_at(i), values_[i]);
  }
  return FnExpr::table(std::move(entries), Complex(0.0, 0.0), sup());
}

SampleMap Samples::to_map() const {
  SampleMap out;
  for (std::size_t i = 0; i < size(); ++i) out.emplace(index_.element_at(i), values_[i]);
  return out;
}

Samples operator+(Samples a, const Samples& b) { return a += b; }
Samples operator-(Samples a, const Samples& b) { return a -= b; }
Samples operator*(Complex c, Samples a) { return a *= c; }

Samples pointwise(const Samples& a, const Samples& b) {
  check_same(a, b);
  Samples out = a;
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.set(i, a[i] * b[i], a.magnitude(i) * b.magnitude(i));
  }
  return out;
}

std::vector<std::int64_t> nested_schedule(std::int64_t radius) {
  if (radius < 8) throw std::invalid_argument("radius must be at least 8");
  return {radius / 8, radius / 4, radius / 2, radius};
}

}  // namespace feq
