#include "cdh/weyl.hpp"

#include <sstream>

#include "cdh/errors.hpp"

namespace cdh {

namespace {

using Expansion = std::map<WeylOperator::Key, Rational>;

// d * (z^a d^b) = z^a d^{b+1} + a z^{a-1} d^b.
Expansion left_multiply_d(const Expansion& e) {
  Expansion out;
  auto add = [&out](int a, int b, const Rational& c) {
    auto [it, inserted] = out.try_emplace({a, b}, c);
    if (!inserted) it->second += c;
  };
  for (const auto& [key, c] : e) {
    const auto [a, b] = key;
    add(a, b + 1, c);
    if (a > 0) add(a - 1, b, c * a);
  }
  return out;
}

}  // namespace

const Expansion& d_power_times_z_power(int k, int m) {
  if (k < 0 || m < 0) throw ArgumentError("d_power_times_z_power: negative power");
  thread_local std::map<std::pair<int, int>, Expansion> memo;
  const auto found = memo.find({k, m});
  if (found != memo.end()) return found->second;
  Expansion e;
  if (k == 0) {
    e[{m, 0}] = 1;
  } else {
    e = left_multiply_d(d_power_times_z_power(k - 1, m));
  }
  return memo.emplace(std::make_pair(k, m), std::move(e)).first->second;
}

void WeylOperator::add_term(const Key& key, const MultiPoly& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(key, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

WeylOperator WeylOperator::constant(const MultiPoly& c) { return monomial(0, 0, c); }
WeylOperator WeylOperator::z() { return monomial(1, 0); }
WeylOperator WeylOperator::d() { return monomial(0, 1); }

WeylOperator WeylOperator::monomial(int m, int k, const MultiPoly& c) {
  if (m < 0 || k < 0) throw ArgumentError("WeylOperator::monomial: negative power");
  WeylOperator op;
  op.add_term({m, k}, c);
  return op;
}

MultiPoly WeylOperator::coefficient(int m, int k) const {
  const auto it = terms_.find({m, k});
  return it == terms_.end() ? MultiPoly() : it->second;
}

WeylOperator WeylOperator::operator+(const WeylOperator& o) const {
  WeylOperator r = *this;
  for (const auto& [key, c] : o.terms_) r.add_term(key, c);
  return r;
}

WeylOperator WeylOperator::operator-(const WeylOperator& o) const {
  WeylOperator r = *this;
  for (const auto& [key, c] : o.terms_) r.add_term(key, -c);
  return r;
}

WeylOperator WeylOperator::operator-() const { return WeylOperator() - *this; }

WeylOperator WeylOperator::operator*(const WeylOperator& o) const {
  // z^m1 d^k1 z^m2 d^k2 = sum c z^{m1+a} d^{b+k2} over d^k1 z^m2 = sum c z^a d^b.
  WeylOperator r;
  for (const auto& [k1key, c1] : terms_) {
    for (const auto& [k2key, c2] : o.terms_) {
      const MultiPoly prod = c1 * c2;
      for (const auto& [ab, c] : d_power_times_z_power(k1key.second, k2key.first)) {
        r.add_term({k1key.first + ab.first, ab.second + k2key.second}, MultiPoly(c) * prod);
      }
    }
  }
  return r;
}

std::string WeylOperator::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [key, c] : terms_) {
    if (!first) out << " + ";
    first = false;
    out << "(" << c.to_string() << ")";
    const auto [m, k] = key;
    if (m == 1) out << "*z";
    if (m > 1) out << "*z^" << m;
    if (k == 1) out << "*d";
    if (k > 1) out << "*d^" << k;
  }
  return out.str();
}

WeylOperator operator*(const MultiPoly& c, const WeylOperator& op) { return WeylOperator::constant(c) * op; }

WeylOperator compose(const WeylOperator& f, const WeylOperator& g) { return f * g; }

WeylOperator power(const WeylOperator& op, int e) {
  if (e < 0) throw ArgumentError("power: negative exponent");
  WeylOperator r = WeylOperator::identity();
  for (int i = 0; i < e; ++i) r = r * op;
  return r;
}

WeylOperator build_X(const MultiPoly& constant_term) {
  const MultiPoly A = MultiPoly::A(), B = MultiPoly::B(), C = MultiPoly::C();
  const WeylOperator E = WeylOperator::z() * WeylOperator::d();  // Euler operator z d
  const WeylOperator two = WeylOperator::constant(2);
  return WeylOperator::constant(constant_term) + two * E +
         two * (WeylOperator::constant(A + C) + E) * (WeylOperator::constant(B + C) + E) * WeylOperator::d();
}

WeylOperator build_Y() {
  const MultiPoly A = MultiPoly::A(), B = MultiPoly::B(), C = MultiPoly::C();
  const WeylOperator E = WeylOperator::z() * WeylOperator::d();
  const MultiPoly e2 = A * B + A * C + B * C;
  const MultiPoly lin = MultiPoly(2) * (A + B + C) - MultiPoly(1);
  return WeylOperator::z() + WeylOperator::constant(e2) + lin * E + MultiPoly(2) * (E * E) +
         (WeylOperator::constant(A + B) + E) * (WeylOperator::constant(A + C) + E) *
             (WeylOperator::constant(B + C) + E) * WeylOperator::d();
}

ZPoly apply_to_monomial(const WeylOperator& op, int n) {
  if (n < 0) throw ArgumentError("apply_to_monomial: negative power");
  ZPoly out;
  for (const auto& [key, c] : op.terms()) {
    const auto [m, k] = key;
    if (k > n) continue;
    Rational falling = 1;
    for (int j = 0; j < k; ++j) falling *= n - j;
    auto [it, inserted] = out.try_emplace(m + n - k, MultiPoly(falling) * c);
    if (!inserted) {
      it->second += MultiPoly(falling) * c;
      if (it->second.is_zero()) out.erase(it);
    }
  }
  return out;
}

WeylOperator commutator_defect(const WeylOperator& X, const WeylOperator& Y) {
  return X * Y - Y * X - MultiPoly(Rational(1, 2)) * (X * X) - MultiPoly(2) * Y;
}

bool verify_commutator_symbolic() { return commutator_defect(build_X(), build_Y()).is_zero(); }

RationalMatrix operator_matrix(const WeylOperator& op, int K, const Rational& a, const Rational& b,
                               const Rational& c) {
  if (K < 1) throw ArgumentError("operator_matrix: K must be >= 1");
  RationalMatrix M(K, K);
  for (int n = 0; n < K; ++n) {
    for (const auto& [power_of_z, coeff] : apply_to_monomial(op, n)) {
      if (power_of_z < K) M(power_of_z, n) = coeff.evaluate(a, b, c);
    }
  }
  return M;
}

}  // namespace cdh
