#pragma once

#include <algorithm>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gf2.hpp"
#include "util.hpp"

namespace permtri {

// Dense univariate polynomial over a field context F (Field or Ext).
// Coefficient i is the coefficient of X^i; trailing zeros are trimmed, the
// zero polynomial has an empty vector and degree() == -1.
template <class F>
class PolyT {
 public:
  using Ctx = std::shared_ptr<const F>;

  PolyT() = default;
  explicit PolyT(Ctx f) : f_(std::move(f)) {}
  PolyT(Ctx f, std::vector<uint64_t> coeffs) : f_(std::move(f)), c_(std::move(coeffs)) {
    trim();
  }
  static PolyT zero(Ctx f) { return PolyT(std::move(f)); }
  static PolyT constant(Ctx f, uint64_t c) { return PolyT(std::move(f), {c}); }
  static PolyT monomial(Ctx f, uint64_t c, int deg) {
    std::vector<uint64_t> v(deg + 1, 0);
    v[deg] = c;
    return PolyT(std::move(f), std::move(v));
  }

  const Ctx& ctx() const { return f_; }
  const std::vector<uint64_t>& coeffs() const { return c_; }
  int degree() const { return (int)c_.size() - 1; }
  bool is_zero() const { return c_.empty(); }
  uint64_t lc() const { return c_.empty() ? 0 : c_.back(); }
  uint64_t coeff(int i) const { return (i >= 0 && i < (int)c_.size()) ? c_[i] : 0; }

  bool operator==(const PolyT& o) const { return c_ == o.c_; }
  bool operator!=(const PolyT& o) const { return !(*this == o); }

  uint64_t eval(uint64_t x) const {
    uint64_t r = 0;
    for (size_t i = c_.size(); i-- > 0;) r = f_->add(f_->mul(r, x), c_[i]);
    return r;
  }

  PolyT operator+(const PolyT& o) const {
    check_ctx(o);
    std::vector<uint64_t> r(std::max(c_.size(), o.c_.size()), 0);
    for (size_t i = 0; i < c_.size(); ++i) r[i] = c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) r[i] = f_->add(r[i], o.c_[i]);
    return PolyT(f_, std::move(r));
  }

  PolyT operator*(const PolyT& o) const {
    check_ctx(o);
    if (is_zero() || o.is_zero()) return zero(f_);
    std::vector<uint64_t> r(c_.size() + o.c_.size() - 1, 0);
    for (size_t i = 0; i < c_.size(); ++i) {
      if (!c_[i]) continue;
      for (size_t j = 0; j < o.c_.size(); ++j)
        if (o.c_[j]) r[i + j] = f_->add(r[i + j], f_->mul(c_[i], o.c_[j]));
    }
    return PolyT(f_, std::move(r));
  }

  PolyT scaled(uint64_t s) const {
    std::vector<uint64_t> r(c_);
    for (auto& x : r) x = f_->mul(x, s);
    return PolyT(f_, std::move(r));
  }

  PolyT monic() const {
    if (is_zero()) return *this;
    return scaled(f_->inv(lc()));
  }

  PolyT pow(unsigned e) const {
    PolyT r = constant(f_, 1);
    PolyT b = *this;
    while (e) {
      if (e & 1) r = r * b;
      if (e >>= 1) b = b * b;
    }
    return r;
  }

  // Division with remainder over the field.
  static std::pair<PolyT, PolyT> divrem(const PolyT& a, const PolyT& b) {
    a.check_ctx(b);
    if (b.is_zero()) throw DomainError("polynomial division by zero");
    auto f = a.f_;
    std::vector<uint64_t> r(a.c_);
    int db = b.degree();
    uint64_t ilc = f->inv(b.lc());
    std::vector<uint64_t> q(std::max(0, (int)r.size() - db), 0);
    for (int i = (int)r.size() - 1; i >= db; --i) {
      if (!r[i]) continue;
      uint64_t c = f->mul(r[i], ilc);
      q[i - db] = c;
      for (int j = 0; j <= db; ++j) r[i - db + j] = f->add(r[i - db + j], f->mul(c, b.c_[j]));
    }
    return {PolyT(f, std::move(q)), PolyT(f, std::move(r))};
  }
  static PolyT mod(const PolyT& a, const PolyT& b) { return divrem(a, b).second; }

  // Monic gcd via Euclid.
  static PolyT gcd(PolyT a, PolyT b) {
    a.check_ctx(b);
    if (a.is_zero() && b.is_zero()) throw DomainError("gcd(0, 0)");
    while (!b.is_zero()) {
      a = mod(a, b);
      std::swap(a, b);
    }
    return a.monic();
  }

  // Resultant via the Euclidean recurrence (field coefficients, char 2: no
  // signs).  Equals the Sylvester determinant for the actual degrees.
  static uint64_t resultant(PolyT a, PolyT b) {
    a.check_ctx(b);
    if (a.is_zero() || b.is_zero()) throw DomainError("resultant of zero polynomial");
    auto f = a.f_;
    uint64_t acc = 1;
    if (a.degree() < b.degree()) std::swap(a, b);
    while (true) {
      if (b.degree() == 0) {
        // Res(a, const) = const^deg(a)
        return f->mul(acc, f->pow(b.lc(), a.degree()));
      }
      PolyT r = mod(a, b);
      if (r.is_zero()) return 0;
      acc = f->mul(acc, f->pow(b.lc(), a.degree() - r.degree()));
      a = std::move(b);
      b = std::move(r);
    }
  }

  // x^(2^k) mod m
  static PolyT frobenius_power(const PolyT& m, int k) {
    PolyT x = monomial(m.f_, 1, 1);
    PolyT s = mod(x, m);
    for (int i = 0; i < k; ++i) s = mod(s * s, m);
    return s;
  }

  // Number of distinct roots in the coefficient field: full enumeration for
  // small contexts, gcd with X^|F| - X (by repeated squaring mod p) above.
  int count_roots() const {
    if (is_zero()) throw DomainError("root count of zero polynomial");
    uint64_t sz = f_->size();
    if (sz <= (1u << 16)) return count_roots_enum();
    return count_roots_frobenius();
  }
  int count_roots_enum() const {
    uint64_t sz = f_->size();
    int n = 0;
    for (uint64_t i = 0; i < sz; ++i)
      if (eval(f_->from_index(i)) == 0) ++n;
    return n;
  }
  int count_roots_frobenius() const {
    if (degree() == 0) return 0;
    int bits = 0;
    for (uint64_t s = f_->size(); s > 1; s >>= 1) ++bits;
    PolyT s = frobenius_power(*this, bits);
    PolyT t = s + monomial(f_, 1, 1);
    if (t.is_zero()) return degree();  // every residue is a root factor
    PolyT g = gcd(t, *this);
    return g.degree();
  }

  // Rabin irreducibility over the coefficient field.
  bool is_irreducible() const {
    int d = degree();
    if (d <= 0) return false;
    if (d == 1) return true;
    int nbits = 0;
    for (uint64_t s = f_->size(); s > 1; s >>= 1) ++nbits;
    PolyT x = monomial(f_, 1, 1);
    if (frobenius_power(*this, nbits * d) != mod(x, *this)) return false;
    for (uint64_t p : prime_factors((uint64_t)d)) {
      PolyT t = frobenius_power(*this, nbits * (d / (int)p)) + x;
      if (t.is_zero()) return false;
      if (gcd(t, *this).degree() > 0) return false;
    }
    return true;
  }

  std::string serialize() const {
    if (is_zero()) return f_->format(0);
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
      if (!c_[i]) continue;
      if (!first) os << " + ";
      first = false;
      os << f_->format(c_[i]);
      if (i == 1)
        os << "*X";
      else if (i > 1)
        os << "*X^" << i;
    }
    return os.str();
  }

  static PolyT parse(Ctx f, const std::string& text) {
    std::vector<uint64_t> c;
    size_t i = 0;
    auto ws = [&] { while (i < text.size() && isspace((unsigned char)text[i])) ++i; };
    ws();
    if (i >= text.size()) throw ParseError("empty polynomial text");
    while (i < text.size()) {
      size_t j = i;
      while (j < text.size() && !isspace((unsigned char)text[j]) && text[j] != '*' && text[j] != '+')
        ++j;
      uint64_t cf = f->parse(text.substr(i, j - i));
      i = j;
      ws();
      int deg = 0;
      if (i < text.size() && text[i] == '*') {
        ++i;
        ws();
        if (i >= text.size() || text[i] != 'X') throw ParseError("expected X after '*'");
        ++i;
        deg = 1;
        if (i < text.size() && text[i] == '^') {
          ++i;
          size_t k = i;
          while (k < text.size() && isdigit((unsigned char)text[k])) ++k;
          if (k == i || k - i > 5) throw ParseError("bad exponent after '^'");
          deg = std::stoi(text.substr(i, k - i));
          if (deg > 60000) throw ParseError("exponent out of range");
          i = k;
        }
      }
      if ((int)c.size() <= deg) c.resize(deg + 1, 0);
      c[deg] = f->add(c[deg], cf);
      ws();
      if (i < text.size()) {
        if (text[i] != '+') throw ParseError("expected '+' between terms");
        ++i;
        ws();
      }
    }
    return PolyT(std::move(f), std::move(c));
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  void check_ctx(const PolyT& o) const {
    if (!f_ || !o.f_ || !f_->same(*o.f_)) throw DomainError("polynomial context mismatch");
  }

  Ctx f_;
  std::vector<uint64_t> c_;
};

using UniPoly = PolyT<Field>;
using ExtPoly = PolyT<Ext>;

// Rational function in one variable over a field, kept gcd-reduced with monic
// denominator.  Used where identities are displayed with denominator powers.
template <class F>
class FracT {
 public:
  using P = PolyT<F>;
  FracT() = default;
  explicit FracT(P num) : n_(num), d_(P::constant(num.ctx(), 1)) {}
  FracT(P num, P den) : n_(std::move(num)), d_(std::move(den)) { normalize(); }

  const P& num() const { return n_; }
  const P& den() const { return d_; }
  bool is_zero() const { return n_.is_zero(); }

  FracT operator+(const FracT& o) const { return FracT(n_ * o.d_ + o.n_ * d_, d_ * o.d_); }
  FracT operator*(const FracT& o) const { return FracT(n_ * o.n_, d_ * o.d_); }
  FracT pow(unsigned e) const {
    FracT r(P::constant(n_.ctx(), 1));
    FracT b = *this;
    while (e) {
      if (e & 1) r = r * b;
      b = b * b;
      e >>= 1;
    }
    return r;
  }
  bool operator==(const FracT& o) const { return n_ == o.n_ && d_ == o.d_; }

 private:
  void normalize() {
    if (d_.is_zero()) throw DomainError("zero denominator");
    if (n_.is_zero()) {
      d_ = P::constant(d_.ctx(), 1);
      return;
    }
    P g = P::gcd(n_, d_);
    if (g.degree() > 0) {
      n_ = P::divrem(n_, g).first;
      d_ = P::divrem(d_, g).first;
    }
    uint64_t s = n_.ctx()->inv(d_.lc());
    n_ = n_.scaled(s);
    d_ = d_.scaled(s);
  }
  P n_, d_;
};

using Frac = FracT<Field>;

}  // namespace permtri
