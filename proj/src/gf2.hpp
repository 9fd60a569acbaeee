#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "util.hpp"

namespace permtri {

// Bit-vector polynomials over F2 (bit i = coefficient of x^i), degree <= 63.
namespace gf2x {

int degree(uint64_t p);
unsigned __int128 clmul(uint64_t a, uint64_t b);
uint64_t mod(unsigned __int128 a, uint64_t m);
inline uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) { return mod(clmul(a, b), m); }
uint64_t gcd(uint64_t a, uint64_t b);
bool irreducible(uint64_t m);
// Some nontrivial factor of a reducible m (error witness for quotient fields).
uint64_t some_factor(uint64_t m);

}  // namespace gf2x

// Distinct prime factors by trial division (n <= 2^48 in practice).
std::vector<uint64_t> prime_factors(uint64_t n);

class Field;
using FieldPtr = std::shared_ptr<const Field>;

// F_{2^n} = F_2[x]/(m).  Elements are integers in [0, 2^n), bit i holding the
// coefficient of x^i.  Immutable after construction, safe to share.
class Field {
 public:
  enum class Kind { base, quotient };

  // Canonical field of degree n (1 <= n <= 24): modulus is the irreducible
  // polynomial of smallest integer encoding with nonzero constant term.
  static FieldPtr make(int n);
  // F_2[x]/(m) for an arbitrary irreducible m; throws FieldError with a
  // nontrivial factor in the message when m is reducible.
  static FieldPtr quotient(uint64_t modulus);

  int degree() const { return n_; }
  uint64_t modulus() const { return mod_; }
  uint64_t generator() const { return gen_; }
  Kind kind() const { return kind_; }
  uint64_t size() const { return uint64_t(1) << n_; }
  uint64_t order() const { return size() - 1; }
  bool same(const Field& o) const { return n_ == o.n_ && mod_ == o.mod_; }

  uint64_t add(uint64_t a, uint64_t b) const { return a ^ b; }
  uint64_t mul(uint64_t a, uint64_t b) const {
    if (has_tables()) {
      if (a == 0 || b == 0) return 0;
      return exp_[log_[a] + log_[b]];
    }
    return gf2x::mod(gf2x::clmul(a, b), mod_);
  }
  uint64_t sqr(uint64_t a) const { return mul(a, a); }
  uint64_t inv(uint64_t a) const;  // FieldError on zero
  uint64_t pow(uint64_t a, uint64_t e) const;
  uint64_t trace(uint64_t a) const;  // absolute trace to F_2

  uint64_t from_index(uint64_t i) const { return i; }

  std::string format(uint64_t x) const;
  uint64_t parse(const std::string& text) const;

  static std::string modulus_registry();  // "n: 0x..." per supported degree

 private:
  Field(int n, uint64_t mod, Kind kind);
  bool has_tables() const { return !log_.empty(); }

  int n_;
  uint64_t mod_;
  Kind kind_;
  uint64_t gen_ = 0;
  std::vector<uint32_t> log_;  // size 2^n
  std::vector<uint32_t> exp_;  // size 2*(2^n-1), doubled to skip the mod
};

class Ext;
using ExtPtr = std::shared_ptr<const Ext>;

// Quadratic extension F_{q^2} = F_q(z) with z^2 + z + k0 = 0, Tr_{q/2}(k0)=1.
// Elements are pairs (u, v) meaning u + v*z, packed as u | v<<32.  Frobenius
// x -> x^q is (u, v) -> (u+v, v), so trace, norm and x^{q-1} cost O(1) base
// operations.
class Ext {
 public:
  static ExtPtr make(FieldPtr base);

  const Field& base() const { return *base_; }
  const FieldPtr& base_ptr() const { return base_; }
  uint64_t k0() const { return k0_; }
  int base_degree() const { return base_->degree(); }
  uint64_t size() const { return uint64_t(1) << (2 * base_->degree()); }
  uint64_t order() const { return size() - 1; }
  uint64_t q() const { return base_->size(); }
  uint64_t generator() const { return gen_; }
  bool same(const Ext& o) const { return base_->same(*o.base_) && k0_ == o.k0_; }

  static uint64_t pack(uint64_t u, uint64_t v) { return u | (v << 32); }
  static uint64_t u_of(uint64_t x) { return x & 0xffffffffULL; }
  static uint64_t v_of(uint64_t x) { return x >> 32; }
  uint64_t z() const { return pack(0, 1); }
  bool in_base(uint64_t x) const { return v_of(x) == 0; }
  uint64_t embed(uint64_t u) const { return u; }

  uint64_t add(uint64_t x, uint64_t y) const { return x ^ y; }
  uint64_t mul(uint64_t x, uint64_t y) const {
    const Field& F = *base_;
    uint64_t u1 = u_of(x), v1 = v_of(x), u2 = u_of(y), v2 = v_of(y);
    uint64_t m1 = F.mul(u1, u2);
    uint64_t m2 = F.mul(v1, v2);
    uint64_t m3 = F.mul(u1 ^ v1, u2 ^ v2);
    return pack(m1 ^ F.mul(k0_, m2), m3 ^ m1);
  }
  uint64_t sqr(uint64_t x) const {
    const Field& F = *base_;
    uint64_t u = u_of(x), v = v_of(x);
    uint64_t v2 = F.sqr(v);
    return pack(F.sqr(u) ^ F.mul(k0_, v2), v2);
  }
  uint64_t frobenius(uint64_t x) const { return pack(u_of(x) ^ v_of(x), v_of(x)); }
  uint64_t trace(uint64_t x) const { return v_of(x); }          // x + x^q, in F_q
  uint64_t norm(uint64_t x) const {                             // x * x^q, in F_q
    const Field& F = *base_;
    uint64_t u = u_of(x), v = v_of(x);
    return F.sqr(u) ^ F.mul(u, v) ^ F.mul(k0_, F.sqr(v));
  }
  uint64_t inv(uint64_t x) const {
    if (x == 0) throw FieldError("inverse of zero");
    uint64_t ninv = base_->inv(norm(x));
    uint64_t xq = frobenius(x);
    return pack(base_->mul(u_of(xq), ninv), base_->mul(v_of(xq), ninv));
  }
  uint64_t pow(uint64_t x, uint64_t e) const;
  uint64_t from_index(uint64_t i) const {
    uint64_t mask = base_->size() - 1;
    return pack(i & mask, i >> base_->degree());
  }
  uint64_t index_of(uint64_t x) const { return u_of(x) | (v_of(x) << base_->degree()); }

  // mu_{q+1} = {x : x^{q+1} = 1}, as the q+1 consecutive powers of g^{q-1}.
  std::vector<uint64_t> enumerate_mu() const;

  std::string format(uint64_t x) const;
  uint64_t parse(const std::string& text) const;

 private:
  explicit Ext(FieldPtr base);
  FieldPtr base_;
  uint64_t k0_;
  uint64_t gen_;
};

}  // namespace permtri
