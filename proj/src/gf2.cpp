#include "gf2.hpp"

#include <algorithm>
#include <sstream>

namespace permtri {

namespace gf2x {

int degree(uint64_t p) { return p == 0 ? -1 : 63 - __builtin_clzll(p); }

unsigned __int128 clmul(uint64_t a, uint64_t b) {
  unsigned __int128 acc = 0;
  while (b) {
    int i = __builtin_ctzll(b);
    acc ^= (unsigned __int128)a << i;
    b &= b - 1;
  }
  return acc;
}

uint64_t mod(unsigned __int128 a, uint64_t m) {
  int dm = degree(m);
  while (true) {
    int da;
    uint64_t hi = (uint64_t)(a >> 64);
    if (hi)
      da = 64 + degree(hi);
    else {
      uint64_t lo = (uint64_t)a;
      if (!lo) return 0;
      da = degree(lo);
    }
    if (da < dm) return (uint64_t)a;
    a ^= (unsigned __int128)m << (da - dm);
  }
}

uint64_t gcd(uint64_t a, uint64_t b) {
  while (b) {
    a = mod(a, b);
    std::swap(a, b);
  }
  return a;
}

static uint64_t sqr_mod(uint64_t a, uint64_t m) { return mod(clmul(a, a), m); }

// x^(2^k) mod m
static uint64_t frob_pow(uint64_t x, int k, uint64_t m) {
  for (int i = 0; i < k; ++i) x = sqr_mod(x, m);
  return x;
}

bool irreducible(uint64_t m) {
  int d = degree(m);
  if (d <= 0) return false;
  if (d == 1) return true;
  // Rabin: x^(2^d) == x mod m, and x^(2^(d/p)) - x coprime to m for primes p|d.
  uint64_t x = 2;
  if (frob_pow(x, d, m) != x) return false;
  for (uint64_t p : prime_factors((uint64_t)d)) {
    uint64_t t = frob_pow(x, d / (int)p, m) ^ x;
    if (degree(gcd(t, m)) > 0) return false;
  }
  return true;
}

static uint64_t derivative(uint64_t m) {
  uint64_t d = 0;
  for (int i = 1; i <= degree(m); i += 2)
    if (m >> i & 1) d |= uint64_t(1) << (i - 1);
  return d;
}

uint64_t some_factor(uint64_t m) {
  int d = degree(m);
  if (d <= 1) return 0;
  uint64_t der = derivative(m);
  if (der == 0) {
    // Only even powers present: m = s(x)^2.
    uint64_t s = 0;
    for (int i = 0; i <= d; i += 2)
      if (m >> i & 1) s |= uint64_t(1) << (i / 2);
    return s;
  }
  uint64_t g = gcd(m, der);
  if (degree(g) > 0 && degree(g) < d) return g;
  // Squarefree: distinct-degree scan.
  for (int r = 1; 2 * r <= d; ++r) {
    uint64_t t = frob_pow(2, r, m) ^ 2;
    uint64_t gr = gcd(t, m);
    int dg = degree(gr);
    if (dg == 0) continue;
    if (dg < d) return gr;
    // All irreducible factors have degree exactly r; split by trace maps.
    for (uint64_t u = 2;; ++u) {
      uint64_t um = mod(u, m);
      uint64_t v = 0, p = um;
      for (int i = 0; i < r; ++i) {
        v ^= p;
        p = sqr_mod(p, m);
      }
      uint64_t h = gcd(v, m);
      if (degree(h) > 0 && degree(h) < d) return h;
      h = gcd(v ^ 1, m);
      if (degree(h) > 0 && degree(h) < d) return h;
    }
  }
  return 0;  // unreachable for reducible m
}

}  // namespace gf2x

std::vector<uint64_t> prime_factors(uint64_t n) {
  std::vector<uint64_t> ps;
  for (uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p == 0) {
      ps.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) ps.push_back(n);
  return ps;
}

Field::Field(int n, uint64_t mod, Kind kind) : n_(n), mod_(mod), kind_(kind) {
  if (!gf2x::irreducible(mod_)) {
    std::ostringstream os;
    os << "modulus 0x" << std::hex << mod_ << " is reducible; factor 0x"
       << gf2x::some_factor(mod_);
    throw FieldError(os.str());
  }
  if (n_ <= 16 && n_ >= 1) {
    uint64_t card = size();
    log_.assign(card, 0);
    exp_.assign(2 * (card - 1) + 2, 1);
  }
  // Generator: ascending encodings, order test against the factorization of
  // 2^n - 1 by trial division.
  uint64_t ord = order();
  auto ps = prime_factors(ord);
  auto pow_nt = [&](uint64_t a, uint64_t e) {  // table-free pow for bootstrap
    uint64_t r = 1;
    while (e) {
      if (e & 1) r = gf2x::mulmod(r, a, mod_);
      a = gf2x::mulmod(a, a, mod_);
      e >>= 1;
    }
    return r;
  };
  for (uint64_t c = (ord == 1 ? 1 : 2); c < size(); ++c) {
    bool ok = true;
    for (uint64_t p : ps)
      if (pow_nt(c, ord / p) == 1) {
        ok = false;
        break;
      }
    if (ok && pow_nt(c, ord) == 1) {
      gen_ = c;
      break;
    }
  }
  if (gen_ == 0) throw FieldError("no generator found (modulus not irreducible?)");
  if (!log_.empty()) {
    uint64_t v = 1;
    for (uint64_t i = 0; i < ord; ++i) {
      exp_[i] = exp_[i + ord] = (uint32_t)v;
      log_[v] = (uint32_t)i;
      v = gf2x::mulmod(v, gen_, mod_);
    }
  }
}

FieldPtr Field::make(int n) {
  if (n < 1 || n > 24) throw DomainError("field degree out of supported range [1,24]");
  // Smallest-encoding irreducible with nonzero constant term.
  for (uint64_t t = 1; t < (uint64_t(1) << n); t += 2) {
    uint64_t m = (uint64_t(1) << n) | t;
    if (gf2x::irreducible(m)) return FieldPtr(new Field(n, m, Kind::base));
  }
  throw FieldError("no irreducible modulus found");
}

FieldPtr Field::quotient(uint64_t modulus) {
  int d = gf2x::degree(modulus);
  if (d < 1) throw DomainError("quotient modulus must be nonconstant");
  if (d > 48) throw DomainError("quotient degree out of supported range [1,48]");
  return FieldPtr(new Field(d, modulus, Kind::quotient));
}

uint64_t Field::inv(uint64_t a) const {
  if (a == 0) throw FieldError("inverse of zero");
  if (has_tables()) {
    uint64_t ord = order();
    return exp_[(ord - log_[a]) % ord];
  }
  return pow(a, order() - 1);
}

uint64_t Field::pow(uint64_t a, uint64_t e) const {
  if (a == 0) return e == 0 ? 1 : 0;
  if (has_tables()) {
    uint64_t ord = order();
    return exp_[(uint64_t)log_[a] * (e % ord) % ord];
  }
  uint64_t r = 1;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

uint64_t Field::trace(uint64_t a) const {
  uint64_t t = 0, s = a;
  for (int i = 0; i < n_; ++i) {
    t ^= s;
    s = sqr(s);
  }
  return t;
}

std::string Field::format(uint64_t x) const {
  std::ostringstream os;
  os << "0x" << std::hex << x;
  return os.str();
}

uint64_t Field::parse(const std::string& text) const {
  size_t i = 0;
  if (text.size() >= 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) i = 2;
  if (i >= text.size()) throw ParseError("empty element literal: '" + text + "'");
  uint64_t v = 0;
  for (; i < text.size(); ++i) {
    char c = text[i];
    int d;
    if (c >= '0' && c <= '9')
      d = c - '0';
    else if (c >= 'a' && c <= 'f')
      d = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F')
      d = c - 'A' + 10;
    else
      throw ParseError("bad hex digit in element literal: '" + text + "'");
    if (v >> 60) throw ParseError("element literal out of range: '" + text + "'");
    v = v << 4 | d;
  }
  if (v >= size()) throw ParseError("element literal out of field range: '" + text + "'");
  return v;
}

std::string Field::modulus_registry() {
  std::ostringstream os;
  for (int n = 1; n <= 24; ++n) {
    auto f = Field::make(n);
    os << n << ": " << std::hex << "0x" << f->modulus() << std::dec << "\n";
  }
  return os.str();
}

Ext::Ext(FieldPtr base) : base_(std::move(base)) {
  const Field& F = *base_;
  k0_ = 0;
  for (uint64_t c = 0; c < F.size(); ++c)
    if (F.trace(c) == 1) {
      k0_ = c;
      break;
    }
  // (A trace-one element always exists: trace is onto F_2.)
  uint64_t ord = order();
  auto ps = prime_factors(ord);
  gen_ = 0;
  for (uint64_t i = 2;; ++i) {
    uint64_t c = from_index(i);
    bool ok = true;
    for (uint64_t p : ps)
      if (pow(c, ord / p) == 1) {
        ok = false;
        break;
      }
    if (ok) {
      gen_ = c;
      break;
    }
  }
}

ExtPtr Ext::make(FieldPtr base) {
  if (base->kind() != Field::Kind::base)
    throw DomainError("quadratic extension requires a base field context");
  return ExtPtr(new Ext(std::move(base)));
}

uint64_t Ext::pow(uint64_t x, uint64_t e) const {
  if (x == 0) return e == 0 ? 1 : 0;
  uint64_t r = 1;
  while (e) {
    if (e & 1) r = mul(r, x);
    x = sqr(x);
    e >>= 1;
  }
  return r;
}

std::vector<uint64_t> Ext::enumerate_mu() const {
  uint64_t h = pow(gen_, q() - 1);
  std::vector<uint64_t> mu;
  mu.reserve(q() + 1);
  uint64_t x = 1;
  for (uint64_t i = 0; i <= q(); ++i) {
    mu.push_back(x);
    x = mul(x, h);
  }
  if (x != 1) throw MathError("mu_{q+1} enumeration did not close");
  return mu;
}

std::string Ext::format(uint64_t x) const {
  return base_->format(u_of(x)) + ":" + base_->format(v_of(x));
}

uint64_t Ext::parse(const std::string& text) const {
  auto pos = text.find(':');
  if (pos == std::string::npos) throw ParseError("extension literal must be 'u:v': '" + text + "'");
  uint64_t u = base_->parse(text.substr(0, pos));
  uint64_t v = base_->parse(text.substr(pos + 1));
  return pack(u, v);
}

}  // namespace permtri
