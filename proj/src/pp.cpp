#include "pp.hpp"

#include <algorithm>

namespace permtri {

namespace {

inline uint64_t scale_base(const Field& F, uint64_t c, uint64_t x) {
  return Ext::pack(F.mul(c, Ext::u_of(x)), F.mul(c, Ext::v_of(x)));
}

}  // namespace

Trinomial make_trinomial(ExtPtr ext, uint64_t a, uint64_t b) {
  const Field& F = ext->base();
  if (!ext->in_base(a)) throw DomainError("a must be an element of the base subfield");
  if (a == 0 || a >= F.size()) throw DomainError("a must lie in F_q^*");
  if (b == 0) throw DomainError("b must lie in F_{q^2}^*");
  Trinomial t;
  t.ext = std::move(ext);
  t.a = a;
  t.b = b;
  t.b1 = t.ext->trace(b);
  t.b_in_base = (t.b1 == 0);
  if (!t.b_in_base) {
    t.kb = F.mul(t.ext->norm(b), F.inv(F.sqr(t.b1)));
    if (F.trace(t.kb) != 1)
      throw MathError("Tr(k_b) != 1 for b outside F_q; this contradicts z = b/b1 having trace 1");
  }
  return t;
}

uint64_t eval_f(const Trinomial& t, uint64_t x) {
  if (x == 0) return 0;
  const Ext& E = *t.ext;
  uint64_t w = E.mul(E.frobenius(x), E.inv(x));  // x^{q-1}
  uint64_t w3 = E.mul(E.mul(w, w), w);
  uint64_t s = 1 ^ scale_base(E.base(), t.a, w) ^ E.mul(t.b, w3);
  uint64_t x4 = E.sqr(E.sqr(x));
  return E.mul(x4, s);
}

uint64_t eval_f_naive(const Trinomial& t, uint64_t x) {
  const Ext& E = *t.ext;
  uint64_t q = E.q();
  uint64_t s = 1 ^ E.mul(t.a, E.pow(x, q - 1)) ^ E.mul(t.b, E.pow(x, 3 * (q - 1)));
  return E.mul(E.pow(x, 4), s);
}

bool is_pp_exhaustive(const Trinomial& t) {
  const Ext& E = *t.ext;
  if (E.size() > (uint64_t(1) << 24)) throw DomainError("field too large for exhaustive scan");
  std::vector<bool> seen(E.size(), false);
  for (uint64_t i = 0; i < E.size(); ++i) {
    uint64_t y = eval_f(t, E.from_index(i));
    uint64_t idx = E.index_of(y);
    if (seen[idx]) return false;
    seen[idx] = true;
  }
  return true;
}

MuScan::MuScan(ExtPtr ext) : ext_(std::move(ext)) {
  mu_ = ext_->enumerate_mu();
  stamp_.assign(mu_.size(), 0);
  sorted_.reserve(mu_.size());
  for (uint32_t i = 0; i < mu_.size(); ++i) sorted_.push_back({mu_[i], i});
  std::sort(sorted_.begin(), sorted_.end());
}

bool MuScan::is_pp_mu(const Trinomial& t) {
  const Ext& E = *ext_;
  const Field& F = E.base();
  ++round_;
  size_t n = mu_.size();  // q + 1
  for (size_t i = 0; i < n; ++i) {
    uint64_t x = mu_[i];
    uint64_t x3 = mu_[(3 * i) % n];
    uint64_t x4 = mu_[(4 * i) % n];
    uint64_t s = 1 ^ scale_base(F, t.a, x) ^ E.mul(t.b, x3);
    if (s == 0) return false;  // f_1(x) = x^4 * 0^{q-1} = 0, not in mu
    // s^{q-1} = (s^q)^2 / N(s)
    uint64_t sq2 = E.sqr(E.frobenius(s));
    uint64_t ninv = F.inv(E.norm(s));
    uint64_t h = E.mul(x4, scale_base(F, ninv, sq2));
    auto it = std::lower_bound(sorted_.begin(), sorted_.end(), std::pair<uint64_t, uint32_t>{h, 0});
    if (it == sorted_.end() || it->first != h)
      throw MathError("mu image left the subgroup (internal error)");
    if (stamp_[it->second] == round_) return false;
    stamp_[it->second] = round_;
  }
  return true;
}

bool is_pp_mu(const Trinomial& t) {
  MuScan scan(t.ext);
  return scan.is_pp_mu(t);
}

int criterion_cubic_roots(const FieldPtr& fq, uint64_t a) {
  if (a == 0) throw DomainError("a must be nonzero");
  UniPoly p(fq, {fq->inv(a), 1, 0, 1});  // X^3 + X + 1/a
  return p.count_roots();
}

bool criterion_pp(const Trinomial& t) {
  if (t.b != t.ext->embed(t.a)) return false;
  return criterion_cubic_roots(t.ext->base_ptr(), t.a) == 0;
}

bool transport_check(const Trinomial& t, uint64_t x, uint64_t y) {
  const Ext& E = *t.ext;
  const Field& F = E.base();
  if (!E.in_base(x) || !E.in_base(y)) throw DomainError("transport points must lie in F_q");
  uint64_t z = t.b_in_base ? E.z() : E.mul(t.b, E.inv(E.embed(t.b1)));
  uint64_t s = 1 ^ E.embed(t.a) ^ t.b;  // 1 + a + b
  if (s == 0) throw DomainError("transport undefined: 1 + a + b = 0");
  auto moebius = [&](uint64_t w) {  // (w + z + 1) / (w + z); w + z has v = 1
    uint64_t d = w ^ z;
    return E.mul(d ^ 1, E.inv(d));
  };
  uint64_t X0 = moebius(x);
  uint64_t bq = E.frobenius(t.b);
  uint64_t X2 = E.sqr(X0), X3 = E.mul(X2, X0);
  uint64_t num = E.mul(X0, bq ^ scale_base(F, t.a, X2) ^ X3);
  uint64_t den = 1 ^ scale_base(F, t.a, X0) ^ E.mul(t.b, X3);
  if (den == 0) throw DomainError("pole: denominator of g vanishes at phi(x)");
  uint64_t lhs = E.mul(num, E.inv(den));
  uint64_t rhs = E.mul(E.pow(s, E.q() - 1), moebius(y));
  return lhs == rhs;
}

std::vector<uint64_t> fiber_quartic(const Trinomial& t, uint64_t y) {
  const Field& F = t.ext->base();
  if (F.size() > (uint64_t(1) << 16)) throw DomainError("field too large for fiber scan");
  uint64_t a = t.a;
  uint64_t c4, c3, c2, c1, c0;
  if (t.b == t.ext->embed(t.a)) {
    // Squared form: x^4 + a^2 x^2 + a^2 x + (k + ak + k^2 + y)^2.
    uint64_t k = t.ext->k0();
    uint64_t w = k ^ F.mul(a, k) ^ F.sqr(k) ^ y;
    c4 = 1;
    c3 = 0;
    c2 = F.sqr(a);
    c1 = F.sqr(a);
    c0 = F.sqr(w);
  } else if (t.b_in_base) {
    uint64_t b = Ext::u_of(t.b), k = t.ext->k0();
    uint64_t ab = a ^ b;
    c4 = 1 ^ ab;
    c3 = ab;
    c2 = b ^ F.mul(ab, y);
    c1 = b ^ F.mul(a ^ b, k) ^ F.mul(ab, y);
    c0 = k ^ F.mul(b, k) ^ F.sqr(k) ^ F.mul(a, F.sqr(k)) ^ F.mul(b, F.sqr(k)) ^
         F.mul(1 ^ F.mul(a, k) ^ F.mul(b, k), y);
  } else {
    uint64_t b1 = t.b1, k = t.kb;
    uint64_t b1sq = F.sqr(b1);
    uint64_t b1sqk = F.mul(b1sq, k);
    uint64_t b1k = F.mul(b1, k);
    uint64_t a2 = F.sqr(a), ab1 = F.mul(a, b1), ak = F.mul(a, k), k2 = F.sqr(k);
    c4 = a2 ^ ab1 ^ b1sqk ^ b1 ^ 1;
    c3 = a2 ^ ab1 ^ a ^ b1sqk ^ F.mul(b1, y);
    c2 = b1sqk ^ b1k ^ F.mul(a2 ^ a ^ b1sqk, y);
    c1 = F.mul(a2, k) ^ F.mul(ab1, k) ^ ak ^ F.mul(b1sq, k2) ^ b1sqk ^ b1k ^
         F.mul(a2 ^ a ^ b1sqk ^ b1k, y);
    c0 = F.mul(a2, k2) ^ F.mul(ab1, k2) ^ ak ^ F.mul(b1sq, F.mul(k2, k)) ^ F.mul(b1sq, k2) ^
         k2 ^ k ^ F.mul(F.mul(a2, k) ^ ak ^ a ^ F.mul(b1sq, k2) ^ b1k ^ 1, y);
  }
  if (c4 == 0) throw MathError("degenerate quartic fiber: C4 = 0");
  std::vector<uint64_t> roots;
  for (uint64_t x = 0; x < F.size(); ++x) {
    uint64_t v = F.mul(c4, F.sqr(F.sqr(x))) ^ F.mul(c3, F.mul(F.sqr(x), x)) ^
                 F.mul(c2, F.sqr(x)) ^ F.mul(c1, x) ^ c0;
    if (v == 0) roots.push_back(x);
  }
  return roots;
}

bool lw_unique_root(const FieldPtr& fq, uint64_t a2, uint64_t a1, uint64_t a0) {
  if (a0 == 0 || a1 == 0) throw DomainError("Leonard-Williams requires a0*a1 != 0");
  UniPoly cubic(fq, {a1, a2, 0, 1});
  return cubic.count_roots() == 0;
}

bool lw_cubic_irreducible(const FieldPtr& fq, uint64_t a2, uint64_t a1) {
  if (a1 == 0) throw DomainError("requires a1 != 0");
  const Field& F = *fq;
  uint64_t t = F.add(1, F.mul(F.pow(a2, 3), F.inv(F.sqr(a1))));
  if (F.trace(t) != 0) return false;
  auto ext = Ext::make(fq);
  if (a2 == 0) {
    // The sextic degenerates to X^3 (X^3 + a1); only the roots with
    // x^3 = a1 are meaningful.
    ExtPoly cubic(ext, {ext->embed(a1), 0, 0, 1});
    return cubic.count_roots() == 0;
  }
  ExtPoly sextic(ext, {ext->embed(F.pow(a2, 3)), 0, 0, ext->embed(a1), 0, 0, 1});
  return sextic.count_roots() == 0;
}

}  // namespace permtri
