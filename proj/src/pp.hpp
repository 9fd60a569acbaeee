#pragma once

#include <optional>
#include <vector>

#include "gf2.hpp"
#include "unipoly.hpp"

namespace permtri {

// One trinomial f(X) = X^4 (1 + a X^{q-1} + b X^{3(q-1)}) over F_{q^2}, with
// a in F_q^*, b in F_{q^2}^*, and the derived quantities the analysis uses.
struct Trinomial {
  ExtPtr ext;
  uint64_t a = 0;   // base element, embedded as (a, 0)
  uint64_t b = 0;   // extension element
  uint64_t b1 = 0;  // b + b^q (base element); b in F_q iff b1 == 0
  uint64_t kb = 0;  // b^{1+q} / b1^2 when b1 != 0
  bool b_in_base = false;
};

Trinomial make_trinomial(ExtPtr ext, uint64_t a, uint64_t b);

uint64_t eval_f(const Trinomial& t, uint64_t x);
uint64_t eval_f_naive(const Trinomial& t, uint64_t x);  // pow-based oracle

// Shared per-extension scan state so sweeps do not rebuild mu tables.
class MuScan {
 public:
  explicit MuScan(ExtPtr ext);
  const std::vector<uint64_t>& mu() const { return mu_; }
  // f permutes F_{q^2} iff x^4 (1+ax+bx^3)^{q-1} permutes mu_{q+1}; the value
  // is 0 exactly where 1+ax+bx^3 vanishes, which already refutes the PP.
  bool is_pp_mu(const Trinomial& t);

 private:
  ExtPtr ext_;
  std::vector<uint64_t> mu_;
  std::vector<std::pair<uint64_t, uint32_t>> sorted_;  // element -> mu index
  std::vector<uint32_t> stamp_;                        // mu index -> round mark
  uint32_t round_ = 0;
};

bool is_pp_exhaustive(const Trinomial& t);          // q^2 <= 2^24
bool is_pp_mu(const Trinomial& t);                  // convenience, one-shot
bool criterion_pp(const Trinomial& t);              // a == b and X^3+X+1/a rootless

// Both sides of the fractional-linear transport identity at (x, y) in F_q^2.
// Throws DomainError("pole...") when the denominator of g vanishes.
bool transport_check(const Trinomial& t, uint64_t x, uint64_t y);

// Roots in F_q of the quartic fiber over y: the C_i(y) quartic in general,
// and the squared a==b form x^4 + a^2 x^2 + a^2 x + (k+ak+k^2+y)^2.
std::vector<uint64_t> fiber_quartic(const Trinomial& t, uint64_t y);

// Leonard-Williams criteria over F_q.
// (i) X^4+a2 X^2+a1 X+a0 has a unique root iff X^3+a2 X+a1 is irreducible,
//     and for a cubic irreducible == rootless.
bool lw_unique_root(const FieldPtr& fq, uint64_t a2, uint64_t a1, uint64_t a0);
// (ii) X^3+a2 X+a1 irreducible iff Tr(1+a2^3/a1^2)=0 and X^6+a1 X^3+a2^3 has
//      no root in F_{q^2}.
bool lw_cubic_irreducible(const FieldPtr& fq, uint64_t a2, uint64_t a1);

// Number of distinct roots of X^3 + X + 1/a over F_q (criterion cubic).
int criterion_cubic_roots(const FieldPtr& fq, uint64_t a);

}  // namespace permtri
