#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gf2.hpp"
#include "unipoly.hpp"

namespace permtri {

// Degree-reduction rules for formal algebraic elements, e.g. z^2 -> z + k
// encodes z^2 + z + k = 0.  Each rule must strictly reduce the degree of its
// variable.
struct AlgebraicContext {
  // (var, degree d, replacement with deg_var(repl) < d)
  std::vector<std::tuple<std::string, int, class MvPoly>> relations;
};

// Sparse multivariate polynomial over F_2 in named variables.  Coefficients
// are implicitly 1; a polynomial is a set of exponent vectors.  Variables are
// kept in canonical order (a, b, b1, k, z, Y, then others alphabetically) and
// trimmed to those actually used; terms are kept sorted in descending
// lexicographic order, so equality is plain comparison and serialization is
// canonical.
class MvPoly {
 public:
  MvPoly() = default;  // zero

  static MvPoly zero() { return MvPoly(); }
  static MvPoly one();
  static MvPoly variable(const std::string& name, int exp = 1);
  static MvPoly parse(const std::string& text);
  static MvPoly parse(const std::string& text, const std::vector<std::string>& allowed);

  std::string serialize() const;

  bool is_zero() const { return nterms_ == 0; }
  size_t term_count() const { return nterms_; }
  const std::vector<std::string>& vars() const { return vars_; }
  int degree(const std::string& var) const;  // -1 for the zero polynomial
  int total_degree() const;

  bool operator==(const MvPoly& o) const {
    return nterms_ == o.nterms_ && vars_ == o.vars_ && exps_ == o.exps_;
  }
  bool operator!=(const MvPoly& o) const { return !(*this == o); }

  MvPoly operator+(const MvPoly& o) const;
  MvPoly operator*(const MvPoly& o) const;
  MvPoly square() const;
  MvPoly pow(unsigned e) const;

  // Coefficient of var^e, as a polynomial without var.
  MvPoly coeff_of(const std::string& var, int e) const;
  // All coefficients by degree in var: p = sum coeffs[i] * var^i.
  std::vector<MvPoly> collect(const std::string& var) const;

  // Simultaneous substitution; a binding may not reintroduce its own variable.
  MvPoly substitute(const std::map<std::string, MvPoly>& bindings) const;
  MvPoly reduced(const AlgebraicContext& ctx) const;

  // lc(g)^power * f = quot * g + rem, with deg_var(rem) < deg_var(g) and
  // power = deg_var(f) - deg_var(g) + 1 (the classic normalization).
  static struct PseudoDiv pseudo_divrem(const MvPoly& f, const MvPoly& g, const std::string& var);

  // Resultant eliminating var, by evaluation-interpolation over F_{2^m}:
  // remaining variables run over grids of field points, field resultants come
  // from the Euclidean recurrence, and coordinates are Lagrange-interpolated
  // innermost-first.  Points where either leading coefficient vanishes are
  // skipped and replaced.
  static MvPoly resultant(const MvPoly& f, const MvPoly& g, const std::string& var,
                          int workers = 1);
  // Direct fraction-free (Bareiss) elimination of the Sylvester matrix; kept
  // as an independent cross-check for small instances.
  static MvPoly resultant_sylvester(const MvPoly& f, const MvPoly& g, const std::string& var);

  std::optional<MvPoly> divided_exactly_by(const MvPoly& d) const;

  uint64_t eval(const Field& K, const std::map<std::string, uint64_t>& point) const;

  // Conversions for single-variable polynomials with 0/1 coefficients.
  UniPoly to_unipoly(const FieldPtr& f2, const std::string& var) const;
  static MvPoly from_unipoly_f2(const UniPoly& p, const std::string& var);

  // Short description of the term-set symmetric difference, for witnesses.
  std::string diff_witness(const MvPoly& other, size_t max_terms = 8) const;

  uint16_t raw_exp(size_t term, size_t var_idx) const { return exps_[term * nvars() + var_idx]; }

 private:
  size_t nvars() const { return vars_.size(); }
  static MvPoly from_raw(std::vector<std::string> vars, std::vector<uint16_t> flat);
  friend struct MvPolyDetail;

  std::vector<std::string> vars_;  // canonical order, only used vars
  std::vector<uint16_t> exps_;     // term i at [i*nvars, (i+1)*nvars), sorted desc lex
  size_t nterms_ = 0;
};

struct PseudoDiv {
  int power;
  MvPoly quot, rem;
};

// Canonical variable comparison: a, b, b1, k, z, Y first, others alphabetical.
bool var_less(const std::string& x, const std::string& y);

// Verifies lhs == prefactor * prod(factors[i].first ^ factors[i].second)
// bit-exactly; returns an empty string on success, else a witness diff.
std::string verify_factorization(const MvPoly& lhs, const MvPoly& prefactor,
                                 const std::vector<std::pair<MvPoly, unsigned>>& factors);

}  // namespace permtri
