/* permtri: exact arithmetic over binary fields, permutation-trinomial
 * criteria, and a resultant-proof replay engine, behind a C ABI.
 *
 * Conventions:
 *   - Field elements are uint64_t; bit i is the coefficient of x^i.
 *   - Quadratic-extension elements are pairs u + v*z packed as u | v<<32,
 *     with z^2 + z + k0 = 0.
 *   - Functions that can fail either return NULL / a negative int or take an
 *     int* err out-parameter; error codes below.  pt_last_error() returns a
 *     thread-local message for the most recent failure.
 *   - Strings returned as char* are heap-allocated; free with
 *     pt_string_free().
 */
#ifndef PERMTRI_H
#define PERMTRI_H

#include <stdint.h>
#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

enum {
  PT_OK = 0,
  PT_ERR_INVALID = 1, /* domain/usage error (bad degree, zero inverse, ...) */
  PT_ERR_PARSE = 2,   /* malformed literal or polynomial text */
  PT_ERR_MATH = 3,    /* an exact identity that must hold failed */
  PT_ERR_INTERNAL = 4
};

const char* pt_last_error(void);
void pt_string_free(char* s);

/* ---- base and quotient fields F_{2^n} ---------------------------------- */
typedef struct pt_field pt_field;

pt_field* pt_field_make(int n);                     /* canonical, 1 <= n <= 24 */
pt_field* pt_field_quotient(uint64_t modulus_bits); /* F_2[x]/(m)              */
void pt_field_free(pt_field* f);
int pt_field_degree(const pt_field* f);
uint64_t pt_field_modulus(const pt_field* f);
uint64_t pt_field_generator(const pt_field* f);
uint64_t pt_field_add(const pt_field* f, uint64_t a, uint64_t b);
uint64_t pt_field_mul(const pt_field* f, uint64_t a, uint64_t b);
uint64_t pt_field_inv(const pt_field* f, uint64_t a, int* err);
uint64_t pt_field_pow(const pt_field* f, uint64_t a, uint64_t e);
uint64_t pt_field_trace(const pt_field* f, uint64_t a);
int pt_field_parse(const pt_field* f, const char* text, uint64_t* out);
char* pt_field_format(const pt_field* f, uint64_t x);
/* "n: 0x..." canonical modulus per supported degree, one per line. */
char* pt_modulus_registry(void);

/* ---- quadratic extensions F_{q^2} --------------------------------------- */
typedef struct pt_ext pt_ext;

pt_ext* pt_ext_make(const pt_field* base);
void pt_ext_free(pt_ext* e);
uint64_t pt_ext_k0(const pt_ext* e);
uint64_t pt_ext_add(const pt_ext* e, uint64_t x, uint64_t y);
uint64_t pt_ext_mul(const pt_ext* e, uint64_t x, uint64_t y);
uint64_t pt_ext_inv(const pt_ext* e, uint64_t x, int* err);
uint64_t pt_ext_pow(const pt_ext* e, uint64_t x, uint64_t n);
uint64_t pt_ext_frobenius(const pt_ext* e, uint64_t x);
uint64_t pt_ext_trace(const pt_ext* e, uint64_t x);
uint64_t pt_ext_norm(const pt_ext* e, uint64_t x);
int pt_ext_parse(const pt_ext* e, const char* text, uint64_t* out); /* "u:v" */
char* pt_ext_format(const pt_ext* e, uint64_t x);
uint64_t pt_ext_mu_size(const pt_ext* e); /* q + 1 */
int pt_ext_mu_at(const pt_ext* e, uint64_t i, uint64_t* out);

/* ---- permutation trinomial f = X^4 (1 + a X^{q-1} + b X^{3(q-1)}) ------- */
typedef struct pt_trinomial pt_trinomial;

pt_trinomial* pt_trinomial_make(const pt_ext* e, uint64_t a, uint64_t b);
void pt_trinomial_free(pt_trinomial* t);
int pt_trinomial_b_in_base(const pt_trinomial* t);
uint64_t pt_trinomial_b1(const pt_trinomial* t);
uint64_t pt_trinomial_eval(const pt_trinomial* t, uint64_t x);
/* verdicts: 1 = permutation, 0 = not, negative = -error code */
int pt_pp_criterion(const pt_trinomial* t);
int pt_pp_mu(const pt_trinomial* t);
int pt_pp_exhaustive(const pt_trinomial* t);

/* ---- theorem sweep and proof replay ------------------------------------- */
/* Structured (JSON) or text report; *failures receives the number of failed
 * identity checks.  budget 0 selects the default sample count. */
char* pt_verify_theorem(int n, uint64_t budget, int workers, uint64_t seed, int as_json,
                        int* failures);
/* stages_csv: comma-separated subset of
 * coefficients,elimination,resultants,cases,step3,section4 or "all";
 * corpus_dir NULL selects the built-in corpus location. */
char* pt_replay(const char* stages_csv, const char* corpus_dir, int workers, int as_json,
                int* failures);

/* ---- sparse multivariate polynomials over F_2 --------------------------- */
typedef struct pt_poly pt_poly;

pt_poly* pt_poly_parse(const char* text);
pt_poly* pt_poly_from_corpus(const char* corpus_dir, const char* name);
void pt_poly_free(pt_poly* p);
char* pt_poly_serialize(const pt_poly* p);
pt_poly* pt_poly_add(const pt_poly* p, const pt_poly* q);
pt_poly* pt_poly_mul(const pt_poly* p, const pt_poly* q);
pt_poly* pt_poly_resultant(const pt_poly* p, const pt_poly* q, const char* var, int workers);
/* univariate gcd; both inputs must involve only var */
pt_poly* pt_poly_gcd(const pt_poly* p, const pt_poly* q, const char* var);
/* pseudo-remainder; *power receives the lc exponent of the identity */
pt_poly* pt_poly_pseudo_rem(const pt_poly* p, const pt_poly* q, const char* var, int* power);

#ifdef __cplusplus
}
#endif

#endif /* PERMTRI_H */
