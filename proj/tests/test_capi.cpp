// Exercises the public C surface end to end (the same one the CLI links).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <string>

#include "permtri.h"

namespace {
std::string take(char* s) {
  REQUIRE(s != nullptr);
  std::string out = s;
  pt_string_free(s);
  return out;
}
}  // namespace

TEST_CASE("field lifecycle and arithmetic") {
  pt_field* f = pt_field_make(2);
  REQUIRE(f);
  CHECK(pt_field_degree(f) == 2);
  CHECK(pt_field_modulus(f) == 0x7);
  CHECK(pt_field_mul(f, 0x2, 0x2) == 0x3);
  int err = PT_OK;
  CHECK(pt_field_inv(f, 0x2, &err) == 0x3);
  CHECK(err == PT_OK);
  pt_field_inv(f, 0, &err);
  CHECK(err == PT_ERR_INVALID);
  CHECK(std::string(pt_last_error()).find("zero") != std::string::npos);
  uint64_t v = 0;
  CHECK(pt_field_parse(f, "0x2", &v) == PT_OK);
  CHECK(v == 2);
  CHECK(pt_field_parse(f, "0x1z", &v) == PT_ERR_PARSE);
  CHECK(take(pt_field_format(f, 2)) == "0x2");
  pt_field_free(f);
  CHECK(pt_field_make(99) == nullptr);
}

TEST_CASE("quotient fields via the C surface") {
  pt_field* q = pt_field_quotient(0xb);
  REQUIRE(q);
  CHECK(pt_field_degree(q) == 3);
  pt_field_free(q);
  CHECK(pt_field_quotient(0x5) == nullptr);  // (x+1)^2
  CHECK(std::string(pt_last_error()).find("reducible") != std::string::npos);
}

TEST_CASE("extension, mu and trinomial verdicts") {
  pt_field* f = pt_field_make(2);
  pt_ext* e = pt_ext_make(f);
  REQUIRE(e);
  CHECK(pt_ext_k0(e) != 0);
  CHECK(pt_ext_mu_size(e) == 5);
  uint64_t x = 0;
  CHECK(pt_ext_mu_at(e, 0, &x) == PT_OK);
  CHECK(x == 1);
  CHECK(pt_ext_mu_at(e, 99, &x) == PT_ERR_INVALID);
  uint64_t b = 0;
  CHECK(pt_ext_parse(e, "0x1:0x0", &b) == PT_OK);
  CHECK(take(pt_ext_format(e, b)) == "0x1:0x0");
  CHECK(pt_ext_trace(e, b) == 0);
  CHECK(pt_ext_norm(e, b) == 1);

  pt_trinomial* t = pt_trinomial_make(e, 1, b);
  REQUIRE(t);
  CHECK(pt_trinomial_b_in_base(t) == 1);
  CHECK(pt_pp_criterion(t) == 1);
  CHECK(pt_pp_mu(t) == 1);
  CHECK(pt_pp_exhaustive(t) == 1);
  pt_trinomial_free(t);

  pt_trinomial* t2 = pt_trinomial_make(e, 2, 2);
  CHECK(pt_pp_criterion(t2) == 0);
  CHECK(pt_pp_mu(t2) == 0);
  pt_trinomial_free(t2);

  CHECK(pt_trinomial_make(e, 0, 1) == nullptr);
  pt_ext_free(e);
  pt_field_free(f);
}

TEST_CASE("modulus registry") {
  std::string reg = take(pt_modulus_registry());
  CHECK(reg.rfind("1: 0x3\n", 0) == 0);
  CHECK(reg.find("3: 0xb\n") != std::string::npos);
}

TEST_CASE("poly tools") {
  pt_poly* p = pt_poly_parse("a^2+1");
  pt_poly* q = pt_poly_parse("a+1");
  REQUIRE(p);
  REQUIRE(q);
  pt_poly* g = pt_poly_gcd(p, q, "a");
  CHECK(take(pt_poly_serialize(g)) == "a+1");
  pt_poly_free(g);
  pt_poly* s = pt_poly_add(p, q);
  CHECK(take(pt_poly_serialize(s)) == "a^2+a");
  pt_poly_free(s);
  pt_poly_free(p);
  pt_poly_free(q);
  CHECK(pt_poly_parse("a^") == nullptr);
  CHECK(std::string(pt_last_error()).find("exponent") != std::string::npos);

  // Corpus-backed resultant: Res(E2, E3; a) = b1^17 k^2.
  pt_poly* e2 = pt_poly_from_corpus(nullptr, "E2");
  pt_poly* e3 = pt_poly_from_corpus(nullptr, "E3");
  REQUIRE(e2);
  REQUIRE(e3);
  pt_poly* r = pt_poly_resultant(e2, e3, "a", 1);
  CHECK(take(pt_poly_serialize(r)) == "b1^17*k^2");
  pt_poly_free(r);

  // Pseudo-remainder of h1 + b1^8 h1' by h2 in k is 0.
  pt_poly* h1 = pt_poly_from_corpus(nullptr, "h1");
  pt_poly* h1p = pt_poly_from_corpus(nullptr, "h1p");
  pt_poly* h2 = pt_poly_from_corpus(nullptr, "h2");
  pt_poly* b18 = pt_poly_parse("b1^8");
  pt_poly* shift = pt_poly_mul(b18, h1p);
  pt_poly* sum = pt_poly_add(h1, shift);
  int power = 0;
  pt_poly* rem = pt_poly_pseudo_rem(sum, h2, "k", &power);
  CHECK(take(pt_poly_serialize(rem)) == "0");
  CHECK(power == 11);
  for (pt_poly* x : {e2, e3, h1, h1p, h2, b18, shift, sum, rem}) pt_poly_free(x);
}

TEST_CASE("theorem sweep through the C surface") {
  int failures = -1;
  std::string rep = take(pt_verify_theorem(2, 0, 1, 1, 1, &failures));
  CHECK(failures == 0);
  CHECK(rep.find("\"summary\"") != std::string::npos);
  CHECK(rep.find("pp_count=1") != std::string::npos);
}

TEST_CASE("replay through the C surface") {
  int failures = -1;
  std::string rep = take(pt_replay("coefficients", nullptr, 1, 0, &failures));
  CHECK(failures == 0);
  CHECK(rep.find("stage coefficients") != std::string::npos);
  CHECK(pt_replay("coefficients,bogus", nullptr, 1, 0, &failures) == nullptr);
  CHECK(pt_replay("cases", nullptr, 1, 0, &failures) == nullptr);  // missing deps
}
