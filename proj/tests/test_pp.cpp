#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "catalog.hpp"
#include "pp.hpp"
#include "runner.hpp"
#include "util.hpp"

using namespace permtri;

namespace {

// Brute-force PP oracle straight from the definition, used to anchor the
// optimized evaluators.
bool is_pp_bruteforce(const Trinomial& t) {
  const Ext& E = *t.ext;
  std::set<uint64_t> img;
  for (uint64_t i = 0; i < E.size(); ++i) img.insert(eval_f_naive(t, E.from_index(i)));
  return img.size() == E.size();
}

}  // namespace

TEST_CASE("trinomial construction and derived quantities") {
  auto ext = Ext::make(Field::make(2));
  // b = 1: fixed by Frobenius, so b1 = 0
  Trinomial t1 = make_trinomial(ext, 1, 1);
  CHECK(t1.b_in_base);
  CHECK(t1.b1 == 0);
  // b = z: trace 1
  Trinomial t2 = make_trinomial(ext, 1, ext->z());
  CHECK(!t2.b_in_base);
  CHECK(t2.b1 == 1);
  CHECK_THROWS_AS(make_trinomial(ext, 0, 1), DomainError);
  CHECK_THROWS_AS(make_trinomial(ext, 1, 0), DomainError);
  CHECK_THROWS_AS(make_trinomial(ext, Ext::pack(1, 1), 1), DomainError);
  // Tr(k_b) = 1 for every b outside the base field (here: all of them)
  auto ext8 = Ext::make(Field::make(3));
  for (uint64_t i = 1; i < ext8->size(); ++i) {
    uint64_t b = ext8->from_index(i);
    if (ext8->in_base(b)) continue;
    Trinomial t = make_trinomial(ext8, 1, b);
    CHECK(ext8->base().trace(t.kb) == 1);
  }
}

TEST_CASE("eval_f: fixed points and agreement with the pow oracle") {
  auto ext = Ext::make(Field::make(4));  // F_256
  Trinomial t = make_trinomial(ext, 0x7, Ext::pack(0x3, 0x9));
  CHECK(eval_f(t, 0) == 0);
  CHECK(eval_f(t, 1) == (1 ^ ext->embed(t.a) ^ t.b));  // exponents vanish at 1
  for (int i = 0; i < 10000; ++i) {
    uint64_t x = ext->from_index(rng_at(17, i) & (ext->size() - 1));
    CHECK(eval_f(t, x) == eval_f_naive(t, x));
  }
}

TEST_CASE("worked q=4 examples") {
  auto ext = Ext::make(Field::make(2));
  // a = b = 1: X^3 + X + 1 rootless in F_4, so f is a PP
  Trinomial good = make_trinomial(ext, 1, 1);
  CHECK(criterion_pp(good));
  CHECK(is_pp_mu(good));
  CHECK(is_pp_exhaustive(good));
  CHECK(is_pp_bruteforce(good));
  // a = b = w: X^3 + X + w^2 has the root w
  Trinomial bad1 = make_trinomial(ext, 0x2, 0x2);
  CHECK(!criterion_pp(bad1));
  CHECK(!is_pp_exhaustive(bad1));
  // a = 1, b = w: a != b violates necessity
  Trinomial bad2 = make_trinomial(ext, 1, 0x2);
  CHECK(!criterion_pp(bad2));
  CHECK(!is_pp_exhaustive(bad2));
}

TEST_CASE("oracle agreement, exhaustive at q = 4 and q = 8") {
  for (int n : {2, 3}) {
    auto ext = Ext::make(Field::make(n));
    MuScan scan(ext);
    uint64_t q = ext->q();
    int pairs = 0, pps = 0;
    for (uint64_t a = 1; a < q; ++a)
      for (uint64_t bi = 1; bi < ext->size(); ++bi) {
        Trinomial t = make_trinomial(ext, a, ext->from_index(bi));
        bool ex = is_pp_exhaustive(t);
        CHECK(scan.is_pp_mu(t) == ex);
        CHECK(criterion_pp(t) == ex);
        ++pairs;
        pps += ex;
      }
    CHECK(pairs == (int)((q - 1) * (q * q - 1)));
    // PP count equals the rootless-cubic count
    int rootless = 0;
    auto fq = Field::make(n);
    for (uint64_t a = 1; a < q; ++a) rootless += criterion_cubic_roots(fq, a) == 0;
    CHECK(pps == rootless);
    if (n == 2) CHECK(pps == 1);
  }
}

TEST_CASE("triple-oracle agreement on random pairs at q = 16, 32, 64") {
  for (int n : {4, 5, 6}) {
    auto ext = Ext::make(Field::make(n));
    MuScan scan(ext);
    uint64_t q = ext->q();
    for (int i = 0; i < 10000; ++i) {
      uint64_t a = 1 + rng_at(1000 + n, 2 * i) % (q - 1);
      uint64_t b = ext->from_index(1 + rng_at(1000 + n, 2 * i + 1) % (ext->size() - 1));
      Trinomial t = make_trinomial(ext, a, b);
      bool cr = criterion_pp(t);
      bool mu = scan.is_pp_mu(t);
      REQUIRE(cr == mu);
      // The exhaustive oracle is the expensive one; always run it on
      // criterion-true pairs and on a deterministic slice of the rest.
      if (cr || i % 50 == 0) REQUIRE(is_pp_exhaustive(t) == cr);
    }
  }
}

TEST_CASE("a PP implies 1 + aX + bX^3 has no root on mu") {
  for (int n : {2, 3}) {
    auto ext = Ext::make(Field::make(n));
    const Field& F = ext->base();
    auto mu = ext->enumerate_mu();
    MuScan scan(ext);
    for (uint64_t a = 1; a < ext->q(); ++a)
      for (uint64_t bi = 1; bi < ext->size(); ++bi) {
        Trinomial t = make_trinomial(ext, a, ext->from_index(bi));
        if (!scan.is_pp_mu(t)) continue;
        for (uint64_t x : mu) {
          uint64_t x3 = ext->mul(ext->mul(x, x), x);
          uint64_t s = 1 ^ Ext::pack(F.mul(a, Ext::u_of(x)), F.mul(a, Ext::v_of(x))) ^
                       ext->mul(t.b, x3);
          CHECK(s != 0);
        }
      }
  }
}

TEST_CASE("a root of 1 + aX + bX^3 in mu refutes the mu test") {
  auto ext = Ext::make(Field::make(3));
  auto mu = ext->enumerate_mu();
  const Field& F = ext->base();
  int found = 0;
  for (uint64_t a = 1; a < ext->q() && found < 5; ++a)
    for (uint64_t bi = 1; bi < ext->size() && found < 5; ++bi) {
      uint64_t b = ext->from_index(bi);
      for (uint64_t x : mu) {
        uint64_t x3 = ext->mul(ext->mul(x, x), x);
        uint64_t s = 1 ^ Ext::pack(F.mul(a, Ext::u_of(x)), F.mul(a, Ext::v_of(x))) ^
                     ext->mul(b, x3);
        if (s == 0) {
          Trinomial t = make_trinomial(ext, a, b);
          CHECK(!is_pp_mu(t));
          ++found;
          break;
        }
      }
    }
  CHECK(found == 5);
}

TEST_CASE("transport map: phi is a bijection onto mu") {
  auto ext = Ext::make(Field::make(3));
  uint64_t z = ext->z();
  std::set<uint64_t> image;
  for (uint64_t x = 0; x < ext->q(); ++x) {
    uint64_t d = x ^ z;
    image.insert(ext->mul(d ^ 1, ext->inv(d)));
  }
  image.insert(1);  // phi(infinity)
  auto mu = ext->enumerate_mu();
  CHECK(image == std::set<uint64_t>(mu.begin(), mu.end()));
}

TEST_CASE("transport fibers match the PP character") {
  auto ext = Ext::make(Field::make(2));
  // PP instance: each y has exactly one transport solution x
  Trinomial good = make_trinomial(ext, 1, 1);
  for (uint64_t y = 0; y < 4; ++y) {
    int sols = 0;
    for (uint64_t x = 0; x < 4; ++x) sols += transport_check(good, x, y);
    CHECK(sols == 1);
  }
  // non-PP instance: some y has 0 or >= 2 solutions
  Trinomial bad = make_trinomial(ext, 0x2, 0x2);
  bool anomaly = false;
  for (uint64_t y = 0; y < 4; ++y) {
    int sols = 0;
    for (uint64_t x = 0; x < 4; ++x) {
      try {
        sols += transport_check(bad, x, y);
      } catch (const DomainError&) {
        // pole of g: counts as no solution at this x
      }
    }
    if (sols != 1) anomaly = true;
  }
  CHECK(anomaly);
}

TEST_CASE("quartic fibers") {
  auto ext = Ext::make(Field::make(2));
  // a = b case at q = 4, a = 1: every y gives exactly one root of (4.1)
  Trinomial good = make_trinomial(ext, 1, 1);
  int total = 0;
  for (uint64_t y = 0; y < 4; ++y) {
    auto roots = fiber_quartic(good, y);
    CHECK(roots.size() == 1);
    total += (int)roots.size();
    // (4.1) roots are the squares of the transport solutions
    std::set<uint64_t> sq;
    for (uint64_t x = 0; x < 4; ++x)
      if (transport_check(good, x, y)) sq.insert(ext->base().sqr(x));
    CHECK(sq == std::set<uint64_t>(roots.begin(), roots.end()));
  }
  CHECK(total == 4);  // fiber sizes sum to q for a PP

  // General b1 != 0 path: roots of the C_i(y) quartic are the transport
  // solutions themselves, and counts land in {0, 1, 2, 4}.
  auto ext8 = Ext::make(Field::make(3));
  for (uint64_t bi : {9ull, 10ull, 12ull, 20ull, 33ull}) {
    uint64_t b = ext8->from_index(bi);
    if (ext8->in_base(b)) continue;
    Trinomial t = make_trinomial(ext8, 3, b);
    if ((1 ^ ext8->embed(t.a) ^ t.b) == 0) continue;
    for (uint64_t y = 0; y < 8; ++y) {
      auto roots = fiber_quartic(t, y);
      std::set<uint64_t> expect;
      for (uint64_t x = 0; x < 8; ++x) {
        try {
          if (transport_check(t, x, y)) expect.insert(x);
        } catch (const DomainError&) {
        }
      }
      CHECK(std::set<uint64_t>(roots.begin(), roots.end()) == expect);
      size_t c = roots.size();
      CHECK((c == 0 || c == 1 || c == 2 || c == 4));
    }
  }
}

TEST_CASE("numeric fiber coefficients agree with the symbolic displays") {
  // The quartic evaluated inside fiber_quartic is hand-coded; its root sets
  // must match brute-force roots of the corpus C-display evaluations.
  Catalog cat = Catalog::load(default_corpus_dir());
  auto ext = Ext::make(Field::make(4));
  const Field& F = ext->base();
  auto roots_of = [&](const std::vector<MvPoly>& C,
                      const std::map<std::string, uint64_t>& pt) {
    std::set<uint64_t> roots;
    std::vector<uint64_t> c;
    for (const auto& p : C) c.push_back(p.eval(F, pt));
    for (uint64_t x = 0; x < F.size(); ++x) {
      uint64_t v = 0, pw = 1;
      for (int i = 0; i <= 4; ++i) {
        v ^= F.mul(c[i], pw);
        pw = F.mul(pw, x);
      }
      if (v == 0) roots.insert(x);
    }
    return roots;
  };
  std::vector<MvPoly> C31, C4s;
  for (int i = 0; i <= 4; ++i) C31.push_back(cat.get("C" + std::to_string(i)));
  for (int i = 0; i <= 4; ++i) C4s.push_back(cat.get("C" + std::to_string(i) + "_s4"));
  int done31 = 0;
  for (int i = 0; i < 300 && done31 < 40; ++i) {
    uint64_t a = 1 + rng_at(808, 2 * i) % (ext->q() - 1);
    uint64_t b = ext->from_index(1 + rng_at(808, 2 * i + 1) % (ext->size() - 1));
    Trinomial t = make_trinomial(ext, a, b);
    uint64_t y = rng_at(809, i) % ext->q();
    if (t.b_in_base) continue;
    auto got = fiber_quartic(t, y);
    auto want = roots_of(C31, {{"a", a}, {"b1", t.b1}, {"k", t.kb}, {"Y", y}});
    CHECK(std::set<uint64_t>(got.begin(), got.end()) == want);
    ++done31;
  }
  CHECK(done31 >= 40);
  int done4 = 0;
  for (int i = 0; i < 300 && done4 < 40; ++i) {
    uint64_t a = 1 + rng_at(818, 2 * i) % (ext->q() - 1);
    uint64_t b = 1 + rng_at(818, 2 * i + 1) % (ext->q() - 1);  // base-field b
    if (b == a || (1 ^ a ^ b) == 0) continue;
    Trinomial t = make_trinomial(ext, a, b);
    uint64_t y = rng_at(819, i) % ext->q();
    auto got = fiber_quartic(t, y);
    auto want = roots_of(C4s, {{"a", a}, {"b", b}, {"k", ext->k0()}, {"Y", y}});
    CHECK(std::set<uint64_t>(got.begin(), got.end()) == want);
    ++done4;
  }
  CHECK(done4 >= 40);
}

TEST_CASE("C4 never vanishes on valid instances") {
  auto ext = Ext::make(Field::make(5));
  const Field& F = ext->base();
  int tried = 0;
  for (int i = 0; tried < 1000 && i < 5000; ++i) {
    uint64_t a = 1 + (rng_at(71, 2 * i) % (ext->q() - 1));
    uint64_t b = ext->from_index(1 + rng_at(71, 2 * i + 1) % (ext->size() - 1));
    Trinomial t = make_trinomial(ext, a, b);
    if (t.b_in_base) continue;
    uint64_t c4 = F.sqr(a) ^ F.mul(a, t.b1) ^ F.mul(F.sqr(t.b1), t.kb) ^ t.b1 ^ 1;
    CHECK(c4 != 0);
    ++tried;
  }
  CHECK(tried == 1000);
}

TEST_CASE("Leonard-Williams over F2 by hand") {
  auto f2 = Field::make(1);
  // a2 = a1 = a0 = 1: X^4+X^2+X+1 has the unique root 1
  CHECK(lw_unique_root(f2, 1, 1, 1));
  // a2 = 0, a1 = a0 = 1: X^4+X+1 has no root in F_2
  CHECK(!lw_unique_root(f2, 0, 1, 1));
  CHECK_THROWS_AS(lw_unique_root(f2, 1, 0, 1), DomainError);
}

TEST_CASE("LW(i) matches brute-force quartic root counts over F8 and F16") {
  for (int n : {3, 4}) {
    auto fq = Field::make(n);
    uint64_t q = fq->size();
    int valid = 0;
    for (uint64_t a2 = 0; a2 < q; ++a2)
      for (uint64_t a1 = 1; a1 < q; ++a1)
        for (uint64_t a0 = 1; a0 < q; ++a0) {
          int roots = 0;
          for (uint64_t x = 0; x < q; ++x) {
            uint64_t v = fq->sqr(fq->sqr(x)) ^ fq->mul(a2, fq->sqr(x)) ^ fq->mul(a1, x) ^ a0;
            roots += v == 0;
          }
          CHECK(lw_unique_root(fq, a2, a1, a0) == (roots == 1));
          ++valid;
        }
    if (n == 3) CHECK(valid == 392);
  }
}

TEST_CASE("LW(ii) matches cubic rootlessness over F16") {
  auto fq = Field::make(4);
  for (uint64_t a2 = 0; a2 < 16; ++a2)
    for (uint64_t a1 = 1; a1 < 16; ++a1) {
      UniPoly cubic(fq, {a1, a2, 0, 1});
      CHECK(lw_cubic_irreducible(fq, a2, a1) == (cubic.count_roots() == 0));
    }
}

TEST_CASE("verify-theorem sweeps at small n") {
  for (int n : {2, 3, 4}) {
    RunConfig cfg{n, 0, 1, 1};
    StageReport rep = verify_theorem(cfg);
    CHECK(rep.passed());
    if (n == 2)
      for (const auto& c : rep.checks)
        if (c.id == "pp-count") CHECK(c.witness.find("pp_count=1 ") != std::string::npos);
  }
}

TEST_CASE("verify-theorem sampled mode is seed-deterministic") {
  RunConfig cfg{6, 500, 2, 42};
  StageReport r1 = verify_theorem(cfg);
  StageReport r2 = verify_theorem(cfg);
  CHECK(r1.passed());
  REQUIRE(r1.checks.size() == r2.checks.size());
  for (size_t i = 0; i < r1.checks.size(); ++i) {
    CHECK(r1.checks[i].pass == r2.checks[i].pass);
    CHECK(r1.checks[i].witness == r2.checks[i].witness);
  }
}
