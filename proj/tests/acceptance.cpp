// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Zero tolerance on every symbolic check; the numeric sweeps are
// exhaustive or seeded as stated.
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "catalog.hpp"
#include "mvpoly.hpp"
#include "pp.hpp"
#include "replay.hpp"
#include "report.hpp"
#include "runner.hpp"
#include "unipoly.hpp"
#include "util.hpp"

using namespace permtri;

namespace {

struct Criterion {
  std::string name;
  bool pass;
  std::string detail;
};
std::vector<Criterion> g_results;

void record(const std::string& name, bool pass, const std::string& detail) {
  g_results.push_back({name, pass, detail});
  printf("[%s] %s: %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  fflush(stdout);
}

// ---- criterion 1: triple-oracle equivalence at q in {4, 8, 16} ------------
void criterion1() {
  Stopwatch sw;
  std::string detail;
  bool ok = true;
  const int expect_pairs[] = {45, 441, 3825};
  for (int idx = 0; idx < 3; ++idx) {
    int n = idx + 2;
    auto fq = Field::make(n);
    auto ext = Ext::make(fq);
    MuScan scan(ext);
    uint64_t q = fq->size();
    int pairs = 0, pps = 0;
    for (uint64_t a = 1; a < q && ok; ++a)
      for (uint64_t bi = 1; bi < ext->size(); ++bi) {
        Trinomial t = make_trinomial(ext, a, ext->from_index(bi));
        bool ex = is_pp_exhaustive(t);
        bool mu = scan.is_pp_mu(t);
        bool cr = criterion_pp(t);
        ++pairs;
        pps += ex;
        if (ex != mu || mu != cr) {
          ok = false;
          detail = "oracle disagreement at q=" + std::to_string(q);
          break;
        }
      }
    if (!ok) break;
    if (pairs != expect_pairs[idx]) {
      ok = false;
      detail = "pair count " + std::to_string(pairs);
      break;
    }
    int rootless = 0;
    for (uint64_t a = 1; a < q; ++a) rootless += criterion_cubic_roots(fq, a) == 0;
    if (pps != rootless) {
      ok = false;
      detail = "pp count != rootless count at q=" + std::to_string(q);
      break;
    }
    if (n == 2 && pps != 1) {
      ok = false;
      detail = "q=4 PP count is not 1";
      break;
    }
    detail += "q=" + std::to_string(q) + ": " + std::to_string(pairs) + " pairs, " +
              std::to_string(pps) + " PPs; ";
  }
  std::ostringstream os;
  os << detail << "(" << (int)sw.ms() << " ms)";
  record("criterion 1: three PP oracles agree at q=4,8,16", ok, os.str());
}

// ---- criterion 2: q = 64 full sweep; q = 256 sufficiency + samples --------
void criterion2() {
  Stopwatch sw;
  bool ok = true;
  std::string detail;
  {
    auto fq = Field::make(6);
    auto ext = Ext::make(fq);
    MuScan scan(ext);
    int pairs = 0;
    for (uint64_t a = 1; a < 64 && ok; ++a)
      for (uint64_t bi = 1; bi < ext->size(); ++bi) {
        Trinomial t = make_trinomial(ext, a, ext->from_index(bi));
        ++pairs;
        if (scan.is_pp_mu(t) != criterion_pp(t)) {
          ok = false;
          detail = "q=64 disagreement";
          break;
        }
      }
    if (ok && pairs != 63 * 4095) {
      ok = false;
      detail = "q=64 pair count";
    }
    if (ok) detail = "q=64: 258085 pairs in " + std::to_string((int)sw.ms()) + " ms";
    if (sw.ms() > 5 * 60 * 1000) {
      ok = false;
      detail += " (over the 5 minute budget)";
    }
  }
  if (ok) {
    RunConfig cfg{8, 100000, (int)std::thread::hardware_concurrency(), 2024};
    StageReport rep = verify_theorem(cfg);
    if (!rep.passed()) {
      ok = false;
      detail = "q=256 sweep failed";
    } else {
      detail += "; q=256 sufficiency + 100000 samples ok";
    }
  }
  std::ostringstream os;
  os << detail << " (" << (int)sw.ms() << " ms total)";
  record("criterion 2: q=64 full, q=256 sweep", ok, os.str());
}

// ---- criterion 3: q = 2^10 and 2^12, sufficiency + 10^6 samples, 8 workers
void criterion3() {
  Stopwatch sw;
  bool ok = true;
  std::string detail;
  for (int n : {10, 12}) {
    RunConfig cfg{n, 1000000, 8, 31337};
    StageReport rep = verify_theorem(cfg);
    if (!rep.passed()) {
      ok = false;
      detail = "sweep failed at n=" + std::to_string(n);
      break;
    }
    detail += "n=" + std::to_string(n) + " ok; ";
  }
  double ms = sw.ms();
  if (ms > 3600e3) ok = false;
  std::ostringstream os;
  os << detail << "(" << (int)(ms / 1000) << " s, budget 1 h, 8 workers)";
  record("criterion 3: q=2^10 and 2^12 sufficiency + 10^6 samples", ok, os.str());
}

// ---- criterion 4: Leonard-Williams ----------------------------------------
void criterion4() {
  Stopwatch sw;
  bool ok = true;
  std::string detail;
  int checked = 0;
  for (int n : {3, 4}) {  // LW(i) exhaustive over F_8 (392 triples) and F_16
    auto fq = Field::make(n);
    uint64_t q = fq->size();
    for (uint64_t a2 = 0; a2 < q && ok; ++a2)
      for (uint64_t a1 = 1; a1 < q && ok; ++a1)
        for (uint64_t a0 = 1; a0 < q; ++a0) {
          int roots = 0;
          for (uint64_t x = 0; x < q; ++x) {
            uint64_t v = fq->sqr(fq->sqr(x)) ^ fq->mul(a2, fq->sqr(x)) ^ fq->mul(a1, x) ^ a0;
            roots += v == 0;
          }
          ++checked;
          if (lw_unique_root(fq, a2, a1, a0) != (roots == 1)) {
            ok = false;
            detail = "LW(i) mismatch over F_" + std::to_string(q);
            break;
          }
        }
  }
  if (ok) {
    auto fq = Field::make(4);  // LW(ii) exhaustive over F_16
    for (uint64_t a2 = 0; a2 < 16 && ok; ++a2)
      for (uint64_t a1 = 1; a1 < 16; ++a1) {
        UniPoly cubic(fq, {a1, a2, 0, 1});
        ++checked;
        if (lw_cubic_irreducible(fq, a2, a1) != (cubic.count_roots() == 0)) {
          ok = false;
          detail = "LW(ii) mismatch over F_16";
          break;
        }
      }
  }
  if (ok) {
    auto fq = Field::make(10);  // 10^4 random checks over F_{2^10}
    uint64_t q = fq->size();
    for (int i = 0; i < 10000 && ok; ++i) {
      uint64_t a2 = rng_at(404, 3 * i) % q;
      uint64_t a1 = 1 + rng_at(404, 3 * i + 1) % (q - 1);
      uint64_t a0 = 1 + rng_at(404, 3 * i + 2) % (q - 1);
      int roots = 0;
      for (uint64_t x = 0; x < q; ++x) {
        uint64_t v = fq->sqr(fq->sqr(x)) ^ fq->mul(a2, fq->sqr(x)) ^ fq->mul(a1, x) ^ a0;
        roots += v == 0;
      }
      UniPoly cubic(fq, {a1, a2, 0, 1});
      ++checked;
      if (lw_unique_root(fq, a2, a1, a0) != (roots == 1) ||
          lw_cubic_irreducible(fq, a2, a1) != (cubic.count_roots() == 0)) {
        ok = false;
        detail = "random LW mismatch over F_1024";
      }
    }
  }
  std::ostringstream os;
  if (ok) os << checked << " triples, zero mismatches";
  os << detail << " (" << (int)sw.ms() << " ms)";
  record("criterion 4: Leonard-Williams (i) and (ii)", ok, os.str());
}

// ---- criteria 5-8: proof replay --------------------------------------------
struct ReplayIndex {
  std::map<std::string, const CheckResult*> by_id;
  std::map<std::string, const StageReport*> by_stage;
};

bool ids_pass(const ReplayIndex& ix, const std::vector<std::string>& ids, std::string& bad) {
  for (const auto& id : ids) {
    auto it = ix.by_id.find(id);
    if (it == ix.by_id.end()) {
      bad = "missing check " + id;
      return false;
    }
    if (!it->second->pass) {
      bad = id + ": " + it->second->witness;
      return false;
    }
  }
  return true;
}

void criteria_5_to_8(const std::vector<StageReport>& reps) {
  ReplayIndex ix;
  for (const auto& r : reps) {
    ix.by_stage[r.stage] = &r;
    for (const auto& c : r.checks)
      if (c.kind == "identity") ix.by_id[c.id] = &c;
  }
  // 5: coefficient stage
  {
    const StageReport* st = ix.by_stage["coefficients"];
    bool ok = st && st->passed();
    std::string detail = "C0..C4, E0..E3, F0..F6 match bit-exactly";
    if (!ok) detail = "stage failed";
    if (st && st->wall_ms > 60e3) {
      ok = false;
      detail += " (over 1 minute)";
    }
    std::ostringstream os;
    os << detail << " (" << (st ? (int)st->wall_ms : -1) << " ms)";
    record("criterion 5: coefficient stage", ok, os.str());
  }
  // 6: elimination + resultant identities
  {
    std::string bad;
    std::vector<std::string> ids = {
        "eq224",   "eq225",   "eq226",   "h1-congruence", "h3-congruence",
        "eq226.1", "eq226.2", "eq227",   "eq228",         "eq229",
        "eq230",   "eq232",   "eq233",   "eq234",         "res-E2-E3",
        "res-S1-T4", "res-S1-T5", "res-S1-T6"};
    bool ok = ids_pass(ix, ids, bad);
    double ms = 0;
    for (const auto& id : ids) {
      auto it = ix.by_id.find(id);
      if (it != ix.by_id.end()) ms += it->second->ms;
    }
    if (ms > 20 * 60e3) ok = false;
    std::ostringstream os;
    os << (ok ? "all displayed factorizations exact" : bad) << " (" << (int)ms << " ms)";
    record("criterion 6: elimination and resultant identities", ok, os.str());
  }
  // 7: case stage
  {
    std::string bad;
    std::vector<std::string> ids = {"case1-h1",  "case1-h2",  "case1-res", "case2-h1T1",
                                    "case2-h2T1", "case2-h3T1", "case2-gcd", "case2-E3",
                                    "case31-gcd"};
    for (const char* t : {"T12", "T14", "T15", "T16", "T18", "T19"}) {
      ids.push_back(std::string("krec-") + t);
      ids.push_back(std::string("gcd-") + t);
    }
    bool ok = ids_pass(ix, ids, bad);
    const StageReport* st = ix.by_stage["cases"];
    if (st && st->wall_ms > 30 * 60e3) ok = false;
    std::ostringstream os;
    os << (ok ? "case chain exact (k-recovery via derived values; one display typo noted)"
              : bad)
       << " (" << (st ? (int)st->wall_ms : -1) << " ms)";
    record("criterion 7: case stage", ok, os.str());
  }
  // 8: step3 + section4
  {
    const StageReport* s3 = ix.by_stage["step3"];
    const StageReport* s4 = ix.by_stage["section4"];
    bool ok = s3 && s3->passed() && s4 && s4->passed();
    std::ostringstream os;
    os << (ok ? "L1..L3 closed forms, section-4 chain, and q=4,8,16 numerics exact"
              : "stage failed")
       << " (" << ((s3 && s4) ? (int)(s3->wall_ms + s4->wall_ms) : -1) << " ms)";
    record("criterion 8: step-3 and section-4 stages", ok, os.str());
  }
}

// ---- criterion 9: infrastructure properties --------------------------------
void criterion9(const Catalog& cat) {
  Stopwatch sw;
  bool ok = true;
  std::string detail;

  // Field axioms: 10^4 samples per constructed context.
  std::vector<FieldPtr> ctxs = {Field::make(1), Field::make(4), Field::make(12),
                                Field::quotient(0xb)};
  for (const auto& f : ctxs) {
    uint64_t mask = f->size() - 1;
    for (int i = 0; i < 10000 && ok; ++i) {
      uint64_t x = rng_at(900, 3 * i) & mask;
      uint64_t y = rng_at(900, 3 * i + 1) & mask;
      uint64_t z = rng_at(900, 3 * i + 2) & mask;
      if (f->mul(x, f->add(y, z)) != f->add(f->mul(x, y), f->mul(x, z)) ||
          f->mul(f->mul(x, y), z) != f->mul(x, f->mul(y, z)) ||
          (x && f->mul(x, f->inv(x)) != 1)) {
        ok = false;
        detail = "field axiom failure";
      }
    }
  }
  auto ext = Ext::make(Field::make(6));
  for (int i = 0; i < 10000 && ok; ++i) {
    uint64_t x = ext->from_index(rng_at(901, 2 * i) & (ext->size() - 1));
    uint64_t y = ext->from_index(rng_at(901, 2 * i + 1) & (ext->size() - 1));
    if (ext->frobenius(ext->mul(x, y)) != ext->mul(ext->frobenius(x), ext->frobenius(y)) ||
        (x && ext->mul(x, ext->inv(x)) != 1)) {
      ok = false;
      detail = "extension axiom failure";
    }
  }

  // Resultant specialization on 100 random instances.
  if (ok) {
    auto K = Field::make(9);
    int done = 0;
    for (uint64_t i = 0; done < 100 && i < 1000; ++i) {
      auto rnd = [&](uint64_t salt) {
        MvPoly acc = MvPoly::zero();
        static const char* names[] = {"a", "b1", "k"};
        int terms = 1 + (int)(rng_at(902, salt) % 10);
        for (int t = 0; t < terms; ++t) {
          MvPoly term = MvPoly::one();
          for (int v = 0; v < 3; ++v) {
            int e = (int)(rng_at(902, salt * 97 + t * 5 + v) % 4);
            if (e) term = term * MvPoly::variable(names[v], e);
          }
          acc = acc + term;
        }
        return acc;
      };
      MvPoly f = rnd(2 * i), g = rnd(2 * i + 1);
      if (f.degree("k") < 1 || g.degree("k") < 1) continue;
      std::map<std::string, uint64_t> pt{{"a", rng_at(903, i) & 511},
                                         {"b1", rng_at(904, i) & 511}};
      if (f.coeff_of("k", f.degree("k")).eval(*K, pt) == 0) continue;
      if (g.coeff_of("k", g.degree("k")).eval(*K, pt) == 0) continue;
      MvPoly R = MvPoly::resultant(f, g, "k");
      std::vector<uint64_t> fv, gv;
      for (auto& c : f.collect("k")) fv.push_back(c.is_zero() ? 0 : c.eval(*K, pt));
      for (auto& c : g.collect("k")) gv.push_back(c.is_zero() ? 0 : c.eval(*K, pt));
      uint64_t direct = UniPoly::resultant(UniPoly(K, fv), UniPoly(K, gv));
      if (R.eval(*K, pt) != direct) {
        ok = false;
        detail = "resultant specialization mismatch";
        break;
      }
      ++done;
    }
    if (ok && done != 100) {
      ok = false;
      detail = "could not build 100 specialization instances";
    }
  }

  // Corpus round-trip.
  if (ok && !cat.roundtrip_failures().empty()) {
    ok = false;
    detail = "corpus round-trip failure";
  }

  // Fault injection: one flipped term produces exactly one failing identity
  // with a witness.
  if (ok) {
    namespace fs = std::filesystem;
    fs::path tmp = fs::temp_directory_path() / "permtri_acceptance_fault";
    fs::remove_all(tmp);
    fs::copy(cat.dir(), tmp);
    {
      std::ifstream in(tmp / "F3.poly");
      std::string header, body;
      std::getline(in, header);
      std::getline(in, body);
      in.close();
      std::ofstream out(tmp / "F3.poly");
      out << header << "\n" << "a^11*b1^11*k^11+" + body << "\n";
    }
    {
      std::ifstream mf(tmp / "MANIFEST");
      std::string name, digest, outc;
      while (mf >> name >> digest) {
        if (name == "F3") {
          char buf[32];
          snprintf(buf, sizeof buf, "%016llx",
                   (unsigned long long)Catalog::file_digest((tmp / "F3.poly").string()));
          digest = buf;
        }
        outc += name + " " + digest + "\n";
      }
      mf.close();
      std::ofstream(tmp / "MANIFEST") << outc;
    }
    Catalog tampered = Catalog::load(tmp.string());
    Replay rp(tampered, 1);
    auto reps = rp.run({"coefficients"});
    int fails = 0;
    bool witness_ok = false;
    for (const auto& c : reps[0].checks)
      if (c.kind == "identity" && !c.pass) {
        ++fails;
        witness_ok = c.witness.find("a^11*b1^11*k^11") != std::string::npos;
      }
    if (fails != 1 || !witness_ok) {
      ok = false;
      detail = "fault injection produced " + std::to_string(fails) + " failures";
    }
    fs::remove_all(tmp);
  }

  std::ostringstream os;
  os << (ok ? "axioms, specialization, round-trip, fault injection all good" : detail) << " ("
     << (int)sw.ms() << " ms)";
  record("criterion 9: infrastructure properties", ok, os.str());
}

}  // namespace

int main() {
  Stopwatch total;
  criterion1();
  criterion2();
  criterion3();
  criterion4();

  Catalog cat = Catalog::load(default_corpus_dir());
  int workers = (int)std::thread::hardware_concurrency();
  if (workers < 1) workers = 1;
  Replay rp(cat, workers);
  auto reps = rp.run(Replay::stage_names());
  criteria_5_to_8(reps);
  criterion9(cat);

  int fails = 0;
  for (const auto& r : g_results) fails += r.pass ? 0 : 1;
  printf("\n%d/%zu acceptance criteria passed (%.1f s total)\n", (int)g_results.size() - fails,
         g_results.size(), total.ms() / 1000.0);
  return fails;
}
