#include "permtri.h"

#include <cstring>
#include <memory>
#include <string>

#include "catalog.hpp"
#include "gf2.hpp"
#include "mvpoly.hpp"
#include "pp.hpp"
#include "replay.hpp"
#include "report.hpp"
#include "runner.hpp"
#include "unipoly.hpp"
#include "util.hpp"

using namespace permtri;

namespace {

thread_local std::string g_last_error;

int classify(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return PT_ERR_PARSE;
  if (dynamic_cast<const MathError*>(&e)) return PT_ERR_MATH;
  if (dynamic_cast<const DomainError*>(&e) || dynamic_cast<const FieldError*>(&e))
    return PT_ERR_INVALID;
  return PT_ERR_INTERNAL;
}

template <class Fn>
auto guard(int* err, Fn&& fn) -> decltype(fn()) {
  try {
    if (err) *err = PT_OK;
    return fn();
  } catch (const std::exception& e) {
    g_last_error = e.what();
    if (err) *err = classify(e);
    return decltype(fn()){};
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

struct pt_field {
  FieldPtr f;
};
struct pt_ext {
  ExtPtr e;
};
struct pt_trinomial {
  Trinomial t;
};
struct pt_poly {
  MvPoly p;
};

extern "C" {

const char* pt_last_error(void) { return g_last_error.c_str(); }
void pt_string_free(char* s) { free(s); }

pt_field* pt_field_make(int n) {
  return guard(nullptr, [&]() -> pt_field* { return new pt_field{Field::make(n)}; });
}
pt_field* pt_field_quotient(uint64_t modulus_bits) {
  return guard(nullptr,
               [&]() -> pt_field* { return new pt_field{Field::quotient(modulus_bits)}; });
}
void pt_field_free(pt_field* f) { delete f; }
int pt_field_degree(const pt_field* f) { return f->f->degree(); }
uint64_t pt_field_modulus(const pt_field* f) { return f->f->modulus(); }
uint64_t pt_field_generator(const pt_field* f) { return f->f->generator(); }
uint64_t pt_field_add(const pt_field* f, uint64_t a, uint64_t b) { return f->f->add(a, b); }
uint64_t pt_field_mul(const pt_field* f, uint64_t a, uint64_t b) { return f->f->mul(a, b); }
uint64_t pt_field_inv(const pt_field* f, uint64_t a, int* err) {
  return guard(err, [&] { return f->f->inv(a); });
}
uint64_t pt_field_pow(const pt_field* f, uint64_t a, uint64_t e) { return f->f->pow(a, e); }
uint64_t pt_field_trace(const pt_field* f, uint64_t a) { return f->f->trace(a); }
int pt_field_parse(const pt_field* f, const char* text, uint64_t* out) {
  int err = PT_OK;
  uint64_t v = guard(&err, [&] { return f->f->parse(text); });
  if (err == PT_OK && out) *out = v;
  return err;
}
char* pt_field_format(const pt_field* f, uint64_t x) { return dup_string(f->f->format(x)); }
char* pt_modulus_registry(void) {
  return guard(nullptr, [&] { return dup_string(Field::modulus_registry()); });
}

pt_ext* pt_ext_make(const pt_field* base) {
  return guard(nullptr, [&]() -> pt_ext* { return new pt_ext{Ext::make(base->f)}; });
}
void pt_ext_free(pt_ext* e) { delete e; }
uint64_t pt_ext_k0(const pt_ext* e) { return e->e->k0(); }
uint64_t pt_ext_add(const pt_ext* e, uint64_t x, uint64_t y) { return e->e->add(x, y); }
uint64_t pt_ext_mul(const pt_ext* e, uint64_t x, uint64_t y) { return e->e->mul(x, y); }
uint64_t pt_ext_inv(const pt_ext* e, uint64_t x, int* err) {
  return guard(err, [&] { return e->e->inv(x); });
}
uint64_t pt_ext_pow(const pt_ext* e, uint64_t x, uint64_t n) { return e->e->pow(x, n); }
uint64_t pt_ext_frobenius(const pt_ext* e, uint64_t x) { return e->e->frobenius(x); }
uint64_t pt_ext_trace(const pt_ext* e, uint64_t x) { return e->e->trace(x); }
uint64_t pt_ext_norm(const pt_ext* e, uint64_t x) { return e->e->norm(x); }
int pt_ext_parse(const pt_ext* e, const char* text, uint64_t* out) {
  int err = PT_OK;
  uint64_t v = guard(&err, [&] { return e->e->parse(text); });
  if (err == PT_OK && out) *out = v;
  return err;
}
char* pt_ext_format(const pt_ext* e, uint64_t x) { return dup_string(e->e->format(x)); }
uint64_t pt_ext_mu_size(const pt_ext* e) { return e->e->q() + 1; }
int pt_ext_mu_at(const pt_ext* e, uint64_t i, uint64_t* out) {
  int err = PT_OK;
  uint64_t v = guard(&err, [&]() -> uint64_t {
    auto mu = e->e->enumerate_mu();
    if (i >= mu.size()) throw DomainError("mu index out of range");
    return mu[i];
  });
  if (err == PT_OK && out) *out = v;
  return err;
}

pt_trinomial* pt_trinomial_make(const pt_ext* e, uint64_t a, uint64_t b) {
  return guard(nullptr,
               [&]() -> pt_trinomial* { return new pt_trinomial{make_trinomial(e->e, a, b)}; });
}
void pt_trinomial_free(pt_trinomial* t) { delete t; }
int pt_trinomial_b_in_base(const pt_trinomial* t) { return t->t.b_in_base ? 1 : 0; }
uint64_t pt_trinomial_b1(const pt_trinomial* t) { return t->t.b1; }
uint64_t pt_trinomial_eval(const pt_trinomial* t, uint64_t x) { return eval_f(t->t, x); }
int pt_pp_criterion(const pt_trinomial* t) {
  int err = PT_OK;
  bool v = guard(&err, [&] { return criterion_pp(t->t); });
  return err == PT_OK ? (v ? 1 : 0) : -err;
}
int pt_pp_mu(const pt_trinomial* t) {
  int err = PT_OK;
  bool v = guard(&err, [&] { return is_pp_mu(t->t); });
  return err == PT_OK ? (v ? 1 : 0) : -err;
}
int pt_pp_exhaustive(const pt_trinomial* t) {
  int err = PT_OK;
  bool v = guard(&err, [&] { return is_pp_exhaustive(t->t); });
  return err == PT_OK ? (v ? 1 : 0) : -err;
}

char* pt_verify_theorem(int n, uint64_t budget, int workers, uint64_t seed, int as_json,
                        int* failures) {
  int err = PT_OK;
  std::string out = guard(&err, [&]() -> std::string {
    RunConfig cfg{n, budget, workers, seed};
    StageReport rep = verify_theorem(cfg);
    if (failures) *failures = rep.failures();
    if (as_json) return render_json("verify-theorem", run_config_json(cfg), {rep});
    return render_text({rep});
  });
  if (err != PT_OK) {
    if (failures) *failures = -1;
    return nullptr;
  }
  return dup_string(out);
}

char* pt_replay(const char* stages_csv, const char* corpus_dir, int workers, int as_json,
                int* failures) {
  int err = PT_OK;
  std::string out = guard(&err, [&]() -> std::string {
    std::string dir = corpus_dir ? corpus_dir : default_corpus_dir();
    std::vector<std::string> stages;
    std::string csv = stages_csv ? stages_csv : "all";
    if (csv == "all") {
      stages = Replay::stage_names();
    } else {
      size_t pos = 0;
      while (pos != std::string::npos) {
        size_t c = csv.find(',', pos);
        stages.push_back(csv.substr(pos, c == std::string::npos ? c : c - pos));
        pos = c == std::string::npos ? c : c + 1;
      }
    }
    Catalog cat = Catalog::load(dir);
    Replay rp(std::move(cat), workers);
    auto reps = rp.run(stages);
    int fails = 0;
    for (const auto& r : reps) fails += r.failures();
    if (failures) *failures = fails;
    std::string cfg = "{\"stages\": \"" + csv + "\", \"workers\": " + std::to_string(workers) +
                      ", \"corpus\": \"" + dir + "\"}";
    if (as_json) return render_json("replay", cfg, reps);
    return render_text(reps);
  });
  if (err != PT_OK) {
    if (failures) *failures = -1;
    return nullptr;
  }
  return dup_string(out);
}

pt_poly* pt_poly_parse(const char* text) {
  return guard(nullptr, [&]() -> pt_poly* { return new pt_poly{MvPoly::parse(text)}; });
}
pt_poly* pt_poly_from_corpus(const char* corpus_dir, const char* name) {
  return guard(nullptr, [&]() -> pt_poly* {
    std::string dir = corpus_dir ? corpus_dir : default_corpus_dir();
    Catalog cat = Catalog::load(dir);
    return new pt_poly{cat.get(name)};
  });
}
void pt_poly_free(pt_poly* p) { delete p; }
char* pt_poly_serialize(const pt_poly* p) { return dup_string(p->p.serialize()); }
pt_poly* pt_poly_add(const pt_poly* p, const pt_poly* q) {
  return guard(nullptr, [&]() -> pt_poly* { return new pt_poly{p->p + q->p}; });
}
pt_poly* pt_poly_mul(const pt_poly* p, const pt_poly* q) {
  return guard(nullptr, [&]() -> pt_poly* { return new pt_poly{p->p * q->p}; });
}
pt_poly* pt_poly_resultant(const pt_poly* p, const pt_poly* q, const char* var, int workers) {
  return guard(nullptr, [&]() -> pt_poly* {
    return new pt_poly{MvPoly::resultant(p->p, q->p, var, workers < 1 ? 1 : workers)};
  });
}
pt_poly* pt_poly_gcd(const pt_poly* p, const pt_poly* q, const char* var) {
  return guard(nullptr, [&]() -> pt_poly* {
    auto f2 = Field::make(1);
    UniPoly g = UniPoly::gcd(p->p.to_unipoly(f2, var), q->p.to_unipoly(f2, var));
    return new pt_poly{MvPoly::from_unipoly_f2(g, var)};
  });
}
pt_poly* pt_poly_pseudo_rem(const pt_poly* p, const pt_poly* q, const char* var, int* power) {
  return guard(nullptr, [&]() -> pt_poly* {
    auto pd = MvPoly::pseudo_divrem(p->p, q->p, var);
    if (power) *power = pd.power;
    return new pt_poly{pd.rem};
  });
}

}  // extern "C"
