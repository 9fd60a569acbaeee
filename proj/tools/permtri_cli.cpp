// Command-line front end for the permtri shared library: permutation checks,
// theorem sweeps, proof replay, and polynomial utilities.
//
// Exit codes: 0 success, 1 usage/parse error, 2 mathematical disagreement.
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "permtri.h"

namespace {

struct FieldHandle {
  pt_field* f = nullptr;
  ~FieldHandle() { pt_field_free(f); }
};
struct ExtHandle {
  pt_ext* e = nullptr;
  ~ExtHandle() { pt_ext_free(e); }
};

std::string take_string(char* s) {
  if (!s) return {};
  std::string out = s;
  pt_string_free(s);
  return out;
}

int parse_b_literal(const pt_ext* ext, const pt_field* fq, const std::string& lit,
                    uint64_t* out) {
  if (lit.find(':') != std::string::npos) return pt_ext_parse(ext, lit.c_str(), out);
  uint64_t u = 0;
  int err = pt_field_parse(fq, lit.c_str(), &u);
  if (err == PT_OK) *out = u;  // base element embeds as (u, 0)
  return err;
}

int cmd_pp_check(int n, const std::string& a_lit, const std::string& b_lit,
                 const std::string& method, bool json) {
  FieldHandle fq{pt_field_make(n)};
  if (!fq.f) {
    fprintf(stderr, "error: %s\n", pt_last_error());
    return 1;
  }
  ExtHandle ext{pt_ext_make(fq.f)};
  uint64_t a = 0, b = 0;
  if (pt_field_parse(fq.f, a_lit.c_str(), &a) != PT_OK) {
    fprintf(stderr, "error: bad --a literal: %s\n", pt_last_error());
    return 1;
  }
  if (parse_b_literal(ext.e, fq.f, b_lit, &b) != PT_OK) {
    fprintf(stderr, "error: bad --b literal: %s\n", pt_last_error());
    return 1;
  }
  pt_trinomial* t = pt_trinomial_make(ext.e, a, b);
  if (!t) {
    fprintf(stderr, "error: %s\n", pt_last_error());
    return 1;
  }
  nlohmann::json res;
  res["command"] = "pp-check";
  res["config"] = {{"n", n}, {"a", a_lit}, {"b", b_lit}, {"method", method}};
  bool any_fail = false, disagree = false;
  std::vector<std::pair<std::string, int>> verdicts;
  auto run = [&](const std::string& m) {
    int v = -1;
    if (m == "criterion") v = pt_pp_criterion(t);
    if (m == "mu") v = pt_pp_mu(t);
    if (m == "exhaustive") v = pt_pp_exhaustive(t);
    if (v < 0) {
      fprintf(stderr, "error (%s): %s\n", m.c_str(), pt_last_error());
      any_fail = true;
      return;
    }
    verdicts.emplace_back(m, v);
  };
  if (method == "all") {
    run("criterion");
    run("mu");
    run("exhaustive");
  } else {
    run(method);
  }
  pt_trinomial_free(t);
  if (any_fail) return 1;
  auto jv = nlohmann::json::array();
  for (auto& [m, v] : verdicts) {
    jv.push_back({{"method", m}, {"pp", v == 1}});
    if (!json) printf("%-10s : %s\n", m.c_str(), v == 1 ? "permutation" : "not a permutation");
  }
  res["results"] = jv;
  for (auto& [m, v] : verdicts)
    if (v != verdicts.front().second) disagree = true;
  if (method == "all") {
    res["agree"] = !disagree;
    if (!json) printf("agreement  : %s\n", disagree ? "ORACLES DISAGREE" : "all agree");
  }
  if (json) printf("%s\n", res.dump(2).c_str());
  return disagree ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"permutation-trinomial toolkit over binary fields"};
  app.require_subcommand(1);

  auto* pc = app.add_subcommand("pp-check", "test one (a, b) pair with selected oracles");
  int pc_n = 2;
  std::string pc_a, pc_b, pc_method = "all";
  bool pc_json = false;
  pc->add_option("--n", pc_n, "base field degree (q = 2^n)")->required();
  pc->add_option("--a", pc_a, "a in F_q, hex literal")->required();
  pc->add_option("--b", pc_b, "b in F_{q^2}, 'u:v' hex pair or base hex")->required();
  pc->add_option("--method", pc_method, "criterion | mu | exhaustive | all")
      ->check(CLI::IsMember({"criterion", "mu", "exhaustive", "all"}));
  pc->add_flag("--json", pc_json, "structured report");

  auto* vt = app.add_subcommand("verify-theorem", "sufficiency sweep plus necessity checks");
  int vt_n = 2, vt_workers = 1;
  uint64_t vt_budget = 0, vt_seed = 1;
  bool vt_json = false;
  vt->add_option("--n", vt_n, "base field degree")->required();
  vt->add_option("--budget", vt_budget, "necessity samples (q > 16)");
  vt->add_option("--workers", vt_workers, "worker threads");
  vt->add_option("--seed", vt_seed, "sampling seed");
  vt->add_flag("--json", vt_json, "structured report");

  auto* rp = app.add_subcommand("replay", "replay the proof chain stage by stage");
  std::string rp_stages = "all", rp_corpus;
  int rp_workers = 1;
  bool rp_json = false;
  rp->add_option("--stages", rp_stages,
                 "comma-separated: coefficients,elimination,resultants,cases,step3,section4");
  rp->add_option("--corpus-dir", rp_corpus, "corpus directory (default: built-in)");
  rp->add_option("--workers", rp_workers, "worker threads");
  rp->add_flag("--json", rp_json, "structured report");

  auto* py = app.add_subcommand("poly", "resultant / gcd / pseudo-rem on F_2 polynomials");
  std::string py_tool, py_var, py_in1, py_in2, py_corpus;
  py->add_option("tool", py_tool, "resultant | gcd | pseudo-rem")
      ->required()
      ->check(CLI::IsMember({"resultant", "gcd", "pseudo-rem"}));
  py->add_option("input1", py_in1, "polynomial text, or @name for a corpus entry")->required();
  py->add_option("input2", py_in2, "polynomial text, or @name for a corpus entry")->required();
  py->add_option("--var", py_var, "variable to eliminate / operate in")->required();
  py->add_option("--corpus-dir", py_corpus, "corpus directory for @name inputs");

  auto* fd = app.add_subcommand("fields", "print the canonical modulus registry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (pc->parsed()) return cmd_pp_check(pc_n, pc_a, pc_b, pc_method, pc_json);

  if (vt->parsed()) {
    int failures = 0;
    char* out = pt_verify_theorem(vt_n, vt_budget, vt_workers, vt_seed, vt_json ? 1 : 0,
                                  &failures);
    if (!out) {
      fprintf(stderr, "error: %s\n", pt_last_error());
      return 1;
    }
    printf("%s", out);
    pt_string_free(out);
    return failures == 0 ? 0 : 2;
  }

  if (rp->parsed()) {
    int failures = 0;
    char* out = pt_replay(rp_stages.c_str(), rp_corpus.empty() ? nullptr : rp_corpus.c_str(),
                          rp_workers, rp_json ? 1 : 0, &failures);
    if (!out) {
      fprintf(stderr, "error: %s\n", pt_last_error());
      return 1;
    }
    printf("%s", out);
    pt_string_free(out);
    return failures == 0 ? 0 : 2;
  }

  if (py->parsed()) {
    auto load = [&](const std::string& in) -> pt_poly* {
      if (!in.empty() && in[0] == '@')
        return pt_poly_from_corpus(py_corpus.empty() ? nullptr : py_corpus.c_str(),
                                   in.c_str() + 1);
      return pt_poly_parse(in.c_str());
    };
    pt_poly* p = load(py_in1);
    if (!p) {
      fprintf(stderr, "error: %s\n", pt_last_error());
      return 1;
    }
    pt_poly* q = load(py_in2);
    if (!q) {
      pt_poly_free(p);
      fprintf(stderr, "error: %s\n", pt_last_error());
      return 1;
    }
    pt_poly* r = nullptr;
    if (py_tool == "resultant") r = pt_poly_resultant(p, q, py_var.c_str(), 1);
    if (py_tool == "gcd") r = pt_poly_gcd(p, q, py_var.c_str());
    if (py_tool == "pseudo-rem") {
      int power = 0;
      r = pt_poly_pseudo_rem(p, q, py_var.c_str(), &power);
    }
    int rc = 0;
    if (!r) {
      fprintf(stderr, "error: %s\n", pt_last_error());
      rc = 1;
    } else {
      printf("%s\n", take_string(pt_poly_serialize(r)).c_str());
      pt_poly_free(r);
    }
    pt_poly_free(p);
    pt_poly_free(q);
    return rc;
  }

  if (fd->parsed()) {
    char* out = pt_modulus_registry();
    if (!out) {
      fprintf(stderr, "error: %s\n", pt_last_error());
      return 1;
    }
    printf("%s", out);
    pt_string_free(out);
    return 0;
  }
  return 1;
}
