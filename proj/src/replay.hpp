#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "catalog.hpp"
#include "mvpoly.hpp"
#include "report.hpp"

namespace permtri {

// Stage-by-stage exact verification of the resultant-based proof chain: every
// displayed identity is recomputed from first principles or checked against
// the corpus, with zero tolerance.
class Replay {
 public:
  explicit Replay(Catalog cat, int workers = 1);

  static std::vector<std::string> stage_names();
  // Runs the requested stages in canonical order.  The requested set must be
  // dependency-closed (coefficients -> elimination -> resultants -> cases;
  // step3 and section4 additionally need coefficients), else DomainError.
  std::vector<StageReport> run(const std::vector<std::string>& stages);

  struct DerivedSet {
    MvPoly A, B;
    std::vector<MvPoly> C, E, F;  // C0..C4, E0..E3, F0..F6
    bool ready = false;
  };
  const DerivedSet& derived31();  // b outside F_q (variables a, b1, k)
  const DerivedSet& derived4();   // b in F_q (variables a, b, k)

  // Explicit multipliers m_i with target == sum m_i * gens[i], where each
  // generator introduces its fvars[i] linearly and the fvars occur nowhere
  // else in the generators.  Throws MathError when target is not in the
  // ideal.  Used once to freeze the corpus multiplier files; the elimination
  // and step-3 stages re-verify the frozen combination identities.
  static std::vector<MvPoly> combination_multipliers(const MvPoly& target,
                                                     const std::vector<MvPoly>& gens,
                                                     const std::vector<std::string>& fvars);

  // The (2.10)-(2.16) system as polynomials in formal D, E, F variables, and
  // its E3 = 0 restatement (2.41)-(2.47).
  static std::vector<MvPoly> system_p();
  static std::vector<MvPoly> system_p_e3zero();

 private:
  StageReport stage_coefficients();
  StageReport stage_elimination();
  StageReport stage_resultants();
  StageReport stage_cases();
  StageReport stage_step3();
  StageReport stage_section4();

  Catalog cat_;
  int workers_;
  DerivedSet d31_, d4_;
  std::optional<MvPoly> res_t2t3_a_, res_t2t3_k_;  // cached (2.29)/(2.30) values
  const MvPoly& res_t2t3_a();
  const MvPoly& res_t2t3_k();
};

}  // namespace permtri
