#pragma once

#include <string>
#include <vector>

namespace permtri {

// Outcome of one verified identity.  kind "identity" checks participate in
// pass/fail; kind "display" records textual-display comparisons (e.g. a
// suspected typo in a printed formula) without failing the stage.
struct CheckResult {
  std::string id;
  std::string anchor;  // where the identity is displayed, e.g. "eq 2.24"
  bool pass = false;
  std::string kind = "identity";
  std::string witness;  // term diff / detail on failure, cleared powers, etc.
  double ms = 0.0;
};

struct StageReport {
  std::string stage;
  std::vector<CheckResult> checks;
  double wall_ms = 0.0;

  bool passed() const {
    for (const auto& c : checks)
      if (c.kind == "identity" && !c.pass) return false;
    return true;
  }
  int failures() const {
    int n = 0;
    for (const auto& c : checks)
      if (c.kind == "identity" && !c.pass) ++n;
    return n;
  }
};

std::string render_text(const std::vector<StageReport>& reports);
// Structured report: {command, config, results[], summary{pass,fail,wall_ms}}.
std::string render_json(const std::string& command, const std::string& config_json,
                        const std::vector<StageReport>& reports);

}  // namespace permtri
