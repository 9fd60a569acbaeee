#include "report.hpp"

#include <json.hpp>

#include <sstream>

namespace permtri {

std::string render_text(const std::vector<StageReport>& reports) {
  std::ostringstream os;
  for (const auto& r : reports) {
    os << "== stage " << r.stage << " ==\n";
    for (const auto& c : r.checks) {
      if (c.kind == "display") {
        os << "  note  " << c.id << " [" << c.anchor << "] "
           << (c.pass ? "matches display" : "differs from display") << "\n";
        if (!c.pass && !c.witness.empty()) os << "        " << c.witness << "\n";
        continue;
      }
      os << (c.pass ? "  ok    " : "  FAIL  ") << c.id << " [" << c.anchor << "] "
         << (int)c.ms << " ms\n";
      if (!c.witness.empty()) os << "        " << (c.pass ? "" : "witness: ") << c.witness << "\n";
    }
    os << "  -- " << (r.passed() ? "PASS" : "FAIL") << " (" << (int)r.wall_ms << " ms)\n";
  }
  return os.str();
}

std::string render_json(const std::string& command, const std::string& config_json,
                        const std::vector<StageReport>& reports) {
  nlohmann::json j;
  j["command"] = command;
  j["config"] = config_json.empty() ? nlohmann::json::object()
                                    : nlohmann::json::parse(config_json);
  auto results = nlohmann::json::array();
  int pass = 0, fail = 0;
  double wall = 0;
  for (const auto& r : reports) {
    wall += r.wall_ms;
    for (const auto& c : r.checks) {
      nlohmann::json e;
      e["stage"] = r.stage;
      e["id"] = c.id;
      e["anchor"] = c.anchor;
      e["kind"] = c.kind;
      e["status"] = c.pass ? "pass" : "fail";
      e["millis"] = c.ms;
      if (!c.witness.empty()) e["witness"] = c.witness;
      results.push_back(std::move(e));
      if (c.kind == "identity") (c.pass ? pass : fail)++;
    }
  }
  j["results"] = std::move(results);
  j["summary"] = {{"pass", pass}, {"fail", fail}, {"wall_ms", wall}};
  return j.dump(2);
}

}  // namespace permtri
