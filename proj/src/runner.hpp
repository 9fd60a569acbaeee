#pragma once

#include <cstdint>
#include <string>

#include "report.hpp"

namespace permtri {

// Sweep configuration; the seed fully determines the sampled pair set, so
// identical configurations reproduce identical result sets.
struct RunConfig {
  int n = 2;            // q = 2^n
  uint64_t budget = 0;  // necessity samples (0: 10^5 default; ignored at q <= 16)
  int workers = 1;
  uint64_t seed = 1;
};

// Sufficiency sweep over every criterion-true a (b = a must give a PP by the
// mu test), necessity over all pairs at q <= 16 and over seeded samples
// beyond, plus the independent PP-count versus rootless-cubic-count check.
StageReport verify_theorem(const RunConfig& cfg);

std::string run_config_json(const RunConfig& cfg);

}  // namespace permtri
