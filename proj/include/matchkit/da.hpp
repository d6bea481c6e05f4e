#pragma once

#include <string>
#include <vector>

#include "matchkit/ntu_market.hpp"

namespace matchkit {

enum class DaVariant { Original, Modified };

struct DaConfig {
  Wing start_side = Wing::Left; // Right runs the mirrored algorithm
  DaVariant variant = DaVariant::Original;
};

struct DaStep {
  int stage = 0;
  Wing phase = Wing::Left; // which wing's contracts this phase proposes
  int step = 0;            // 1-based within the phase
  Mask avail = 0;          // the set agents choose from at this step
  Mask rejected = 0;       // union of rejections at this step
};

struct DaStageSets {
  Mask a_init = 0;        // A^{k(1)}
  Mask a_final = 0;       // A^k
  bool has_secondary = false;
  Mask d_final = 0;       // D^k
  Mask a_next_init = 0;   // A^{k+1(1)}
};

struct AlgorithmTrace {
  std::vector<DaStep> steps;
  std::vector<DaStageSets> stages;
  Wing terminated_phase = Wing::Left;
  int terminated_stage = 0;
  Mask outcome = 0;
};

struct PhaseResult {
  Mask final_set = 0;
  std::vector<DaStep> steps;
};

struct SecondaryPhaseResult {
  Mask d_final = 0;
  Mask a_next_init = 0;
  bool primary_rejection = false; // E^L nonempty at the stopping step
  std::vector<DaStep> steps;
};

// One run of the proposing-side DA: agents on the `primary` wing's outer
// side and the central agents choose from a shrinking set of primary-wing
// contracts until no rejection occurs or the set empties.
PhaseResult primary_phase(const NtuMarket& m, Wing primary, Mask a_init,
                          int stage);

// One run of the opposite-side DA: central and opposite-side agents choose
// from a_k plus a shrinking set of opposite-wing contracts. Primary-wing
// contracts are never removed from a_k during the phase; rejections from it
// are folded into a_next_init at the stopping step.
SecondaryPhaseResult secondary_phase(const NtuMarket& m, Wing primary,
                                     Mask a_k, int stage);

// The full alternate DA. Executes regardless of whether the market passes
// the preference conditions; the trace records whatever happens.
AlgorithmTrace run_da(const NtuMarket& m, const DaConfig& cfg = {});

// Deterministic line-oriented trace text, bit-exact across platforms.
std::string format_trace(const NtuMarket& m, const AlgorithmTrace& t);

} // namespace matchkit
