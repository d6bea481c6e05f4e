#pragma once

#include <cstdint>
#include <string>

#include "matchkit/ntu_market.hpp"
#include "matchkit/tu_market.hpp"

namespace matchkit {

// Deterministic market families. The same profile always yields the same
// market, independent of platform: all draws go through hand-rolled bounded
// sampling on a fixed-width engine.
enum class GenFamily {
  ComplementaryNtu,   // every agent passes the complementarity validator
  PickOneSideNtu,     // central agents rank single-sided bundles only
  FullyComplementaryTu,
  UnconstrainedNtu,   // random rankings, no conditions enforced
  UnconstrainedTu,
};

GenFamily parse_family(const std::string& name); // throws input_error
std::string family_name(GenFamily f);

struct GenProfile {
  GenFamily family = GenFamily::ComplementaryNtu;
  int left_agents = 2;
  int central_agents = 2;
  int right_agents = 2;
  int contracts = 6; // primitive contracts for TU families
  std::uint64_t seed = 0;
};

// Structured proposals validated by the condition checkers; draws are
// rejection-sampled until the family's conditions hold. Throws input_error
// when the profile cannot be satisfied.
NtuMarketSpec generate_ntu(const GenProfile& profile);
TuMarketSpec generate_tu(const GenProfile& profile);

} // namespace matchkit
