#pragma once

#include <optional>
#include <string>
#include <vector>

#include "matchkit/ntu_market.hpp"

namespace matchkit {

enum class ConditionKind {
  Complementarity,
  SameSideComplementarity,
  CrossSideSubstitutability,
  PickOneSide,
};

std::string condition_name(ConditionKind k);

// Witness of a failed preference condition. Re-evaluating the named
// inclusion on (y, z) with the market's choice function reproduces the
// failure.
struct ConditionViolation {
  int agent = -1;
  ConditionKind kind = ConditionKind::Complementarity;
  Mask y = 0;
  Mask z = 0;
  std::string inclusion; // e.g. "Ch(Y)^R subset Ch(Z)^R"
};

// Which halves of Definition 3's displayed inclusions to enforce for a
// central agent. The weakened variants match the appendix lemmas'
// hypotheses.
enum class CentralVariant { Full, SameSideOnly, CrossSideOnly };

// Choice expands as availability grows: Y subset Y' implies
// Ch(Y) subset Ch(Y'). Minimal violation by (|Y'|, then |Y|).
std::optional<ConditionViolation> check_complementarity(const NtuMarket& m,
                                                        int agent);

// Same-side complementarity / cross-side substitutability for a central
// agent, exhaustively over all qualifying bundle pairs.
std::optional<ConditionViolation> check_same_side_cross_side(
    const NtuMarket& m, int agent, CentralVariant variant = CentralVariant::Full);

// Every bundle ranked strictly above the empty bundle lies entirely on one
// wing.
std::optional<ConditionViolation> check_pick_one_side(const NtuMarket& m,
                                                      int agent);

enum class ValidationProfile { Full, PickOneSide };

struct ValidationReport {
  std::vector<ConditionViolation> violations;
  bool ok() const { return violations.empty(); }
};

// Aggregates the per-agent checks for the requested hypothesis set; lists
// all violations, one per failing check.
ValidationReport validate_market(const NtuMarket& m, ValidationProfile profile);

std::string format_violation(const NtuMarket& m, const ConditionViolation& v);

} // namespace matchkit
