#include "matchkit/ntu_conditions.hpp"

namespace matchkit {

namespace {

constexpr int kMaxAgentContracts = 14;

void guard_size(const NtuMarket& m, int agent) {
  if (set_size(m.agent_contracts(agent)) > kMaxAgentContracts)
    throw input_error("agent " + m.agent_id(agent) + " has more than " +
                      std::to_string(kMaxAgentContracts) +
                      " contracts; exhaustive condition check refused");
}

} // namespace

std::string condition_name(ConditionKind k) {
  switch (k) {
    case ConditionKind::Complementarity: return "complementarity";
    case ConditionKind::SameSideComplementarity: return "same-side-complementarity";
    case ConditionKind::CrossSideSubstitutability: return "cross-side-substitutability";
    case ConditionKind::PickOneSide: return "pick-one-side";
  }
  return "?";
}

std::optional<ConditionViolation> check_complementarity(const NtuMarket& m,
                                                        int agent) {
  guard_size(m, agent);
  Mask xi = m.agent_contracts(agent);
  for (Mask yp : canonical_submasks(xi)) {
    Mask ch_yp = m.choose(agent, yp);
    for (Mask y : canonical_submasks(yp)) {
      if (!subset_of(m.choose(agent, y), ch_yp))
        return ConditionViolation{agent, ConditionKind::Complementarity, y, yp,
                                  "Ch(Y) subset Ch(Y')"};
    }
  }
  return std::nullopt;
}

std::optional<ConditionViolation> check_same_side_cross_side(
    const NtuMarket& m, int agent, CentralVariant variant) {
  if (m.agent_side(agent) != Side::Center)
    throw input_error("check_same_side_cross_side requires a central agent: " +
                      m.agent_id(agent));
  guard_size(m, agent);
  Mask xi = m.agent_contracts(agent);
  Mask xl = xi & m.left_mask();
  Mask xr = xi & m.right_mask();
  bool want_same = variant != CentralVariant::CrossSideOnly;
  bool want_cross = variant != CentralVariant::SameSideOnly;

  for (Mask z : canonical_submasks(xi)) {
    Mask ch_z = m.choose(agent, z);
    // Eq. (2): Y^L = Z^L, Y^R subset Z^R.
    for (Mask yr : canonical_submasks(z & xr)) {
      Mask y = (z & xl) | yr;
      Mask ch_y = m.choose(agent, y);
      if (want_same && !subset_of(ch_y & xr, ch_z & xr))
        return ConditionViolation{agent, ConditionKind::SameSideComplementarity,
                                  y, z, "Ch(Y)^R subset Ch(Z)^R"};
      if (want_cross && !subset_of(ch_z & xl, ch_y & xl))
        return ConditionViolation{agent,
                                  ConditionKind::CrossSideSubstitutability, y, z,
                                  "Ch(Z)^L subset Ch(Y)^L"};
    }
    // Eq. (3): Y^R = Z^R, Y^L subset Z^L.
    for (Mask yl : canonical_submasks(z & xl)) {
      Mask y = (z & xr) | yl;
      Mask ch_y = m.choose(agent, y);
      if (want_same && !subset_of(ch_y & xl, ch_z & xl))
        return ConditionViolation{agent, ConditionKind::SameSideComplementarity,
                                  y, z, "Ch(Y)^L subset Ch(Z)^L"};
      if (want_cross && !subset_of(ch_z & xr, ch_y & xr))
        return ConditionViolation{agent,
                                  ConditionKind::CrossSideSubstitutability, y, z,
                                  "Ch(Z)^R subset Ch(Y)^R"};
    }
  }
  return std::nullopt;
}

std::optional<ConditionViolation> check_pick_one_side(const NtuMarket& m,
                                                      int agent) {
  if (m.agent_side(agent) != Side::Center)
    throw input_error("check_pick_one_side requires a central agent: " +
                      m.agent_id(agent));
  for (Mask r : m.ranking(agent)) {
    if (!m.prefers(agent, r, 0)) break; // remaining bundles rank below empty
    if (!subset_of(r, m.left_mask()) && !subset_of(r, m.right_mask()))
      return ConditionViolation{agent, ConditionKind::PickOneSide, r, 0,
                                "Y subset X^L or Y subset X^R"};
  }
  return std::nullopt;
}

ValidationReport validate_market(const NtuMarket& m,
                                 ValidationProfile profile) {
  if (!m.tiered())
    throw input_error("validate_market requires a tiered market");
  ValidationReport report;
  for (int a = 0; a < m.agent_count(); ++a) {
    if (m.agent_side(a) == Side::Center) {
      auto variant = profile == ValidationProfile::Full
                         ? CentralVariant::Full
                         : CentralVariant::SameSideOnly;
      if (auto v = check_same_side_cross_side(m, a, variant))
        report.violations.push_back(*v);
      if (profile == ValidationProfile::PickOneSide)
        if (auto v = check_pick_one_side(m, a))
          report.violations.push_back(*v);
    } else {
      if (auto v = check_complementarity(m, a))
        report.violations.push_back(*v);
    }
  }
  return report;
}

std::string format_violation(const NtuMarket& m, const ConditionViolation& v) {
  return "agent=" + m.agent_id(v.agent) + " condition=" +
         condition_name(v.kind) + " Y=" + format_bundle(m, v.y) + " Z=" +
         format_bundle(m, v.z) + " failed=\"" + v.inclusion + "\"";
}

} // namespace matchkit
