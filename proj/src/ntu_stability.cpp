#include "matchkit/ntu_stability.hpp"

#include <algorithm>

#include "matchkit/ntu_conditions.hpp"
#include "matchkit/parallel.hpp"

namespace matchkit {

namespace {

constexpr int kBlockGuard = 20;
constexpr int kEnumGuard = 12;

void guard(int n, int limit, const char* what) {
  if (n > limit)
    throw input_error(std::string(what) + " refused: 2^" + std::to_string(n) +
                      " candidates exceed the 2^" + std::to_string(limit) +
                      " enumeration bound");
}

} // namespace

bool blocks(const NtuMarket& m, Mask y, Mask z) {
  if (z == 0 || (z & y) != 0) return false;
  Mask avail = y | z;
  for (int a = 0; a < m.agent_count(); ++a) {
    Mask zi = m.restrict(z, a);
    if (zi == 0) continue;
    if (!subset_of(zi, m.choose(a, avail))) return false;
  }
  return true;
}

std::optional<Mask> setwise_block_witness(const NtuMarket& m, Mask y, Mask z) {
  if (z == 0 || (z & y) != 0) return std::nullopt;
  for (Mask t : canonical_submasks(y)) {
    Mask ystar = z | t;
    bool ok = true;
    for (int a = 0; a < m.agent_count() && ok; ++a) {
      if (m.restrict(z, a) == 0) continue; // Def. 4 quantifies over N(Z) only
      Mask yi_star = m.restrict(ystar, a);
      if (yi_star != m.choose(a, ystar) ||
          !m.prefers(a, yi_star, m.restrict(y, a)))
        ok = false;
    }
    if (ok) return ystar;
  }
  return std::nullopt;
}

std::optional<BlockCertificate> find_block_serial(const NtuMarket& m, Mask y) {
  Mask rest = m.full_mask() & ~y;
  guard(set_size(rest), kBlockGuard, "block search");
  for (Mask z : canonical_nonempty_submasks(rest))
    if (blocks(m, y, z)) return BlockCertificate{z};
  return std::nullopt;
}

std::optional<BlockCertificate> find_block(const NtuMarket& m, Mask y) {
  Mask rest = m.full_mask() & ~y;
  guard(set_size(rest), kBlockGuard, "block search");
  auto cands = canonical_nonempty_submasks(rest);
  std::size_t idx = first_match(
      cands.size(), [&](std::size_t i) { return blocks(m, y, cands[i]); });
  if (idx == cands.size()) return std::nullopt;
  return BlockCertificate{cands[idx]};
}

std::optional<SetwiseBlockCertificate> find_setwise_block_serial(
    const NtuMarket& m, Mask y) {
  guard(m.contract_count(), kEnumGuard, "setwise block search");
  Mask rest = m.full_mask() & ~y;
  for (Mask z : canonical_nonempty_submasks(rest))
    if (auto ystar = setwise_block_witness(m, y, z))
      return SetwiseBlockCertificate{z, *ystar};
  return std::nullopt;
}

std::optional<SetwiseBlockCertificate> find_setwise_block(const NtuMarket& m,
                                                          Mask y) {
  guard(m.contract_count(), kEnumGuard, "setwise block search");
  Mask rest = m.full_mask() & ~y;
  auto cands = canonical_nonempty_submasks(rest);
  std::size_t idx = first_match(cands.size(), [&](std::size_t i) {
    return setwise_block_witness(m, y, cands[i]).has_value();
  });
  if (idx == cands.size()) return std::nullopt;
  return SetwiseBlockCertificate{cands[idx],
                                 *setwise_block_witness(m, y, cands[idx])};
}

StabilityVerdict is_stable(const NtuMarket& m, Mask y) {
  StabilityVerdict v;
  if (auto violator = m.individually_rational_violator(y)) {
    v.reason = InstabilityReason::NotIndividuallyRational;
    v.ir_violator = violator;
    return v;
  }
  if (auto block = find_block(m, y)) {
    v.reason = InstabilityReason::Blocked;
    v.block = block;
    return v;
  }
  v.stable = true;
  return v;
}

StabilityVerdict is_setwise_stable(const NtuMarket& m, Mask y) {
  StabilityVerdict v;
  if (auto violator = m.individually_rational_violator(y)) {
    v.reason = InstabilityReason::NotIndividuallyRational;
    v.ir_violator = violator;
    return v;
  }
  if (auto block = find_setwise_block(m, y)) {
    v.reason = InstabilityReason::Blocked;
    v.setwise_block = block;
    return v;
  }
  v.stable = true;
  return v;
}

std::vector<Mask> enumerate_stable_serial(const NtuMarket& m,
                                          StabilityMode mode) {
  guard(m.contract_count(), kEnumGuard, "stable-set enumeration");
  std::vector<Mask> out;
  for (Mask y : canonical_submasks(m.full_mask())) {
    auto verdict = mode == StabilityMode::Stable ? is_stable(m, y)
                                                 : is_setwise_stable(m, y);
    if (verdict.stable) out.push_back(y);
  }
  return out;
}

std::vector<Mask> enumerate_stable(const NtuMarket& m, StabilityMode mode) {
  guard(m.contract_count(), kEnumGuard, "stable-set enumeration");
  auto cands = canonical_submasks(m.full_mask());
  auto hits = all_matches(cands.size(), [&](std::size_t i) {
    auto verdict = mode == StabilityMode::Stable
                       ? is_stable(m, cands[i])
                       : is_setwise_stable(m, cands[i]);
    return verdict.stable;
  });
  std::vector<Mask> out;
  out.reserve(hits.size());
  for (std::size_t i : hits) out.push_back(cands[i]);
  return out;
}

namespace {

void require_prop1_preconditions(const NtuMarket& m) {
  for (int a = 0; a < m.agent_count(); ++a) {
    if (m.agent_side(a) == Side::Center) {
      if (check_same_side_cross_side(m, a, CentralVariant::SameSideOnly))
        throw input_error("agent " + m.agent_id(a) +
                          " fails same-side complementarity");
      if (check_pick_one_side(m, a))
        throw input_error("agent " + m.agent_id(a) + " fails pick-one-side");
    } else if (check_complementarity(m, a)) {
      throw input_error("agent " + m.agent_id(a) + " fails complementarity");
    }
  }
}

} // namespace

Prop1Report check_prop1(const NtuMarket& m) {
  require_prop1_preconditions(m);
  Prop1Report r;
  r.stable = enumerate_stable(m, StabilityMode::Stable);
  r.setwise = enumerate_stable(m, StabilityMode::Setwise);
  r.equal = r.stable == r.setwise;
  if (!r.equal) {
    for (Mask y : r.stable)
      if (std::find(r.setwise.begin(), r.setwise.end(), y) == r.setwise.end()) {
        r.discrepancy = y;
        break;
      }
    if (!r.discrepancy)
      for (Mask y : r.setwise)
        if (std::find(r.stable.begin(), r.stable.end(), y) == r.stable.end()) {
          r.discrepancy = y;
          break;
        }
  }
  return r;
}

Lemma9Report lemma9_check(const NtuMarket& m, Mask y, Mask z) {
  for (int a = 0; a < m.agent_count(); ++a)
    if (m.agent_side(a) == Side::Center && check_pick_one_side(m, a))
      throw input_error("agent " + m.agent_id(a) + " fails pick-one-side");

  Lemma9Report r;
  auto [zl, zr] = m.side_split(z);
  if (blocks(m, y, z)) {
    r.setwise = false;
    if (zl != 0) r.left_ok = blocks(m, y, zl);
    if (zr != 0) r.right_ok = blocks(m, y, zr);
  } else if (setwise_block_witness(m, y, z)) {
    r.setwise = true;
    if (zl != 0) r.left_ok = setwise_block_witness(m, y, zl).has_value();
    if (zr != 0) r.right_ok = setwise_block_witness(m, y, zr).has_value();
  } else {
    throw input_error("Z does not block (or setwise block) Y");
  }
  return r;
}

std::string format_stability_verdict(const NtuMarket& m,
                                     const StabilityVerdict& v, bool setwise) {
  std::string label = setwise ? "setwise-stable" : "stable";
  if (v.stable) return label + "=true";
  std::string out = label + "=false";
  if (v.reason == InstabilityReason::NotIndividuallyRational)
    out += " reason=not-individually-rational violator=" +
           m.agent_id(*v.ir_violator);
  else if (v.block)
    out += " reason=blocked blocker=" + format_bundle(m, v.block->blocker);
  else if (v.setwise_block)
    out += " reason=setwise-blocked blocker=" +
           format_bundle(m, v.setwise_block->blocker) +
           " renegotiated=" + format_bundle(m, v.setwise_block->renegotiated);
  return out;
}

} // namespace matchkit
