#include "matchkit/gen.hpp"

#include <algorithm>
#include <random>

#include "matchkit/ntu_conditions.hpp"

namespace matchkit {

GenFamily parse_family(const std::string& name) {
  if (name == "complementary-ntu") return GenFamily::ComplementaryNtu;
  if (name == "pick-one-side-ntu") return GenFamily::PickOneSideNtu;
  if (name == "fully-complementary-tu") return GenFamily::FullyComplementaryTu;
  if (name == "unconstrained-ntu") return GenFamily::UnconstrainedNtu;
  if (name == "unconstrained-tu") return GenFamily::UnconstrainedTu;
  throw input_error("unknown generator family: " + name);
}

std::string family_name(GenFamily f) {
  switch (f) {
    case GenFamily::ComplementaryNtu: return "complementary-ntu";
    case GenFamily::PickOneSideNtu: return "pick-one-side-ntu";
    case GenFamily::FullyComplementaryTu: return "fully-complementary-tu";
    case GenFamily::UnconstrainedNtu: return "unconstrained-ntu";
    case GenFamily::UnconstrainedTu: return "unconstrained-tu";
  }
  throw input_error("unknown generator family");
}

namespace {

struct Rng {
  std::mt19937_64 engine;
  explicit Rng(std::uint64_t seed) : engine(seed ^ 0x6d61726b6b697467ULL) {}
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : engine() % n; }
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i)
      std::swap(v[i - 1], v[below(i)]);
  }
};

std::string pad2(int n) {
  return n < 10 ? "0" + std::to_string(n) : std::to_string(n);
}

// Nested chain of bundles over the given contract ids, largest first,
// possibly with gaps. Every chain choice function is monotone.
std::vector<std::vector<std::string>> chain_ranking(
    Rng& rng, std::vector<std::string> ids) {
  rng.shuffle(ids);
  std::vector<std::vector<std::string>> out;
  for (int k = static_cast<int>(ids.size()); k >= 1; --k) {
    if (k != static_cast<int>(ids.size()) && rng.below(4) == 0)
      continue; // gap
    out.push_back({ids.begin(), ids.begin() + k});
  }
  return out;
}

std::vector<std::string> agent_contract_ids(const NtuMarketSpec& spec,
                                            const std::string& agent) {
  std::vector<std::string> out;
  for (const auto& c : spec.contracts)
    if (c.first == agent || c.second == agent) out.push_back(c.id);
  return out;
}

void propose_rankings(Rng& rng, NtuMarketSpec& spec, GenFamily family,
                      const std::string& agent, Side side,
                      NtuPreferenceSpec& pref) {
  pref.owner = agent;
  pref.ranking.clear();
  auto ids = agent_contract_ids(spec, agent);
  if (side != Side::Center || family == GenFamily::UnconstrainedNtu) {
    if (family == GenFamily::UnconstrainedNtu) {
      // random distinct subsets in random order
      std::vector<std::vector<std::string>> bundles;
      int want = static_cast<int>(rng.below(6)) + 1;
      for (int t = 0; t < want * 4 && static_cast<int>(bundles.size()) < want;
           ++t) {
        std::vector<std::string> b;
        for (const auto& id : ids)
          if (rng.below(2) == 0) b.push_back(id);
        if (b.empty()) continue;
        if (std::find(bundles.begin(), bundles.end(), b) == bundles.end())
          bundles.push_back(std::move(b));
      }
      pref.ranking = std::move(bundles);
    } else {
      pref.ranking = chain_ranking(rng, ids);
    }
    return;
  }

  std::vector<std::string> left, right;
  for (const auto& c : spec.contracts) {
    if (c.first != agent && c.second != agent) continue;
    (c.wing == Wing::Left ? left : right).push_back(c.id);
  }
  auto lchain = chain_ranking(rng, left);
  auto rchain = chain_ranking(rng, right);

  if (family == GenFamily::PickOneSideNtu) {
    // random interleaving preserving within-side order
    std::size_t li = 0, ri = 0;
    while (li < lchain.size() || ri < rchain.size()) {
      bool take_left = ri == rchain.size() ||
                       (li < lchain.size() && rng.below(2) == 0);
      pref.ranking.push_back(take_left ? lchain[li++] : rchain[ri++]);
    }
    return;
  }

  // ComplementaryNtu: grid of unions of the two chains, larger unions first.
  // The induced choice picks the best prefix on each wing independently.
  std::vector<std::vector<std::string>> grid;
  auto add = [&](std::vector<std::string> b) {
    std::sort(b.begin(), b.end());
    if (!b.empty() &&
        std::find(grid.begin(), grid.end(), b) == grid.end())
      grid.push_back(std::move(b));
  };
  for (const auto& lb : lchain) add(lb);
  for (const auto& rb : rchain) add(rb);
  for (const auto& lb : lchain)
    for (const auto& rb : rchain) {
      auto b = lb;
      b.insert(b.end(), rb.begin(), rb.end());
      add(std::move(b));
    }
  std::stable_sort(grid.begin(), grid.end(),
                   [](const auto& a, const auto& b) {
                     return a.size() > b.size();
                   });
  pref.ranking = std::move(grid);
}

bool agent_conditions_hold(const NtuMarket& m, int a, GenFamily family) {
  switch (family) {
    case GenFamily::UnconstrainedNtu:
      return true;
    case GenFamily::PickOneSideNtu:
      if (m.agent_side(a) == Side::Center)
        return !check_same_side_cross_side(m, a,
                                           CentralVariant::SameSideOnly) &&
               !check_pick_one_side(m, a);
      return !check_complementarity(m, a);
    default:
      if (m.agent_side(a) == Side::Center)
        return !check_same_side_cross_side(m, a, CentralVariant::Full);
      return !check_complementarity(m, a);
  }
}

} // namespace

NtuMarketSpec generate_ntu(const GenProfile& profile) {
  if (profile.family == GenFamily::FullyComplementaryTu ||
      profile.family == GenFamily::UnconstrainedTu)
    throw input_error("profile family generates a transferable-utility "
                      "market; use generate_tu");
  if (profile.left_agents < 1 || profile.central_agents < 1 ||
      profile.right_agents < 1)
    throw input_error("each tier needs at least one agent");
  if (profile.contracts < 1 || profile.contracts > 12)
    throw input_error("contract count must be between 1 and 12");

  Rng rng(profile.seed);
  NtuMarketSpec spec;
  std::vector<std::string> lefts, centers, rights;
  for (int i = 1; i <= profile.left_agents; ++i) {
    lefts.push_back("l" + pad2(i));
    spec.agents.push_back({lefts.back(), Side::Left});
  }
  for (int i = 1; i <= profile.central_agents; ++i) {
    centers.push_back("c" + pad2(i));
    spec.agents.push_back({centers.back(), Side::Center});
  }
  for (int i = 1; i <= profile.right_agents; ++i) {
    rights.push_back("r" + pad2(i));
    spec.agents.push_back({rights.back(), Side::Right});
  }
  for (int i = 1; i <= profile.contracts; ++i) {
    NtuContractSpec c;
    c.id = "x" + pad2(i);
    c.wing = i % 2 == 1 ? Wing::Left : Wing::Right;
    const std::string& center = centers[rng.below(centers.size())];
    if (c.wing == Wing::Left) {
      c.first = lefts[rng.below(lefts.size())];
      c.second = center;
    } else {
      c.first = center;
      c.second = rights[rng.below(rights.size())];
    }
    spec.contracts.push_back(std::move(c));
  }

  spec.preferences.resize(spec.agents.size());
  std::vector<bool> dirty(spec.agents.size(), true);
  for (int round = 0; round < 300; ++round) {
    for (std::size_t i = 0; i < spec.agents.size(); ++i)
      if (dirty[i])
        propose_rankings(rng, spec, profile.family, spec.agents[i].id,
                         spec.agents[i].side, spec.preferences[i]);
    NtuMarket m = NtuMarket::build(spec);
    bool all_ok = true;
    for (std::size_t i = 0; i < spec.agents.size(); ++i) {
      dirty[i] = !agent_conditions_hold(m, m.agent_index(spec.agents[i].id),
                                        profile.family);
      if (dirty[i]) all_ok = false;
    }
    if (all_ok) return spec;
  }
  throw input_error("generator failed to satisfy the family conditions for "
                    "this profile");
}

TuMarketSpec generate_tu(const GenProfile& profile) {
  if (profile.family != GenFamily::FullyComplementaryTu &&
      profile.family != GenFamily::UnconstrainedTu)
    throw input_error("profile family generates a contract market; use "
                      "generate_ntu");
  if (profile.left_agents < 1 || profile.central_agents < 1 ||
      profile.right_agents < 1)
    throw input_error("each tier needs at least one agent");
  if (profile.contracts < 1 || profile.contracts > 10)
    throw input_error("primitive count must be between 1 and 10");

  Rng rng(profile.seed * 0x9e3779b97f4a7c15ULL + 17);
  TuMarketSpec spec;
  std::vector<std::string> lefts, centers, rights;
  for (int i = 1; i <= profile.left_agents; ++i) {
    lefts.push_back("l" + pad2(i));
    spec.agents.push_back({lefts.back(), Side::Left});
  }
  for (int i = 1; i <= profile.central_agents; ++i) {
    centers.push_back("c" + pad2(i));
    spec.agents.push_back({centers.back(), Side::Center});
  }
  for (int i = 1; i <= profile.right_agents; ++i) {
    rights.push_back("r" + pad2(i));
    spec.agents.push_back({rights.back(), Side::Right});
  }
  for (int i = 1; i <= profile.contracts; ++i) {
    TuPrimitiveSpec w;
    w.id = "w" + pad2(i);
    w.wing = i % 2 == 1 ? Wing::Left : Wing::Right;
    const std::string& center = centers[rng.below(centers.size())];
    if (w.wing == Wing::Left) {
      w.first = lefts[rng.below(lefts.size())];
      w.second = center;
    } else {
      w.first = center;
      w.second = rights[rng.below(rights.size())];
    }
    spec.primitives.push_back(std::move(w));
  }

  // Per-agent subset values. The fully complementary family uses
  // linear-plus-convex-in-size values (supermodular by construction); the
  // central agents get them through the valuation flip so the transformed
  // table is the supermodular one.
  TuMarket skeleton = TuMarket::build(spec); // values all zero; for masks
  for (int a = 0; a < skeleton.agent_count(); ++a) {
    Mask omega = skeleton.agent_primitives(a);
    auto ids = skeleton.ids_of(omega);
    std::vector<long> unit(skeleton.primitive_count(), 0);
    for (int w : mask_indices(omega))
      unit[w] = static_cast<long>(rng.below(7)) - 3;
    long pair_bonus = static_cast<long>(rng.below(3));
    Mask omega_r = omega & skeleton.wing_mask(Wing::Right);
    for (Mask psi : canonical_nonempty_submasks(omega)) {
      long v;
      if (profile.family == GenFamily::UnconstrainedTu) {
        v = static_cast<long>(rng.below(11)) - 5;
      } else {
        Mask eff = psi;
        if (skeleton.agent_side(a) == Side::Center)
          eff = (psi & skeleton.wing_mask(Wing::Left)) | (omega_r & ~psi);
        long n = set_size(eff);
        v = pair_bonus * n * (n - 1) / 2;
        for (int w : mask_indices(eff)) v += unit[w];
      }
      if (v == 0) continue;
      spec.valuations.push_back(
          {skeleton.agent_id(a), skeleton.ids_of(psi), std::to_string(v)});
    }
    // the empty set's value under the flip need not be zero
    if (profile.family == GenFamily::FullyComplementaryTu &&
        skeleton.agent_side(a) == Side::Center && omega_r != 0) {
      long n = set_size(omega_r);
      long v = pair_bonus * n * (n - 1) / 2;
      for (int w : mask_indices(omega_r)) v += unit[w];
      if (v != 0)
        spec.valuations.push_back({skeleton.agent_id(a), {}, std::to_string(v)});
    }
  }

  if (profile.family == GenFamily::FullyComplementaryTu) {
    TuMarket check = TuMarket::build(spec);
    if (!check_full_complementarity(check).ok())
      throw input_error("generator produced a non-complementary valuation; "
                        "this is a construction defect");
  }
  return spec;
}

} // namespace matchkit
