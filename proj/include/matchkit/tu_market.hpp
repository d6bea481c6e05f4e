#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "matchkit/mask.hpp"
#include "matchkit/ntu_market.hpp" // Side, Wing, input_error

namespace matchkit {

// Exact rational. No floating point anywhere in valuations, prices, or
// pivots.
using Rat = mpq_class;

std::string rat_str(const Rat& r);
Rat parse_rat(const std::string& s); // "num/den" or "num"

struct TuAgentSpec {
  std::string id;
  Side side = Side::Center;
};

struct TuPrimitiveSpec {
  std::string id;
  std::string first;  // upstream participant (pays the canonical transfer)
  std::string second;
  Wing wing = Wing::Left;
};

struct TuValuationEntry {
  std::string owner;
  std::vector<std::string> bundle;
  std::string value; // rational string
};

struct TuMarketSpec {
  std::vector<TuAgentSpec> agents;
  std::vector<TuPrimitiveSpec> primitives;
  // Omitted subsets default to 0, including v(empty).
  std::vector<TuValuationEntry> valuations;
};

// Price vector over primitive contracts: one canonical transfer t^w per
// primitive, paid by the upstream participant (left agent on left
// contracts, central agent on right contracts). p^w_i is +t^w for the
// upstream participant and -t^w for the downstream one, so p^w_i + p^w_j = 0
// by construction.
using PriceVector = std::vector<Rat>;

struct PricedContract {
  int primitive = -1;
  Rat transfer; // canonical orientation
  bool operator==(const PricedContract&) const = default;
};
using TuOutcome = std::vector<PricedContract>;

class TuMarket {
 public:
  static TuMarket build(const TuMarketSpec& spec);

  int agent_count() const { return static_cast<int>(agent_ids_.size()); }
  int primitive_count() const { return static_cast<int>(prim_ids_.size()); }
  const std::string& agent_id(int a) const { return agent_ids_[a]; }
  Side agent_side(int a) const { return agent_sides_[a]; }
  const std::string& primitive_id(int w) const { return prim_ids_[w]; }
  int agent_index(const std::string& id) const;
  int primitive_index(const std::string& id) const;
  Wing wing(int w) const { return wings_[w]; }
  const std::pair<int, int>& participants(int w) const {
    return participants_[w];
  }
  int upstream(int w) const { return participants_[w].first; }

  Mask full_mask() const { return full_mask_; }
  Mask wing_mask(Wing w) const {
    return w == Wing::Left ? left_mask_ : right_mask_;
  }
  Mask agent_primitives(int a) const { return agent_prim_mask_[a]; }

  // v_a(psi), psi a subset of the agent's primitives.
  const Rat& value(int a, Mask psi) const;

  // Signed per-agent price components p^w_a for all w in Omega_a.
  std::vector<Rat> agent_components(int a, const PriceVector& p) const;

  Mask mask_of(const std::vector<std::string>& primitive_ids) const;
  std::vector<std::string> ids_of(Mask m) const;

  TuMarketSpec to_spec() const;

 private:
  TuMarket() = default;
  std::vector<std::string> agent_ids_;
  std::vector<Side> agent_sides_;
  std::vector<std::string> prim_ids_;
  std::vector<std::pair<int, int>> participants_;
  std::vector<Wing> wings_;
  std::vector<Mask> agent_prim_mask_;
  Mask full_mask_ = 0;
  Mask left_mask_ = 0;
  Mask right_mask_ = 0;
  // Per agent: dense table over submasks of Omega_a, indexed by the
  // compressed local submask (pext-style packing of the agent's bits).
  std::vector<std::vector<Rat>> values_;
  std::vector<std::vector<int>> local_bit_; // global bit -> local position

  friend TuMarket transform_market(const TuMarket& m);
  int local_index(int a, Mask psi) const;
};

// u_a of a set of priced contracts; nullopt encodes the minus-infinity
// branch (a primitive signed twice).
std::optional<Rat> utility(const TuMarket& m, int a, const TuOutcome& y);

// All maximizers of v(psi) - sum of prices, by exhaustive enumeration, in
// canonical order. `prices` are the agent's signed components p^w_a.
std::vector<Mask> demand(const TuMarket& m, int a,
                         const std::vector<Rat>& prices);

// Phi_a in D_a(p_a) for every agent? Returns the first violating agent.
std::optional<int> equilibrium_violator(const TuMarket& m, Mask phi,
                                        const PriceVector& p);
inline bool is_equilibrium(const TuMarket& m, Mask phi, const PriceVector& p) {
  return !equilibrium_violator(m, phi, p).has_value();
}

TuOutcome kappa(Mask phi, const PriceVector& p);

// Increasing-differences form: ok iff v(Phi+w') - v(Phi) <= v(Psi+w') -
// v(Psi) for all Phi strictly inside Psi, w' outside Psi. Witness is the
// first violation in (Phi canonical, w' ascending, Psi canonical) order.
struct SupermodularityWitness {
  Mask phi = 0;
  Mask psi = 0;
  int wprime = -1;
};
std::optional<SupermodularityWitness> check_supermodular(const TuMarket& m,
                                                         int a);

struct FullComplementarityReport {
  struct Entry {
    int agent = -1;
    bool transformed = false; // central agents are checked post-flip
    std::optional<SupermodularityWitness> witness;
  };
  std::vector<Entry> entries;
  bool ok() const {
    for (const auto& e : entries)
      if (e.witness) return false;
    return true;
  }
};

// Side agents: supermodularity of v (equivalent to gross complements).
// Central agents: supermodularity of the flipped valuation (the operational
// sufficient condition for same-side gross complements / cross-side gross
// substitutes).
FullComplementarityReport check_full_complementarity(const TuMarket& m);

// Certified gross-complements violation built from a supermodularity
// witness, following the large-H price construction: D(p) and D(q) are
// verified singletons with p >= q, equal prices on w', and w' demanded at p
// but not at q.
struct GrossComplementsViolation {
  std::vector<Rat> p; // agent components
  std::vector<Rat> q;
  Mask demand_p = 0; // the unique member of D(p)
  Mask demand_q = 0;
  int wprime = -1;
};
GrossComplementsViolation falsify_gross_complements(const TuMarket& m, int a);

enum class ProbeKind {
  Antitone,          // Lemma-2-style lattice property of demand
  GrossComplements,  // unique-demand monotonicity in prices
  CentralTwoSided,   // the central-agent two-sided condition
};

struct ProbeViolation {
  std::vector<Rat> p;
  std::vector<Rat> q;
  std::string detail;
};

// Randomized falsifier: samples ordered price pairs and checks the
// condition's conclusion. Finding nothing proves nothing; any returned
// violation is re-verified by enumeration.
std::optional<ProbeViolation> sampled_condition_probe(const TuMarket& m, int a,
                                                      ProbeKind kind,
                                                      int trials,
                                                      std::uint64_t seed);

// The valuation flip: left valuations unchanged, central valuations flipped
// on the right wing, right valuations fully flipped. An involution.
TuMarket transform_market(const TuMarket& m);

// Reverses the directions of the transfers of all right-wing primitives.
PriceVector g_operator(const TuMarket& m, const PriceVector& p);

struct MappedEquilibrium {
  Mask allocation = 0;
  PriceVector prices;
};

// Maps an equilibrium of the transformed market back to the original one
// and re-verifies it. Throws input_error when the input pair is not an
// equilibrium of the transformed market.
MappedEquilibrium map_equilibrium(const TuMarket& original, Mask psi,
                                  const PriceVector& p);

struct DemandRelationReport {
  int checked = 0;
  bool ok = true;
  std::optional<Mask> counterexample;
};

// Exhaustively verifies the demand flip bijection for a central or
// right-side agent at the given agent price components.
DemandRelationReport demand_relation_check(const TuMarket& m, int a,
                                           const std::vector<Rat>& prices);

std::string format_allocation(const TuMarket& m, Mask phi);
std::string format_prices(const TuMarket& m, const PriceVector& p);

} // namespace matchkit
