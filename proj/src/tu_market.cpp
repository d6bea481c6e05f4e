#include "matchkit/tu_market.hpp"

#include <algorithm>
#include <stdexcept>

namespace matchkit {

std::string rat_str(const Rat& r) { return r.get_str(); }

Rat parse_rat(const std::string& s) {
  Rat r;
  if (r.set_str(s, 10) != 0 || r.get_den() == 0)
    throw input_error("bad rational: " + s);
  r.canonicalize();
  return r;
}

namespace {

int lookup(const std::vector<std::string>& ids, const std::string& id,
           const char* what) {
  auto it = std::lower_bound(ids.begin(), ids.end(), id);
  if (it == ids.end() || *it != id)
    throw input_error(std::string("unknown ") + what + ": " + id);
  return static_cast<int>(it - ids.begin());
}

constexpr int kMaxAgentPrimitives = 16;

} // namespace

TuMarket TuMarket::build(const TuMarketSpec& spec) {
  TuMarket m;
  for (const auto& a : spec.agents) m.agent_ids_.push_back(a.id);
  std::sort(m.agent_ids_.begin(), m.agent_ids_.end());
  if (std::adjacent_find(m.agent_ids_.begin(), m.agent_ids_.end()) !=
      m.agent_ids_.end())
    throw input_error("duplicate agent id");
  m.agent_sides_.resize(m.agent_ids_.size());
  for (const auto& a : spec.agents)
    m.agent_sides_[lookup(m.agent_ids_, a.id, "agent")] = a.side;

  for (const auto& w : spec.primitives) m.prim_ids_.push_back(w.id);
  std::sort(m.prim_ids_.begin(), m.prim_ids_.end());
  if (std::adjacent_find(m.prim_ids_.begin(), m.prim_ids_.end()) !=
      m.prim_ids_.end())
    throw input_error("duplicate primitive contract id");
  if (m.prim_ids_.size() > 16)
    throw input_error("too many primitive contracts (limit 16)");

  m.participants_.resize(m.prim_ids_.size());
  m.wings_.resize(m.prim_ids_.size());
  m.agent_prim_mask_.assign(m.agent_ids_.size(), 0);
  for (const auto& w : spec.primitives) {
    int wi = lookup(m.prim_ids_, w.id, "primitive contract");
    int a = lookup(m.agent_ids_, w.first, "agent");
    int b = lookup(m.agent_ids_, w.second, "agent");
    Side sa = m.agent_sides_[a];
    Side sb = m.agent_sides_[b];
    if (w.wing == Wing::Left) {
      if (sa != Side::Left || sb != Side::Center)
        throw input_error("left-wing primitive " + w.id +
                          " must join a left-side agent and a central agent");
      m.left_mask_ |= bit(wi);
    } else {
      if (sa != Side::Center || sb != Side::Right)
        throw input_error("right-wing primitive " + w.id +
                          " must join a central agent and a right-side agent");
      m.right_mask_ |= bit(wi);
    }
    m.participants_[wi] = {a, b};
    m.wings_[wi] = w.wing;
    m.agent_prim_mask_[a] |= bit(wi);
    m.agent_prim_mask_[b] |= bit(wi);
  }
  m.full_mask_ = m.prim_ids_.empty() ? 0 : (bit(m.primitive_count()) - 1);

  m.local_bit_.assign(m.agent_ids_.size(),
                      std::vector<int>(m.prim_ids_.size(), -1));
  m.values_.resize(m.agent_ids_.size());
  for (int a = 0; a < m.agent_count(); ++a) {
    int n = set_size(m.agent_prim_mask_[a]);
    if (n > kMaxAgentPrimitives)
      throw input_error("agent " + m.agent_ids_[a] +
                        " holds too many primitives (limit 16)");
    int pos = 0;
    for (int w : mask_indices(m.agent_prim_mask_[a]))
      m.local_bit_[a][w] = pos++;
    m.values_[a].assign(std::size_t{1} << n, Rat(0));
  }

  std::vector<std::vector<bool>> seen(m.agent_ids_.size());
  for (int a = 0; a < m.agent_count(); ++a)
    seen[a].assign(m.values_[a].size(), false);
  for (const auto& e : spec.valuations) {
    int a = lookup(m.agent_ids_, e.owner, "agent");
    Mask psi = 0;
    for (const auto& wid : e.bundle)
      psi |= bit(lookup(m.prim_ids_, wid, "primitive contract"));
    if (!subset_of(psi, m.agent_prim_mask_[a]))
      throw input_error("valuation of " + e.owner +
                        " references a primitive not involving the agent");
    int li = m.local_index(a, psi);
    if (seen[a][li])
      throw input_error("duplicate valuation entry for " + e.owner);
    seen[a][li] = true;
    m.values_[a][li] = parse_rat(e.value);
  }
  return m;
}

int TuMarket::local_index(int a, Mask psi) const {
  int li = 0;
  for (int w : mask_indices(psi)) li |= 1 << local_bit_[a][w];
  return li;
}

int TuMarket::agent_index(const std::string& id) const {
  return lookup(agent_ids_, id, "agent");
}

int TuMarket::primitive_index(const std::string& id) const {
  return lookup(prim_ids_, id, "primitive contract");
}

const Rat& TuMarket::value(int a, Mask psi) const {
  if (!subset_of(psi, agent_prim_mask_[a]))
    throw input_error("valuation queried outside the agent's primitives");
  return values_[a][local_index(a, psi)];
}

std::vector<Rat> TuMarket::agent_components(int a, const PriceVector& p) const {
  if (static_cast<int>(p.size()) != primitive_count())
    throw input_error("price vector has wrong size");
  std::vector<Rat> out(primitive_count(), Rat(0));
  for (int w : mask_indices(agent_prim_mask_[a]))
    out[w] = upstream(w) == a ? p[w] : -p[w];
  return out;
}

Mask TuMarket::mask_of(const std::vector<std::string>& primitive_ids) const {
  Mask m = 0;
  for (const auto& id : primitive_ids) m |= bit(primitive_index(id));
  return m;
}

std::vector<std::string> TuMarket::ids_of(Mask m) const {
  std::vector<std::string> out;
  for (int i : mask_indices(m)) out.push_back(prim_ids_[i]);
  return out;
}

TuMarketSpec TuMarket::to_spec() const {
  TuMarketSpec spec;
  for (int a = 0; a < agent_count(); ++a)
    spec.agents.push_back({agent_ids_[a], agent_sides_[a]});
  for (int w = 0; w < primitive_count(); ++w)
    spec.primitives.push_back({prim_ids_[w], agent_ids_[participants_[w].first],
                               agent_ids_[participants_[w].second], wings_[w]});
  for (int a = 0; a < agent_count(); ++a)
    for (Mask psi : canonical_submasks(agent_prim_mask_[a])) {
      const Rat& v = value(a, psi);
      if (psi != 0 && v == 0) continue; // default fill
      if (psi == 0 && v == 0) continue;
      spec.valuations.push_back({agent_ids_[a], ids_of(psi), rat_str(v)});
    }
  return spec;
}

std::optional<Rat> utility(const TuMarket& m, int a, const TuOutcome& y) {
  Mask tau = 0;
  Rat payments(0);
  for (const auto& pc : y) {
    if (!subset_of(bit(pc.primitive), m.agent_primitives(a)))
      throw input_error("priced contract does not involve the agent");
    if ((tau & bit(pc.primitive)) != 0) return std::nullopt; // signed twice
    tau |= bit(pc.primitive);
    payments += m.upstream(pc.primitive) == a ? pc.transfer : -pc.transfer;
  }
  return m.value(a, tau) - payments;
}

std::vector<Mask> demand(const TuMarket& m, int a,
                         const std::vector<Rat>& prices) {
  Mask omega = m.agent_primitives(a);
  std::vector<Mask> best;
  Rat best_val;
  bool first = true;
  for (Mask psi : canonical_submasks(omega)) {
    Rat val = m.value(a, psi);
    for (int w : mask_indices(psi)) val -= prices[w];
    if (first || val > best_val) {
      best_val = val;
      best.clear();
      best.push_back(psi);
      first = false;
    } else if (val == best_val) {
      best.push_back(psi);
    }
  }
  std::sort(best.begin(), best.end(), canonical_less);
  return best;
}

std::optional<int> equilibrium_violator(const TuMarket& m, Mask phi,
                                        const PriceVector& p) {
  for (int a = 0; a < m.agent_count(); ++a) {
    auto prices = m.agent_components(a, p);
    auto d = demand(m, a, prices);
    Mask phi_a = phi & m.agent_primitives(a);
    if (std::find(d.begin(), d.end(), phi_a) == d.end()) return a;
  }
  return std::nullopt;
}

TuOutcome kappa(Mask phi, const PriceVector& p) {
  TuOutcome out;
  for (int w : mask_indices(phi)) out.push_back({w, p[w]});
  return out;
}

std::optional<SupermodularityWitness> check_supermodular(const TuMarket& m,
                                                         int a) {
  Mask omega = m.agent_primitives(a);
  for (Mask phi : canonical_submasks(omega)) {
    for (int wp : mask_indices(omega & ~phi)) {
      Rat low = m.value(a, phi | bit(wp)) - m.value(a, phi);
      for (Mask psi : canonical_submasks(omega & ~bit(wp))) {
        if (psi == phi || !subset_of(phi, psi)) continue;
        Rat high = m.value(a, psi | bit(wp)) - m.value(a, psi);
        if (low > high) return SupermodularityWitness{phi, psi, wp};
      }
    }
  }
  return std::nullopt;
}

FullComplementarityReport check_full_complementarity(const TuMarket& m) {
  FullComplementarityReport report;
  std::optional<TuMarket> transformed;
  for (int a = 0; a < m.agent_count(); ++a) {
    FullComplementarityReport::Entry e;
    e.agent = a;
    if (m.agent_side(a) == Side::Center) {
      if (!transformed) transformed = transform_market(m);
      e.transformed = true;
      e.witness = check_supermodular(*transformed, a);
    } else {
      e.witness = check_supermodular(m, a);
    }
    report.entries.push_back(std::move(e));
  }
  return report;
}

GrossComplementsViolation falsify_gross_complements(const TuMarket& m, int a) {
  auto witness = check_supermodular(m, a);
  if (!witness)
    throw input_error("valuation of " + m.agent_id(a) +
                      " is supermodular; nothing to falsify");
  Mask omega = m.agent_primitives(a);
  Mask phi = witness->phi, psi = witness->psi;
  int wp = witness->wprime;

  Rat h(0);
  for (Mask s : canonical_submasks(omega)) h += abs(m.value(a, s));
  h += 1;

  Rat low = m.value(a, psi | bit(wp)) - m.value(a, psi);
  Rat high = m.value(a, phi | bit(wp)) - m.value(a, phi);
  Rat mid = (low + high) / 2;

  GrossComplementsViolation out;
  out.p.assign(m.primitive_count(), Rat(0));
  out.q.assign(m.primitive_count(), Rat(0));
  out.wprime = wp;
  for (int w : mask_indices(omega)) {
    Rat pw = subset_of(bit(w), phi) ? -h : h;
    if (w == wp) pw = mid;
    out.p[w] = pw;
    Rat qw = pw;
    if (subset_of(bit(w), psi & ~phi)) qw = -h;
    out.q[w] = qw;
  }

  auto dp = demand(m, a, out.p);
  auto dq = demand(m, a, out.q);
  if (dp.size() != 1 || dp[0] != (phi | bit(wp)) || dq.size() != 1 ||
      dq[0] != psi)
    throw std::logic_error("falsifier construction failed verification");
  out.demand_p = dp[0];
  out.demand_q = dq[0];
  return out;
}

namespace {

// splitmix64: deterministic across platforms.
struct Rng {
  std::uint64_t state;
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }
};

Rat probe_bound(const TuMarket& m, int a) {
  Rat h(0);
  for (Mask s : canonical_submasks(m.agent_primitives(a)))
    h += abs(m.value(a, s));
  return h + 1;
}

Rat draw_rat(Rng& rng, const mpz_class& bound_num, unsigned den) {
  mpz_class range = bound_num * den * 2 + 1;
  mpz_class r = mpz_class(rng.next()) % range;
  mpz_class num = r - bound_num * den;
  Rat out(num, den);
  out.canonicalize();
  return out;
}

bool lattice_ok(const TuMarket& m, int a, const std::vector<Rat>& p,
                const std::vector<Rat>& q) {
  auto dp = demand(m, a, p);
  auto dq = demand(m, a, q);
  for (Mask f : dp)
    for (Mask s : dq) {
      if (std::find(dp.begin(), dp.end(), f & s) == dp.end()) return false;
      if (std::find(dq.begin(), dq.end(), f | s) == dq.end()) return false;
    }
  return true;
}

} // namespace

std::optional<ProbeViolation> sampled_condition_probe(const TuMarket& m, int a,
                                                      ProbeKind kind,
                                                      int trials,
                                                      std::uint64_t seed) {
  Mask omega = m.agent_primitives(a);
  if (omega == 0) return std::nullopt;
  Rng rng{seed * 0x9e3779b97f4a7c15ULL + 0x5bf03635ULL};
  Rat bound = probe_bound(m, a);
  mpz_class bn = bound.get_num() / bound.get_den() + 1;
  Mask omega_l = omega & m.wing_mask(Wing::Left);
  Mask omega_r = omega & m.wing_mask(Wing::Right);

  for (int t = 0; t < trials; ++t) {
    unsigned den = 1 + static_cast<unsigned>(rng.below(4));
    std::vector<Rat> q(m.primitive_count(), Rat(0));
    std::vector<Rat> p(m.primitive_count(), Rat(0));
    for (int w : mask_indices(omega)) q[w] = draw_rat(rng, bn, den);

    if (kind == ProbeKind::CentralTwoSided) {
      // Alternate between the two displayed conditions: raise prices on one
      // side, hold the other fixed.
      Mask raised = (t % 2 == 0) ? omega_r : omega_l;
      for (int w : mask_indices(omega)) {
        p[w] = q[w];
        if (subset_of(bit(w), raised) && rng.below(2) == 0) {
          mpz_class d = mpz_class(rng.below(2 * den + 1));
          Rat delta(d, den);
          delta.canonicalize();
          p[w] += delta;
        }
      }
      auto dp = demand(m, a, p);
      auto dq = demand(m, a, q);
      if (dp.size() != 1 || dq.size() != 1) continue;
      Mask phi = dp[0], psi = dq[0];
      Mask same = raised, other = omega & ~raised;
      // On the raised side, still-equally-priced demanded items must stay
      // demanded at the lower prices; the other side's demand shrinks as
      // its opposite side gets cheaper.
      Mask kept = 0;
      for (int w : mask_indices(phi & same))
        if (p[w] == q[w]) kept |= bit(w);
      if (!subset_of(kept, psi & same))
        return ProbeViolation{p, q, "same-side monotonicity failed"};
      if (!subset_of(psi & other, phi & other))
        return ProbeViolation{p, q, "cross-side substitutability failed"};
      continue;
    }

    for (int w : mask_indices(omega)) {
      p[w] = q[w];
      if (rng.below(2) == 0) {
        mpz_class d = mpz_class(rng.below(2 * den + 1));
        Rat delta(d, den);
        delta.canonicalize();
        p[w] += delta;
      }
    }
    if (kind == ProbeKind::Antitone) {
      if (!lattice_ok(m, a, p, q))
        return ProbeViolation{p, q, "demand lattice property failed"};
    } else { // GrossComplements
      auto dp = demand(m, a, p);
      auto dq = demand(m, a, q);
      if (dp.size() != 1 || dq.size() != 1) continue;
      Mask kept = 0;
      for (int w : mask_indices(dp[0]))
        if (p[w] == q[w]) kept |= bit(w);
      if (!subset_of(kept, dq[0]))
        return ProbeViolation{p, q, "gross complements failed"};
    }
  }
  return std::nullopt;
}

TuMarket transform_market(const TuMarket& m) {
  TuMarket out = m;
  for (int a = 0; a < m.agent_count(); ++a) {
    Mask omega = m.agent_prim_mask_[a];
    if (m.agent_side(a) == Side::Left) continue;
    for (Mask psi : canonical_submasks(omega)) {
      Mask src;
      if (m.agent_side(a) == Side::Center) {
        Mask omega_r = omega & m.right_mask_;
        src = (psi & m.left_mask_) | (omega_r & ~psi);
      } else {
        src = omega & ~psi;
      }
      out.values_[a][out.local_index(a, psi)] =
          m.values_[a][m.local_index(a, src)];
    }
  }
  return out;
}

PriceVector g_operator(const TuMarket& m, const PriceVector& p) {
  if (static_cast<int>(p.size()) != m.primitive_count())
    throw input_error("price vector has wrong size");
  PriceVector out = p;
  for (int w : mask_indices(m.wing_mask(Wing::Right))) out[w] = -out[w];
  return out;
}

MappedEquilibrium map_equilibrium(const TuMarket& original, Mask psi,
                                  const PriceVector& p) {
  TuMarket transformed = transform_market(original);
  if (!is_equilibrium(transformed, psi, p))
    throw input_error(
        "the given pair is not an equilibrium of the transformed market");
  MappedEquilibrium out;
  Mask omega_r = original.wing_mask(Wing::Right);
  out.allocation = (psi & original.wing_mask(Wing::Left)) | (omega_r & ~psi);
  out.prices = g_operator(original, p);
  if (!is_equilibrium(original, out.allocation, out.prices))
    throw std::logic_error("mapped equilibrium failed re-verification");
  return out;
}

DemandRelationReport demand_relation_check(const TuMarket& m, int a,
                                           const std::vector<Rat>& prices) {
  if (m.agent_side(a) == Side::Left)
    throw input_error("demand_relation_check applies to central and "
                      "right-side agents");
  TuMarket transformed = transform_market(m);
  Mask omega = m.agent_primitives(a);
  Mask omega_r = omega & m.wing_mask(Wing::Right);

  std::vector<Rat> gp = prices;
  for (int w : mask_indices(omega_r)) gp[w] = -gp[w];

  auto d_orig = demand(m, a, prices);
  auto d_flip = demand(transformed, a, gp);

  DemandRelationReport rep;
  for (Mask psi : canonical_submasks(omega)) {
    ++rep.checked;
    Mask image = m.agent_side(a) == Side::Center
                     ? ((psi & m.wing_mask(Wing::Left)) | (omega_r & ~psi))
                     : (omega & ~psi);
    bool in_flip =
        std::find(d_flip.begin(), d_flip.end(), psi) != d_flip.end();
    bool in_orig =
        std::find(d_orig.begin(), d_orig.end(), image) != d_orig.end();
    if (in_flip != in_orig) {
      rep.ok = false;
      rep.counterexample = psi;
      return rep;
    }
  }
  return rep;
}

std::string format_allocation(const TuMarket& m, Mask phi) {
  std::string out = "{";
  bool first = true;
  for (const auto& id : m.ids_of(phi)) {
    if (!first) out += ",";
    first = false;
    out += id;
  }
  return out + "}";
}

std::string format_prices(const TuMarket& m, const PriceVector& p) {
  std::string out;
  for (int w = 0; w < m.primitive_count(); ++w) {
    if (w) out += " ";
    out += m.primitive_id(w) + "=" + rat_str(p[w]);
  }
  return out;
}

} // namespace matchkit
