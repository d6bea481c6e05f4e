#pragma once

#include <optional>
#include <string>
#include <vector>

#include "matchkit/tu_market.hpp"

namespace matchkit {

// coeff . x + constant >= 0, or > 0 when strict.
struct LinConstraint {
  std::vector<Rat> coeff;
  Rat constant;
  bool strict = false;
};

struct LpResult {
  bool feasible = false;
  std::vector<Rat> point;
};

// Exact Fourier-Motzkin elimination. When feasible, a concrete point is
// produced by back-substitution with the slack-center rule: midpoint of a
// two-sided interval, bound +/- 1 for a one-sided strict bound, the bound
// itself for a one-sided weak bound, 0 when unconstrained.
LpResult lp_solve(int nvars, const std::vector<LinConstraint>& constraints);

Rat welfare_of(const TuMarket& m, Mask phi);

// Welfare-maximizing allocation by exhaustive enumeration; ties broken by
// canonical order.
Mask maximize_welfare(const TuMarket& m);
Mask maximize_welfare_serial(const TuMarket& m);

// The full argmax family in canonical order (never empty).
std::vector<Mask> welfare_maximizers(const TuMarket& m);

// Prices supporting phi as a competitive equilibrium allocation, or nullopt
// when the support system is infeasible.
std::optional<PriceVector> support_prices(const TuMarket& m, Mask phi);

// Prices making (tau(y), p) an equilibrium while agreeing with y's own
// transfers on the signed primitives, or nullopt. Stable outcomes need not
// admit such an extension.
std::optional<PriceVector> extend_outcome_prices(const TuMarket& m,
                                                 const TuOutcome& y);

enum class SolveRoute { Direct, ViaTransformation };

struct TuSolveResult {
  bool found = false;
  Mask allocation = 0;
  PriceVector prices;
  Rat welfare;
  // Set when full complementarity holds yet no equilibrium was produced;
  // that combination indicates a solver defect, not a market property.
  std::string defect;
};

TuSolveResult solve_equilibrium(const TuMarket& m, SolveRoute route);

struct TuBlockCertificate {
  Mask primitives = 0;   // the newly signed primitive contracts
  TuOutcome contracts;   // with concrete transfers
};

// Blocking search over renegotiated priced contracts: every participant of
// the block strictly gains, keeping any subset of her old contracts that do
// not clash with the re-signed primitives. Transfer feasibility is decided
// exactly by lp_solve.
std::optional<TuBlockCertificate> find_tu_block(const TuMarket& m,
                                                const TuOutcome& y);

struct TuStabilityVerdict {
  bool stable = false;
  std::optional<int> ir_violator;
  std::optional<TuBlockCertificate> block;
};

TuStabilityVerdict is_tu_stable(const TuMarket& m, const TuOutcome& y);

std::string format_tu_outcome(const TuMarket& m, const TuOutcome& y);

} // namespace matchkit
