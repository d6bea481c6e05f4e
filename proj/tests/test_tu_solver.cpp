#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "matchkit/market_io.hpp"
#include "matchkit/tu_solver.hpp"

using namespace matchkit;

namespace {

std::string fx(const std::string& name) {
  return std::string(MATCHKIT_FIXTURES) + "/" + name;
}

TuMarket load(const std::string& name) {
  return TuMarket::build(load_market_file(fx(name)).tu);
}

LinConstraint ge(std::vector<Rat> coeff, Rat constant, bool strict = false) {
  return {std::move(coeff), std::move(constant), strict};
}

} // namespace

TEST_CASE("exact feasibility with the slack-center rule") {
  // x >= 0 and x <= 1  ->  1/2
  auto r = lp_solve(1, {ge({Rat(1)}, Rat(0)), ge({Rat(-1)}, Rat(1))});
  REQUIRE(r.feasible);
  CHECK(r.point == std::vector<Rat>{Rat(1, 2)});

  // x > 0 and x < 0 -> infeasible
  CHECK_FALSE(
      lp_solve(1, {ge({Rat(1)}, Rat(0), true), ge({Rat(-1)}, Rat(0), true)})
          .feasible);

  // empty system -> origin
  auto o = lp_solve(2, {});
  REQUIRE(o.feasible);
  CHECK(o.point == std::vector<Rat>({Rat(0), Rat(0)}));

  // one-sided strict bound -> bound + 1
  auto s = lp_solve(1, {ge({Rat(1)}, Rat(-3), true)}); // x > 3
  REQUIRE(s.feasible);
  CHECK(s.point == std::vector<Rat>{Rat(4)});

  // two variables, coupled: x + y >= 2, x <= 0 -> x = 0, y centered or bound
  auto c = lp_solve(2, {ge({Rat(1), Rat(1)}, Rat(-2)), ge({Rat(-1), Rat(0)}, Rat(0))});
  REQUIRE(c.feasible);
  CHECK(c.point[0] + c.point[1] >= 2);
  CHECK(c.point[0] <= 0);
}

TEST_CASE("welfare maximization by exhaustive enumeration") {
  TuMarket m = load("tu_single.market");
  CHECK(welfare_of(m, m.full_mask()) == Rat(3));
  CHECK(welfare_of(m, 0) == Rat(0));
  CHECK(maximize_welfare(m) == m.full_mask());
  CHECK(maximize_welfare_serial(m) == m.full_mask());
  CHECK(welfare_maximizers(m) == std::vector<Mask>{m.full_mask()});

  TuMarketSpec s;
  s.agents = {{"l", Side::Left}, {"c", Side::Center}};
  s.primitives = {{"w", "l", "c", Wing::Left}};
  s.valuations = {{"l", {"w"}, "-2"}, {"c", {"w"}, "1"}};
  TuMarket neg = TuMarket::build(s);
  CHECK(maximize_welfare(neg) == 0);
  CHECK(welfare_of(neg, 0) == Rat(0));
}

TEST_CASE("support prices for a fixed allocation") {
  TuMarket m = load("tu_single.market");
  auto p = support_prices(m, m.full_mask());
  REQUIRE(p.has_value());
  CHECK(*p == PriceVector{Rat(1, 2)}); // interval [-1, 2] centered
  CHECK(is_equilibrium(m, m.full_mask(), *p));
  CHECK_FALSE(support_prices(m, 0).has_value());
}

TEST_CASE("equilibrium solving, both routes") {
  TuMarket m = load("tu_single.market");
  for (SolveRoute route : {SolveRoute::Direct, SolveRoute::ViaTransformation}) {
    auto r = solve_equilibrium(m, route);
    REQUIRE(r.found);
    CHECK(r.allocation == m.full_mask());
    CHECK(r.welfare == Rat(3));
    CHECK(is_equilibrium(m, r.allocation, r.prices));
    CHECK(r.defect.empty());
  }
  CHECK(solve_equilibrium(m, SolveRoute::Direct).prices ==
        PriceVector{Rat(1, 2)});
}

TEST_CASE("a market without competitive equilibrium reports not-found, no defect") {
  TuMarket m = load("tu_noneq.market");
  for (SolveRoute route : {SolveRoute::Direct, SolveRoute::ViaTransformation}) {
    auto r = solve_equilibrium(m, route);
    CHECK_FALSE(r.found);
    CHECK(r.defect.empty()); // full complementarity fails, so no contradiction
  }
  CHECK_FALSE(check_full_complementarity(m).ok());
}

TEST_CASE("blocking oracle on priced outcomes") {
  TuMarket m = load("tu_single.market");
  auto b = find_tu_block(m, {});
  REQUIRE(b.has_value());
  CHECK(b->primitives == m.full_mask());
  REQUIRE(b->contracts.size() == 1);
  CHECK(b->contracts[0].transfer == Rat(1, 2)); // open interval (-1,2) centered
  CHECK_FALSE(is_tu_stable(m, {}).stable);

  auto eq = solve_equilibrium(m, SolveRoute::Direct);
  REQUIRE(eq.found);
  auto y = kappa(eq.allocation, eq.prices);
  CHECK_FALSE(find_tu_block(m, y).has_value());
  CHECK(is_tu_stable(m, y).stable);
}

TEST_CASE("a higher-surplus primitive left unsigned is re-signed by a block") {
  TuMarketSpec s;
  s.agents = {{"l", Side::Left}, {"c", Side::Center}};
  s.primitives = {{"w1", "l", "c", Wing::Left}, {"w2", "l", "c", Wing::Left}};
  s.valuations = {{"l", {"w1"}, "2"}, {"l", {"w2"}, "4"},
                  {"l", {"w1", "w2"}, "6"},
                  {"c", {"w1"}, "1"}, {"c", {"w2"}, "2"},
                  {"c", {"w1", "w2"}, "3"}};
  TuMarket m = TuMarket::build(s);
  TuOutcome y = {{m.primitive_index("w1"), Rat(1, 2)}};
  auto b = find_tu_block(m, y);
  REQUIRE(b.has_value());
  CHECK(b->primitives == bit(m.primitive_index("w2")));
  CHECK_FALSE(is_tu_stable(m, y).stable);
}

TEST_CASE("individual rationality precedes block search") {
  TuMarket m = load("tu_single.market");
  TuOutcome bad = {{m.primitive_index("w"), Rat(10)}}; // l pays 10 for value 2
  auto v = is_tu_stable(m, bad);
  CHECK_FALSE(v.stable);
  REQUIRE(v.ir_violator.has_value());
  CHECK(m.agent_id(*v.ir_violator) == "l");
}

TEST_CASE("a stable outcome need not extend to a competitive equilibrium") {
  TuMarket m = load("tu_nonrev.market");
  // the empty outcome is stable...
  auto v = is_tu_stable(m, {});
  CHECK(v.stable);
  // ...but no prices make the empty allocation an equilibrium,
  CHECK_FALSE(extend_outcome_prices(m, {}).has_value());
  CHECK_FALSE(support_prices(m, 0).has_value());
  // and in fact this market has no competitive equilibrium at all.
  auto r = solve_equilibrium(m, SolveRoute::Direct);
  CHECK_FALSE(r.found);
  CHECK(r.defect.empty());
  // sanity: the welfare optimum is the full pair, which is also unsupported
  CHECK(maximize_welfare(m) == m.full_mask());
}

TEST_CASE("extend_outcome_prices honors the outcome's own transfers") {
  TuMarket m = load("tu_single.market");
  TuOutcome y = {{m.primitive_index("w"), Rat(2)}}; // boundary transfer
  CHECK(is_tu_stable(m, y).stable);
  auto p = extend_outcome_prices(m, y);
  REQUIRE(p.has_value());
  CHECK((*p)[0] == Rat(2));
  CHECK(is_equilibrium(m, m.full_mask(), *p));
}

TEST_CASE("outcome formatting") {
  TuMarket m = load("tu_single.market");
  CHECK(format_tu_outcome(m, {{0, Rat(1, 2)}}) == "{w:1/2}");
  CHECK(format_tu_outcome(m, {}) == "{}");
}
