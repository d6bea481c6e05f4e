#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "matchkit/market_io.hpp"
#include "matchkit/ntu_market.hpp"

using namespace matchkit;

namespace {

std::string fx(const std::string& name) {
  return std::string(MATCHKIT_FIXTURES) + "/" + name;
}

NtuMarket load(const std::string& name) {
  return NtuMarket::build(load_market_file(fx(name)).ntu);
}

} // namespace

TEST_CASE("restrict picks an agent's contracts") {
  NtuMarket m = load("example1.market");
  int im1 = m.agent_index("im1");
  Mask y = m.mask_of({"x", "y", "z", "u"});
  CHECK(m.restrict(y, im1) == m.mask_of({"x", "y", "u"}));
  CHECK(m.restrict(0, im1) == 0);
}

TEST_CASE("side_split partitions a bundle by wing") {
  NtuMarket m = load("example1.market");
  auto [l1, r1] = m.side_split(m.mask_of({"x", "y", "u"}));
  CHECK(l1 == m.mask_of({"x", "y"}));
  CHECK(r1 == m.mask_of({"u"}));
  auto [l2, r2] = m.side_split(0);
  CHECK(l2 == 0);
  CHECK(r2 == 0);
  auto [l3, r3] = m.side_split(m.mask_of({"u", "v", "w"}));
  CHECK(l3 == 0);
  CHECK(r3 == m.mask_of({"u", "v", "w"}));
  // partition invariant over every subset
  for (Mask y = 0; y <= m.full_mask(); ++y) {
    auto [l, r] = m.side_split(y);
    CHECK((l | r) == y);
    CHECK((l & r) == 0);
  }
}

TEST_CASE("choose returns the best listed bundle inside the availability") {
  NtuMarket m = load("example1.market");
  int im1 = m.agent_index("im1");
  CHECK(m.choose(im1, m.mask_of({"x", "y", "u"})) == m.mask_of({"x", "y"}));
  CHECK(m.choose(im1, m.mask_of({"y", "u"})) == m.mask_of({"u"}));
  CHECK(m.choose(im1, 0) == 0);
}

TEST_CASE("reject is the complement of choose within the restriction") {
  NtuMarket m = load("example1.market");
  Mask all = m.full_mask();
  CHECK(m.reject(m.agent_index("im1"), all) == m.mask_of({"u"}));
  CHECK(m.reject(m.agent_index("im2"), all) == m.mask_of({"z"}));
  CHECK(m.reject(m.agent_index("il1"), 0) == 0);
}

TEST_CASE("choose invariants hold on every availability") {
  NtuMarket m = load("example1.market");
  for (int a = 0; a < m.agent_count(); ++a) {
    for (Mask y = 0; y <= m.full_mask(); ++y) {
      Mask ch = m.choose(a, y);
      CHECK(subset_of(ch, m.restrict(y, a)));
      CHECK(m.choose(a, ch) == ch);
      CHECK((m.reject(a, y) | ch) == m.restrict(y, a));
      CHECK((m.reject(a, y) & ch) == 0);
      // choice is weakly best among subsets of the restriction
      for (Mask s : canonical_submasks(m.restrict(y, a)))
        if (s != ch) CHECK(m.prefers(a, ch, s));
    }
  }
}

TEST_CASE("individual rationality and its violator") {
  NtuMarket m = load("example1.market");
  CHECK(m.is_individually_rational(m.mask_of({"u", "v", "w"})));
  CHECK(m.is_individually_rational(0));

  NtuMarket m2 = load("market2.market");
  auto v = m2.individually_rational_violator(m2.mask_of({"x", "y", "z"}));
  REQUIRE(v.has_value());
  CHECK(m2.agent_id(*v) == "im");
  CHECK(m2.choose(*v, m2.mask_of({"x", "y", "z"})) == m2.mask_of({"x", "z"}));
}

TEST_CASE("completion order: listed, then empty, then canonical") {
  NtuMarket m = load("example1.market");
  int im1 = m.agent_index("im1");
  Mask xy = m.mask_of({"x", "y"});
  Mask u = m.mask_of({"u"});
  Mask y_only = m.mask_of({"y"});
  CHECK(m.prefers(im1, xy, u));
  CHECK(m.prefers(im1, u, 0));
  CHECK(m.prefers(im1, 0, y_only));        // unlisted below empty
  CHECK(m.prefers(im1, y_only, m.mask_of({"x", "u"}))); // canonical among unlisted
  CHECK_FALSE(m.prefers(im1, xy, xy));
  CHECK(m.list_rank(im1, xy) == 0);
  CHECK(m.list_rank(im1, u) == 1);
  CHECK(m.list_rank(im1, y_only) == -1);
}

TEST_CASE("build rejects malformed specs") {
  NtuMarketSpec s;
  s.agents = {{"a", Side::Left}, {"b", Side::Center}};
  s.contracts = {{"x", "a", "b", Wing::Left}};
  s.preferences = {{"a", {{"x"}}}, {"b", {{"x"}}}};
  CHECK_NOTHROW(NtuMarket::build(s));

  NtuMarketSpec dup = s;
  dup.agents.push_back({"a", Side::Left});
  CHECK_THROWS_AS(NtuMarket::build(dup), input_error);

  NtuMarketSpec two_left = s;
  two_left.agents[1].side = Side::Left;
  CHECK_THROWS_AS(NtuMarket::build(two_left), input_error);

  NtuMarketSpec foreign = s;
  foreign.preferences[0].ranking = {{"x"}, {"y"}};
  CHECK_THROWS_AS(NtuMarket::build(foreign), input_error);

  NtuMarketSpec not_hers = s;
  s.agents.push_back({"c", Side::Right});
  NtuMarketSpec dup_bundle = s;
  dup_bundle.preferences[0].ranking = {{"x"}, {"x"}};
  CHECK_THROWS_AS(NtuMarket::build(dup_bundle), input_error);
}

TEST_CASE("untiered markets refuse wing queries but allow choice") {
  NtuMarket m3 = load("market3.market");
  CHECK_FALSE(m3.tiered());
  CHECK(m3.contract_count() == 3);
  CHECK_THROWS_AS(m3.side_split(m3.full_mask()), input_error);
  int i1 = m3.agent_index("i1");
  CHECK(m3.choose(i1, m3.full_mask()) == m3.mask_of({"x", "y"}));
}

TEST_CASE("format_bundle sorts ids") {
  NtuMarket m = load("example1.market");
  CHECK(format_bundle(m, m.mask_of({"z", "x", "u"})) == "{u,x,z}");
  CHECK(format_bundle(m, 0) == "{}");
}
