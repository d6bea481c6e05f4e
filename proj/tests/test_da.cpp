#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "matchkit/da.hpp"
#include "matchkit/market_io.hpp"

using namespace matchkit;

namespace {

std::string fx(const std::string& name) {
  return std::string(MATCHKIT_FIXTURES) + "/" + name;
}

NtuMarket load(const std::string& name) {
  return NtuMarket::build(load_market_file(fx(name)).ntu);
}

} // namespace

TEST_CASE("six-contract regression: exact trace, left start") {
  NtuMarket m = load("example1.market");
  AlgorithmTrace t = run_da(m);
  CHECK(t.outcome == m.mask_of({"u", "v", "w"}));
  CHECK(format_trace(m, t) ==
        "stage=1 phase=L step=1 avail={x,y,z} rejected={}\n"
        "stage=1 phase=R step=1 avail={u,v,w,x,y,z} rejected={u,z}\n"
        "stage=1 phase=R step=2 avail={v,w,x,y,z} rejected={z}\n"
        "stage=2 phase=L step=1 avail={x,y} rejected={y}\n"
        "stage=2 phase=L step=2 avail={x} rejected={x}\n"
        "stage=2 phase=R step=1 avail={u,v,w} rejected={}\n"
        "output={u,v,w} terminated=right@2\n");

  REQUIRE(t.stages.size() == 2);
  CHECK(t.stages[0].a_init == m.mask_of({"x", "y", "z"}));
  CHECK(t.stages[0].a_final == m.mask_of({"x", "y", "z"}));
  CHECK(t.stages[0].d_final == m.mask_of({"v", "w"}));
  CHECK(t.stages[0].a_next_init == m.mask_of({"x", "y"}));
  CHECK(t.stages[1].a_final == 0);
  CHECK(t.stages[1].d_final == m.mask_of({"u", "v", "w"}));
}

TEST_CASE("primary phase unit behavior") {
  NtuMarket m = load("example1.market");
  auto r1 = primary_phase(m, Wing::Left, m.mask_of({"x", "y", "z"}), 1);
  CHECK(r1.final_set == m.mask_of({"x", "y", "z"}));
  CHECK(r1.steps.size() == 1);
  CHECK(r1.steps[0].rejected == 0);

  auto r2 = primary_phase(m, Wing::Left, m.mask_of({"x", "y"}), 2);
  CHECK(r2.final_set == 0);
  REQUIRE(r2.steps.size() == 2);
  CHECK(r2.steps[0].rejected == m.mask_of({"y"}));
  CHECK(r2.steps[1].rejected == m.mask_of({"x"}));

  auto r3 = primary_phase(m, Wing::Left, 0, 3);
  CHECK(r3.final_set == 0);
  CHECK(r3.steps.size() == 1);
}

TEST_CASE("secondary phase unit behavior") {
  NtuMarket m = load("example1.market");
  auto s1 = secondary_phase(m, Wing::Left, m.mask_of({"x", "y", "z"}), 1);
  CHECK(s1.d_final == m.mask_of({"v", "w"}));
  CHECK(s1.a_next_init == m.mask_of({"x", "y"}));
  CHECK(s1.primary_rejection);
  REQUIRE(s1.steps.size() == 2);
  CHECK(s1.steps[0].rejected == m.mask_of({"u", "z"}));

  auto s2 = secondary_phase(m, Wing::Left, 0, 2);
  CHECK(s2.d_final == m.mask_of({"u", "v", "w"}));
  CHECK_FALSE(s2.primary_rejection);
}

TEST_CASE("starting from the right side does not change the output") {
  NtuMarket m = load("example1.market");
  DaConfig cfg;
  cfg.start_side = Wing::Right;
  AlgorithmTrace t = run_da(m, cfg);
  CHECK(t.outcome == m.mask_of({"u", "v", "w"}));
}

TEST_CASE("the modified variant agrees on the bundled market") {
  NtuMarket m = load("example1.market");
  DaConfig cfg;
  cfg.variant = DaVariant::Modified;
  AlgorithmTrace t = run_da(m, cfg);
  CHECK(format_trace(m, t) == format_trace(m, run_da(m)));
}

TEST_CASE("stage-set chains shrink and expand monotonically") {
  NtuMarket m = load("example1.market");
  for (Wing w : {Wing::Left, Wing::Right}) {
    DaConfig cfg;
    cfg.start_side = w;
    AlgorithmTrace t = run_da(m, cfg);
    for (std::size_t k = 0; k < t.stages.size(); ++k) {
      CHECK(subset_of(t.stages[k].a_final, t.stages[k].a_init));
      if (t.stages[k].has_secondary)
        CHECK(subset_of(t.stages[k].a_next_init, t.stages[k].a_final));
      if (k > 0) {
        CHECK(subset_of(t.stages[k].a_init, t.stages[k - 1].a_init));
        if (t.stages[k].has_secondary && t.stages[k - 1].has_secondary)
          CHECK(subset_of(t.stages[k - 1].d_final, t.stages[k].d_final));
      }
    }
    CHECK(m.is_individually_rational(t.outcome));
  }
}

TEST_CASE("untiered markets are rejected") {
  NtuMarket m3 = load("market3.market");
  CHECK_THROWS_AS(run_da(m3), input_error);
}
