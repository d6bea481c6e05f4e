// Acceptance gate: one pass/fail line per criterion, exit 0 only when all
// pass. Each criterion is self-contained and deterministic.
#include <chrono>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "matchkit/da.hpp"
#include "matchkit/gen.hpp"
#include "matchkit/market_io.hpp"
#include "matchkit/ntu_conditions.hpp"
#include "matchkit/ntu_stability.hpp"
#include "matchkit/pickside.hpp"
#include "matchkit/tu_solver.hpp"

using namespace matchkit;

namespace {

std::string fx(const std::string& name) {
  return std::string(MATCHKIT_FIXTURES) + "/" + name;
}

NtuMarket load_ntu(const std::string& name) {
  return NtuMarket::build(load_market_file(fx(name)).ntu);
}

int failures = 0;

struct Criterion {
  int id;
  std::string what;
  std::chrono::steady_clock::time_point t0;
  std::ostringstream why;
  bool ok = true;

  Criterion(int id_, std::string what_)
      : id(id_), what(std::move(what_)), t0(std::chrono::steady_clock::now()) {}

  void require(bool cond, const std::string& detail) {
    if (!cond && ok) {
      ok = false;
      why << detail;
    }
  }

  void finish(double limit_s = 0) {
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    if (limit_s > 0 && secs > limit_s) {
      if (ok) why << "exceeded time limit";
      ok = false;
    }
    std::printf("criterion %2d [%s]: %s (%.2fs)%s%s\n", id, what.c_str(),
                ok ? "pass" : "FAIL", secs, ok ? "" : " — ",
                ok ? "" : why.str().c_str());
    if (!ok) ++failures;
  }
};

struct CliRun {
  int exit_code = -1;
  std::string output;
};

CliRun run_cli(const std::string& args) {
  CliRun r;
  std::string cmd = std::string(MATCHKIT_CLI) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.output.append(buf, n);
  int st = pclose(p);
  r.exit_code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kExpectedTrace =
    "stage=1 phase=L step=1 avail={x,y,z} rejected={}\n"
    "stage=1 phase=R step=1 avail={u,v,w,x,y,z} rejected={u,z}\n"
    "stage=1 phase=R step=2 avail={v,w,x,y,z} rejected={z}\n"
    "stage=2 phase=L step=1 avail={x,y} rejected={y}\n"
    "stage=2 phase=L step=2 avail={x} rejected={x}\n"
    "stage=2 phase=R step=1 avail={u,v,w} rejected={}\n"
    "output={u,v,w} terminated=right@2\n";

void criterion1() {
  Criterion c(1, "six-contract trace regression");
  NtuMarket m = load_ntu("example1.market");
  AlgorithmTrace t = run_da(m);
  c.require(format_trace(m, t) == kExpectedTrace, "trace text mismatch");
  c.require(t.outcome == m.mask_of({"u", "v", "w"}), "output mismatch");
  c.finish(1.0);
}

void criterion2() {
  Criterion c(2, "side-swap regression");
  NtuMarket m = load_ntu("example1.market");
  DaConfig cfg;
  cfg.start_side = Wing::Right;
  c.require(run_da(m, cfg).outcome == m.mask_of({"u", "v", "w"}),
            "right-start output mismatch");

  OrgMarket om = OrgMarket::build(load_market_file(fx("example2.market")).org);
  OrgDaResult r = run_org_da(om, "o2");
  c.require(format_matching(om, r.matching) ==
                "o1={}\no2={i1,i2,i3,i4}\nunmatched={i5}\n",
            "second-proposer matching mismatch: " +
                format_matching(om, r.matching));
  c.finish();
}

void criterion3() {
  Criterion c(3, "fixture stability verdicts");
  NtuMarket m2 = load_ntu("market2.market");
  c.require(enumerate_stable(m2, StabilityMode::Stable) ==
                std::vector<Mask>{m2.mask_of({"z"})},
            "three-contract market: stable set mismatch");
  c.require(enumerate_stable(m2, StabilityMode::Setwise).empty(),
            "three-contract market: setwise set should be empty");

  NtuMarket m3 = load_ntu("market3.market");
  Mask x = m3.mask_of({"x"});
  auto b = find_block(m3, x);
  c.require(b.has_value() && b->blocker == m3.mask_of({"y", "z"}),
            "triangle market: expected blocker {y,z}");
  c.require(is_setwise_stable(m3, x).stable,
            "triangle market: {x} should be setwise stable");
  c.finish();
}

void criterion4() {
  Criterion c(4, "three-organization nonexistence");
  OrgMarket om = OrgMarket::build(load_market_file(fx("market6.market")).org);
  NtuMarket cm = to_contract_market(om);
  c.require(enumerate_stable(cm, StabilityMode::Stable).empty(),
            "expected an empty stable set");
  c.finish(1.0);
}

// Subset-level replay of the per-stage maximality properties.
bool stage_maximality(const NtuMarket& m, const AlgorithmTrace& t,
                      Wing primary) {
  Side outer_primary = primary == Wing::Left ? Side::Left : Side::Right;
  Mask secondary_all =
      m.wing_mask(primary == Wing::Left ? Wing::Right : Wing::Left);
  for (const auto& st : t.stages) {
    // (i) every fixed point inside the phase input survives the phase
    for (Mask y : canonical_submasks(st.a_init)) {
      bool fixed = true;
      for (int a = 0; a < m.agent_count() && fixed; ++a) {
        Side s = m.agent_side(a);
        if (s != outer_primary && s != Side::Center) continue;
        if (m.choose(a, y) != m.restrict(y, a)) fixed = false;
      }
      if (fixed && !subset_of(y, st.a_final)) return false;
    }
    if (!st.has_secondary) continue;
    // (ii) every secondary-wing set jointly chosen alongside the primary
    // survivors is contained in the phase output
    for (Mask y : canonical_submasks(secondary_all)) {
      bool chosen = true;
      for (int a = 0; a < m.agent_count() && chosen; ++a) {
        Side s = m.agent_side(a);
        if (s == outer_primary) continue;
        if (!subset_of(m.restrict(y, a), m.choose(a, st.a_final | y)))
          chosen = false;
      }
      if (chosen && !subset_of(y, st.d_final)) return false;
    }
  }
  return true;
}

void criterion5() {
  Criterion c(5, "algorithm-output stability property suite");
  int count = 0;
  for (std::uint64_t seed = 1; count < 500 && c.ok; ++seed) {
    GenProfile p;
    p.family = GenFamily::ComplementaryNtu;
    p.seed = seed;
    p.left_agents = 1 + static_cast<int>(seed % 2);
    p.central_agents = 1 + static_cast<int>((seed / 2) % 2);
    p.right_agents = 1 + static_cast<int>((seed / 4) % 2);
    p.contracts = 4 + static_cast<int>(seed % 3);
    NtuMarket m = NtuMarket::build(generate_ntu(p));
    ++count;
    std::string tag = " (seed " + std::to_string(seed) + ")";
    if (!validate_market(m, ValidationProfile::Full).ok()) {
      c.require(false, "generated market fails validation" + tag);
      break;
    }
    for (Wing w : {Wing::Left, Wing::Right}) {
      DaConfig cfg;
      cfg.start_side = w;
      AlgorithmTrace t = run_da(m, cfg);
      if (!is_stable(m, t.outcome).stable) {
        c.require(false, "algorithm output is unstable" + tag);
        break;
      }
      // chain invariants
      for (std::size_t k = 0; k < t.stages.size(); ++k) {
        if (!subset_of(t.stages[k].a_final, t.stages[k].a_init))
          c.require(false, "A-chain fails to shrink" + tag);
        if (k > 0 && !subset_of(t.stages[k].a_init, t.stages[k - 1].a_final))
          c.require(false, "A-chain fails to shrink across stages" + tag);
        if (k > 0 && t.stages[k].has_secondary &&
            t.stages[k - 1].has_secondary &&
            !subset_of(t.stages[k - 1].d_final, t.stages[k].d_final))
          c.require(false, "D-chain fails to expand" + tag);
      }
      if (!stage_maximality(m, t, w))
        c.require(false, "stage maximality fails" + tag);
      cfg.variant = DaVariant::Modified;
      if (run_da(m, cfg).outcome != t.outcome)
        c.require(false, "modified variant output differs" + tag);
    }
  }
  c.require(count >= 500, "not enough markets generated");
  c.finish(60.0);
}

void criterion6() {
  Criterion c(6, "stable = setwise-stable under pick-one-side");
  int count = 0;
  for (std::uint64_t seed = 1; count < 200 && c.ok; ++seed) {
    GenProfile p;
    p.family = GenFamily::PickOneSideNtu;
    p.seed = seed;
    p.left_agents = 1 + static_cast<int>(seed % 2);
    p.central_agents = 1 + static_cast<int>((seed / 2) % 2);
    p.right_agents = 1 + static_cast<int>((seed / 4) % 2);
    p.contracts = 4 + static_cast<int>(seed % 3);
    NtuMarket m = NtuMarket::build(generate_ntu(p));
    ++count;
    auto rep = check_prop1(m);
    if (!rep.equal)
      c.require(false, "sets differ at seed " + std::to_string(seed));
  }
  c.require(count >= 200, "not enough markets generated");
  c.finish(60.0);
}

void criterion7() {
  Criterion c(7, "supermodularity/demand-monotonicity coherence");
  std::mt19937_64 rng(20240817);
  int count = 0;
  while (count < 200 && c.ok) {
    int nprims = 2 + static_cast<int>(rng() % 3); // up to 4
    TuMarketSpec s;
    s.agents = {{"l", Side::Left}, {"c", Side::Center}};
    for (int i = 0; i < nprims; ++i)
      s.primitives.push_back(
          {"w" + std::to_string(i), "l", "c", Wing::Left});
    // random rational valuation for the left agent over every subset
    for (Mask sub = 1; sub < (Mask(1) << nprims); ++sub) {
      std::vector<std::string> bundle;
      for (int b : mask_indices(sub)) bundle.push_back("w" + std::to_string(b));
      long num = static_cast<long>(rng() % 17) - 8;
      long den = 1 + static_cast<long>(rng() % 3);
      s.valuations.push_back(
          {"l", bundle, std::to_string(num) + "/" + std::to_string(den)});
    }
    TuMarket m = TuMarket::build(s);
    int l = m.agent_index("l");
    ++count;
    std::string tag = " (valuation " + std::to_string(count) + ")";
    if (!check_supermodular(m, l)) {
      if (sampled_condition_probe(m, l, ProbeKind::Antitone, 500, count))
        c.require(false, "antitone probe falsified a supermodular v" + tag);
      if (sampled_condition_probe(m, l, ProbeKind::GrossComplements, 500,
                                  count + 1))
        c.require(false, "complements probe falsified a supermodular v" + tag);
    } else {
      try {
        auto v = falsify_gross_complements(m, l);
        bool verified =
            demand(m, l, v.p) == std::vector<Mask>{v.demand_p} &&
            demand(m, l, v.q) == std::vector<Mask>{v.demand_q} &&
            v.demand_p != v.demand_q && v.p[v.wprime] == v.q[v.wprime];
        for (int w = 0; w < m.primitive_count() && verified; ++w)
          if (v.p[w] < v.q[w]) verified = false;
        if (!verified) c.require(false, "falsifier not verified" + tag);
      } catch (const std::exception& e) {
        c.require(false, std::string("falsifier threw: ") + e.what() + tag);
      }
    }
  }
  c.require(count >= 200, "not enough valuations");
  c.finish(60.0);
}

void criterion8() {
  Criterion c(8, "equilibrium existence and stability for complementary TU");
  int count = 0;
  for (std::uint64_t seed = 1; count < 200 && c.ok; ++seed) {
    GenProfile p;
    p.family = GenFamily::FullyComplementaryTu;
    p.seed = seed;
    p.left_agents = 1 + static_cast<int>(seed % 2);
    p.central_agents = 1;
    p.right_agents = 1 + static_cast<int>((seed / 2) % 2);
    p.contracts = 3 + static_cast<int>(seed % 3); // up to 5
    TuMarket m = TuMarket::build(generate_tu(p));
    ++count;
    std::string tag = " (seed " + std::to_string(seed) + ")";
    if (!check_full_complementarity(m).ok()) {
      c.require(false, "generated market fails full complementarity" + tag);
      break;
    }
    for (SolveRoute route :
         {SolveRoute::Direct, SolveRoute::ViaTransformation}) {
      auto r = solve_equilibrium(m, route);
      if (!r.found) {
        c.require(false, "no equilibrium found" + tag);
        break;
      }
      if (!is_equilibrium(m, r.allocation, r.prices)) {
        c.require(false, "certificate fails re-verification" + tag);
        break;
      }
      auto verdict = is_tu_stable(m, kappa(r.allocation, r.prices));
      if (!verdict.stable) {
        c.require(false, "equilibrium outcome is blocked" + tag);
        break;
      }
    }
    // explicit transformation round trip
    TuMarket tm = transform_market(m);
    auto tr = solve_equilibrium(tm, SolveRoute::Direct);
    if (tr.found) {
      try {
        auto mapped = map_equilibrium(m, tr.allocation, tr.prices);
        if (!is_equilibrium(m, mapped.allocation, mapped.prices))
          c.require(false, "mapped equilibrium fails re-verification" + tag);
      } catch (const std::exception& e) {
        c.require(false, std::string("map_equilibrium threw: ") + e.what() +
                             tag);
      }
    } else {
      c.require(false, "transformed market has no equilibrium" + tag);
    }
  }
  c.require(count >= 200, "not enough markets generated");
  c.finish(120.0);
}

void criterion9() {
  Criterion c(9, "demand flip bijection probes");
  std::mt19937_64 rng(424242);
  int probes = 0;
  for (std::uint64_t seed = 1; probes < 200 && c.ok; ++seed) {
    GenProfile p;
    p.family = GenFamily::UnconstrainedTu;
    p.seed = seed;
    p.contracts = 4;
    TuMarket m = TuMarket::build(generate_tu(p));
    for (int a = 0; a < m.agent_count() && probes < 200; ++a) {
      if (m.agent_side(a) == Side::Left) continue;
      if (m.agent_primitives(a) == 0) continue;
      for (int rep = 0; rep < 3 && probes < 200; ++rep) {
        std::vector<Rat> prices(m.primitive_count(), Rat(0));
        for (int w = 0; w < m.primitive_count(); ++w) {
          prices[w] = Rat(static_cast<long>(rng() % 21) - 10,
                          1 + static_cast<long>(rng() % 3));
          prices[w].canonicalize();
        }
        auto repot = demand_relation_check(m, a, prices);
        ++probes;
        if (!repot.ok)
          c.require(false, "bijection fails at probe " +
                               std::to_string(probes) + " (seed " +
                               std::to_string(seed) + ")");
      }
    }
  }
  c.require(probes >= 200, "not enough probes");
  c.finish(30.0);
}

void criterion10() {
  Criterion c(10, "byte-identical determinism");
  std::vector<std::string> invocations = {
      "solve " + fx("example1.market"),
      "solve " + fx("example1.market") + " --start-side right",
      "enumerate " + fx("market2.market") + " --setwise",
      "validate " + fx("market2.market") + " --profile pick-one-side",
      "check " + fx("market2.market") + " --outcome z --setwise",
      "solve-tu " + fx("tu_single.market"),
      "pickside " + fx("example2.market") + " --first-org o2",
  };
  for (const auto& inv : invocations) {
    CliRun a = run_cli(inv);
    CliRun b = run_cli(inv);
    if (a.exit_code != b.exit_code || a.output != b.output) {
      c.require(false, "nondeterministic invocation: " + inv);
      break;
    }
    if (a.exit_code == -1 || a.exit_code == 2) {
      c.require(false, "invocation failed (" + std::to_string(a.exit_code) +
                           "): " + inv + "\n" + a.output);
      break;
    }
  }
  // generator file output
  std::string out1 = "/tmp/acc_gen_1.market", out2 = "/tmp/acc_gen_2.market";
  CliRun g1 = run_cli("gen --seed 9 --family complementary-ntu --out " + out1);
  CliRun g2 = run_cli("gen --seed 9 --family complementary-ntu --out " + out2);
  c.require(g1.exit_code == 0 && g2.exit_code == 0,
            "gen invocation failed:\n" + g1.output + g2.output);
  c.require(!read_file(out1).empty() && read_file(out1) == read_file(out2),
            "generated files differ between runs");

  // expected CLI content spot checks
  CliRun solve = run_cli("solve " + fx("example1.market"));
  c.require(solve.output.find("output={u,v,w}") != std::string::npos,
            "solve output missing the outcome line:\n" + solve.output);
  CliRun check = run_cli("check " + fx("market2.market") +
                         " --outcome z --setwise");
  c.require(check.exit_code == 1 &&
                check.output.find("{x,y}") != std::string::npos,
            "setwise check should fail with the {x,y} certificate:\n" +
                check.output);
  c.finish();
}

} // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  if (failures) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all 10 criteria passed\n");
  return 0;
}
