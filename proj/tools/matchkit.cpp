#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "matchkit/da.hpp"
#include "matchkit/gen.hpp"
#include "matchkit/market_io.hpp"
#include "matchkit/ntu_conditions.hpp"
#include "matchkit/ntu_stability.hpp"
#include "matchkit/pickside.hpp"
#include "matchkit/tu_solver.hpp"

namespace {

using namespace matchkit;

constexpr int kOk = 0;
constexpr int kFails = 1;   // condition fails / unstable / not found
constexpr int kBadInput = 2;

NtuMarket load_ntu(const std::string& path, bool allow_untiered) {
  ParsedMarket pm = load_market_file(path);
  if (pm.kind != MarketFileKind::Ntu)
    throw input_error(path + " is not a contract (ntu) market file");
  if (!pm.ntu.tiered && !allow_untiered)
    throw input_error(path + " is untiered; pass --untiered to bypass the "
                             "tier validator");
  return NtuMarket::build(pm.ntu);
}

TuMarket load_tu(const std::string& path) {
  ParsedMarket pm = load_market_file(path);
  if (pm.kind != MarketFileKind::Tu)
    throw input_error(path + " is not a tu market file");
  return TuMarket::build(pm.tu);
}

OrgMarket load_org(const std::string& path) {
  ParsedMarket pm = load_market_file(path);
  if (pm.kind != MarketFileKind::Org)
    throw input_error(path + " is not an org market file");
  return OrgMarket::build(pm.org);
}

std::vector<std::string> split_ids(const std::string& csv) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : csv) {
    if (ch == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

PriceVector load_prices(const TuMarket& m, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open " + path);
  PriceVector p(m.primitive_count(), Rat(0));
  std::vector<bool> seen(m.primitive_count(), false);
  std::string id, val;
  while (in >> id >> val) {
    int w = m.primitive_index(id);
    if (seen[w]) throw input_error("duplicate price for " + id);
    seen[w] = true;
    p[w] = parse_rat(val);
  }
  for (int w = 0; w < m.primitive_count(); ++w)
    if (!seen[w])
      throw input_error("missing price for " + m.primitive_id(w));
  return p;
}

TuOutcome load_outcome(const TuMarket& m, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open " + path);
  TuOutcome out;
  std::string id, val;
  while (in >> id >> val)
    out.push_back({m.primitive_index(id), parse_rat(val)});
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw input_error("cannot write " + path);
  out << text;
}

int cmd_validate(const std::string& file, const std::string& profile) {
  ParsedMarket pm = load_market_file(file);
  if (profile == "tu-full" || pm.kind == MarketFileKind::Tu) {
    if (pm.kind != MarketFileKind::Tu)
      throw input_error("profile tu-full needs a tu market file");
    TuMarket m = TuMarket::build(pm.tu);
    auto report = check_full_complementarity(m);
    for (const auto& e : report.entries) {
      if (!e.witness) continue;
      std::cout << "agent " << m.agent_id(e.agent)
                << (e.transformed ? " (transformed valuation)" : "")
                << " fails supermodularity at phi="
                << format_allocation(m, e.witness->phi)
                << " psi=" << format_allocation(m, e.witness->psi)
                << " w'=" << m.primitive_id(e.witness->wprime) << "\n";
    }
    std::cout << (report.ok() ? "ok" : "violations=" +
                                           std::to_string([&] {
                                             int n = 0;
                                             for (const auto& e :
                                                  report.entries)
                                               if (e.witness) ++n;
                                             return n;
                                           }()))
              << "\n";
    return report.ok() ? kOk : kFails;
  }
  if (pm.kind != MarketFileKind::Ntu)
    throw input_error("validate needs an ntu or tu market file");
  NtuMarket m = NtuMarket::build(pm.ntu);
  ValidationProfile vp = profile == "pick-one-side"
                             ? ValidationProfile::PickOneSide
                             : ValidationProfile::Full;
  auto report = validate_market(m, vp);
  for (const auto& v : report.violations)
    std::cout << format_violation(m, v) << "\n";
  std::cout << (report.ok()
                    ? "ok"
                    : "violations=" + std::to_string(report.violations.size()))
            << "\n";
  return report.ok() ? kOk : kFails;
}

int cmd_solve(const std::string& file, const std::string& start_side,
              const std::string& variant, const std::string& trace_out) {
  NtuMarket m = load_ntu(file, false);
  auto report = validate_market(m, ValidationProfile::Full);
  if (!report.ok())
    std::cerr << "warning: market fails the preference conditions ("
              << report.violations.size()
              << " violations); the output may be unstable\n";
  DaConfig cfg;
  cfg.start_side = start_side == "right" ? Wing::Right : Wing::Left;
  cfg.variant =
      variant == "modified" ? DaVariant::Modified : DaVariant::Original;
  AlgorithmTrace trace = run_da(m, cfg);
  if (!trace_out.empty()) write_text(trace_out, format_trace(m, trace));
  std::cout << "output=" << format_bundle(m, trace.outcome) << "\n"
            << "terminated="
            << (trace.terminated_phase == Wing::Left ? "left" : "right") << "@"
            << trace.terminated_stage << "\n";
  return kOk;
}

int cmd_check(const std::string& file, const std::string& outcome_csv,
              bool setwise, bool untiered) {
  NtuMarket m = load_ntu(file, untiered);
  Mask y = m.mask_of(split_ids(outcome_csv));
  StabilityVerdict v = setwise ? is_setwise_stable(m, y) : is_stable(m, y);
  std::cout << format_stability_verdict(m, v, setwise) << "\n";
  return v.stable ? kOk : kFails;
}

int cmd_enumerate(const std::string& file, bool setwise, bool untiered) {
  NtuMarket m = load_ntu(file, untiered);
  auto all = enumerate_stable(
      m, setwise ? StabilityMode::Setwise : StabilityMode::Stable);
  for (Mask y : all) std::cout << format_bundle(m, y) << "\n";
  std::cout << "count=" << all.size() << "\n";
  return all.empty() ? kFails : kOk;
}

int cmd_pickside(const std::string& file, std::string first_org,
                 bool enumerate_flag, bool setwise) {
  OrgMarket om = load_org(file);
  if (enumerate_flag) {
    NtuMarket cm = to_contract_market(om);
    auto all = enumerate_stable(
        cm, setwise ? StabilityMode::Setwise : StabilityMode::Stable);
    for (Mask y : all)
      std::cout << format_matching(om, induced_matching(om, cm, y));
    std::cout << "count=" << all.size() << "\n";
    return all.empty() ? kFails : kOk;
  }
  if (first_org.empty()) first_org = om.org_id(0);
  OrgDaResult res = run_org_da(om, first_org);
  std::cout << format_matching(om, res.matching);
  return kOk;
}

int cmd_solve_tu(const std::string& file, const std::string& route) {
  TuMarket m = load_tu(file);
  TuSolveResult res = solve_equilibrium(m, route == "transform"
                                               ? SolveRoute::ViaTransformation
                                               : SolveRoute::Direct);
  if (!res.found) {
    std::cout << "no-equilibrium\n";
    if (!res.defect.empty()) std::cerr << res.defect << "\n";
    return kFails;
  }
  std::cout << "allocation=" << format_allocation(m, res.allocation) << "\n"
            << "prices " << format_prices(m, res.prices) << "\n"
            << "welfare=" << rat_str(res.welfare) << "\n";
  return kOk;
}

int cmd_check_tu(const std::string& file, const std::string& allocation_csv,
                 const std::string& prices_file) {
  TuMarket m = load_tu(file);
  Mask phi = m.mask_of(split_ids(allocation_csv));
  PriceVector p = load_prices(m, prices_file);
  auto violator = equilibrium_violator(m, phi, p);
  if (violator) {
    std::cout << "equilibrium=false violator=" << m.agent_id(*violator)
              << "\n";
    return kFails;
  }
  std::cout << "equilibrium=true\n";
  return kOk;
}

int cmd_block_tu(const std::string& file, const std::string& outcome_file) {
  TuMarket m = load_tu(file);
  TuOutcome y = load_outcome(m, outcome_file);
  TuStabilityVerdict v = is_tu_stable(m, y);
  if (v.stable) {
    std::cout << "stable=true\n";
    return kOk;
  }
  if (v.ir_violator)
    std::cout << "stable=false reason=not-individually-rational violator="
              << m.agent_id(*v.ir_violator) << "\n";
  else
    std::cout << "stable=false reason=blocked blocker="
              << format_tu_outcome(m, v.block->contracts) << "\n";
  return kFails;
}

int cmd_gen(std::uint64_t seed, const std::string& family,
            const std::string& out, int left, int central, int right,
            int contracts) {
  GenProfile profile;
  profile.family = parse_family(family);
  profile.seed = seed;
  profile.left_agents = left;
  profile.central_agents = central;
  profile.right_agents = right;
  profile.contracts = contracts;
  std::string text;
  if (profile.family == GenFamily::FullyComplementaryTu ||
      profile.family == GenFamily::UnconstrainedTu)
    text = emit_market(generate_tu(profile));
  else
    text = emit_market(generate_ntu(profile));
  write_text(out, text);
  return kOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"solver and verification toolkit for three-tier matching "
               "markets"};
  app.require_subcommand(1);

  std::string file, profile = "full", start_side = "left",
              variant = "original", trace_out, outcome_csv, first_org,
              route = "direct", allocation_csv, prices_file, outcome_file,
              family = "complementary-ntu", out = "-";
  bool setwise = false, untiered = false, enumerate_flag = false;
  std::uint64_t seed = 0;
  int left = 2, central = 2, right = 2, contracts = 6;

  auto* validate = app.add_subcommand("validate", "check preference/valuation "
                                                  "conditions");
  validate->add_option("file", file)->required();
  validate->add_option("--profile", profile)
      ->check(CLI::IsMember({"full", "pick-one-side", "tu-full"}));

  auto* solve = app.add_subcommand("solve", "run the alternate DA");
  solve->add_option("file", file)->required();
  solve->add_option("--start-side", start_side)
      ->check(CLI::IsMember({"left", "right"}));
  solve->add_option("--variant", variant)
      ->check(CLI::IsMember({"original", "modified"}));
  solve->add_option("--trace", trace_out);

  auto* check = app.add_subcommand("check", "stability of a given outcome");
  check->add_option("file", file)->required();
  check->add_option("--outcome", outcome_csv);
  check->add_flag("--setwise", setwise);
  check->add_flag("--untiered", untiered);

  auto* enumerate = app.add_subcommand("enumerate", "all stable outcomes");
  enumerate->add_option("file", file)->required();
  enumerate->add_flag("--setwise", setwise);
  enumerate->add_flag("--untiered", untiered);

  auto* pickside = app.add_subcommand("pickside", "organization matching");
  pickside->add_option("file", file)->required();
  pickside->add_option("--first-org", first_org);
  pickside->add_flag("--enumerate", enumerate_flag);
  pickside->add_flag("--setwise", setwise);

  auto* solve_tu = app.add_subcommand("solve-tu", "competitive equilibrium");
  solve_tu->add_option("file", file)->required();
  solve_tu->add_option("--route", route)
      ->check(CLI::IsMember({"direct", "transform"}));

  auto* check_tu = app.add_subcommand("check-tu", "verify an equilibrium");
  check_tu->add_option("file", file)->required();
  check_tu->add_option("--allocation", allocation_csv);
  check_tu->add_option("--prices", prices_file)->required();

  auto* block_tu = app.add_subcommand("block-tu", "tu outcome stability");
  block_tu->add_option("file", file)->required();
  block_tu->add_option("--outcome", outcome_file)->required();

  auto* gen = app.add_subcommand("gen", "deterministic market generator");
  gen->add_option("--seed", seed)->required();
  gen->add_option("--family", family)->required();
  gen->add_option("--out", out);
  gen->add_option("--left", left);
  gen->add_option("--central", central);
  gen->add_option("--right", right);
  gen->add_option("--contracts", contracts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) return cmd_validate(file, profile);
    if (*solve) return cmd_solve(file, start_side, variant, trace_out);
    if (*check) return cmd_check(file, outcome_csv, setwise, untiered);
    if (*enumerate) return cmd_enumerate(file, setwise, untiered);
    if (*pickside)
      return cmd_pickside(file, first_org, enumerate_flag, setwise);
    if (*solve_tu) return cmd_solve_tu(file, route);
    if (*check_tu) return cmd_check_tu(file, allocation_csv, prices_file);
    if (*block_tu) return cmd_block_tu(file, outcome_file);
    if (*gen)
      return cmd_gen(seed, family, out, left, central, right, contracts);
  } catch (const matchkit::input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  }
  return kBadInput;
}
