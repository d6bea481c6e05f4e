// Compares the serial and OpenMP enumeration kernels on the workloads that
// actually use them: block search, stable-set enumeration, and welfare
// maximization over generated markets.
#include <chrono>
#include <cstdio>

#include "matchkit/gen.hpp"
#include "matchkit/ntu_stability.hpp"
#include "matchkit/parallel.hpp"
#include "matchkit/tu_solver.hpp"

using namespace matchkit;

namespace {

template <class F>
double ms(F&& f, int reps) {
  auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) f();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

} // namespace

int main() {
  GenProfile ntu;
  ntu.family = GenFamily::ComplementaryNtu;
  ntu.contracts = 12;
  ntu.left_agents = ntu.central_agents = ntu.right_agents = 2;
  ntu.seed = 7;
  NtuMarket m = NtuMarket::build(generate_ntu(ntu));

  std::vector<Mask> serial_out, parallel_out;
  double t_enum_s = ms(
      [&] { serial_out = enumerate_stable_serial(m, StabilityMode::Stable); },
      3);
  double t_enum_p = ms(
      [&] { parallel_out = enumerate_stable(m, StabilityMode::Stable); }, 3);
  std::printf("stable-set enumeration (%d contracts): serial %.2f ms, "
              "parallel %.2f ms, agree=%s (%zu outcomes)\n",
              m.contract_count(), t_enum_s, t_enum_p,
              serial_out == parallel_out ? "yes" : "NO", serial_out.size());

  std::optional<BlockCertificate> bs, bp;
  double t_blk_s = ms([&] { bs = find_block_serial(m, 0); }, 5);
  double t_blk_p = ms([&] { bp = find_block(m, 0); }, 5);
  std::printf("block search from the empty outcome: serial %.2f ms, parallel "
              "%.2f ms, agree=%s\n",
              t_blk_s, t_blk_p,
              (bs.has_value() == bp.has_value() &&
               (!bs || bs->blocker == bp->blocker))
                  ? "yes"
                  : "NO");

  GenProfile tu;
  tu.family = GenFamily::FullyComplementaryTu;
  tu.contracts = 10;
  tu.left_agents = tu.central_agents = tu.right_agents = 2;
  tu.seed = 11;
  TuMarket tm = TuMarket::build(generate_tu(tu));
  Mask ws = 0, wp = 0;
  double t_w_s = ms([&] { ws = maximize_welfare_serial(tm); }, 5);
  double t_w_p = ms([&] { wp = maximize_welfare(tm); }, 5);
  std::printf("welfare maximization (%d primitives): serial %.2f ms, parallel "
              "%.2f ms, agree=%s\n",
              tm.primitive_count(), t_w_s, t_w_p, ws == wp ? "yes" : "NO");
  return 0;
}
