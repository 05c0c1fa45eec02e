#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracle_cycles.hpp"
#include "vsim/interconnect.hpp"
#include "vsim/lanes.hpp"

using namespace vsim;

namespace {

Instruction vop(Opcode op, bool masked = false, bool scalar = false) {
  Instruction i;
  i.op = op;
  i.masked = masked;
  i.scalar_operand = scalar;
  return i;
}

EngineConfig cfg_with(uint32_t lanes, uint32_t read_ports = 1) {
  EngineConfig c;
  c.lanes = lanes;
  c.vrf_read_ports = read_ports;
  return c;
}

}  // namespace

TEST_CASE("pinned walkthrough: 32 elements on an int alu with latency 4") {
  // two operand-read cycles, four in the unit, one result group per lane
  // per cycle, one final line flush
  EngineConfig c = cfg_with(4, 1);
  c.fu.int_alu = 4;
  LaneTiming t = lane_timing(vop(Opcode::VADD), 32, c, 0);
  CHECK(t.operand_read == 2);
  CHECK(t.fu_latency == 4);
  CHECK(t.elem_cycles == 8);
  CHECK(t.total == 2 + 4 + 8 + 1);  // 15

  EngineConfig c1 = cfg_with(1, 1);
  c1.fu.int_alu = 4;
  LaneTiming t1 = lane_timing(vop(Opcode::VADD), 32, c1, 0);
  CHECK(t1.total == 2 + 4 + 32 + 1);  // 39
}

TEST_CASE("completion grid matches the hand oracle for unmasked arith") {
  struct Pick {
    Opcode op;
    uint32_t sources;
    uint32_t latency(const FuLatencies& f) const {
      if (op == Opcode::VMV_VV) return f.move_op;
      if (op == Opcode::VFADD) return f.fp_add;
      return f.fp_fma;
    }
  };
  const Pick picks[] = {{Opcode::VMV_VV, 1},
                        {Opcode::VFADD, 2},
                        {Opcode::VFMACC, 3}};
  for (const Pick& p : picks) {
    for (uint32_t lanes : {1u, 2u, 4u, 8u}) {
      for (uint32_t ports : {1u, 2u, 3u}) {
        EngineConfig c = cfg_with(lanes, ports);
        for (uint32_t vl = 1; vl <= 256; vl = vl < 8 ? vl + 1 : vl * 2) {
          LaneTiming t = lane_timing(vop(p.op), vl, c, 0);
          uint64_t want = oracle::arith_completion_cycles(
              vl, lanes, p.sources, ports, p.latency(c.fu), true);
          CAPTURE(int(p.op));
          CAPTURE(lanes);
          CAPTURE(ports);
          CAPTURE(vl);
          CHECK(t.total == want);
        }
      }
    }
  }
}

TEST_CASE("div and sqrt admit one element per latency interval") {
  EngineConfig c = cfg_with(4, 1);
  for (uint32_t vl : {1u, 4u, 16u, 64u, 256u}) {
    LaneTiming td = lane_timing(vop(Opcode::VFDIV), vl, c, 0);
    CHECK_FALSE(td.pipelined);
    CHECK(td.total == oracle::arith_completion_cycles(vl, 4, 2, 1,
                                                      c.fu.fp_div, false));
    LaneTiming ts = lane_timing(vop(Opcode::VFSQRT), vl, c, 0);
    CHECK(ts.total == oracle::arith_completion_cycles(vl, 4, 1, 1,
                                                      c.fu.fp_sqrt, false));
  }
  // both formulas agree when each lane sees one element
  LaneTiming one = lane_timing(vop(Opcode::VFDIV), 4, c, 0);
  CHECK(one.total == 2 + c.fu.fp_div + 2);
}

TEST_CASE("masking adds the v0 read and the merge read") {
  EngineConfig c = cfg_with(4, 1);
  LaneTiming plain = lane_timing(vop(Opcode::VFADD), 32, c, 0);
  LaneTiming masked = lane_timing(vop(Opcode::VFADD, /*masked=*/true), 32, c,
                                  0);
  CHECK(masked.operand_read == plain.operand_read + 2);
  CHECK(masked.total == plain.total + 2);

  // the fma accumulator already reads the destination, so masking it only
  // adds the v0 read
  LaneTiming fma = lane_timing(vop(Opcode::VFMACC), 32, c, 0);
  LaneTiming fmam = lane_timing(vop(Opcode::VFMACC, true), 32, c, 0);
  CHECK(fmam.operand_read == fma.operand_read + 1);

  // wider register file ports soak the extra reads back up
  EngineConfig c4 = cfg_with(4, 4);
  LaneTiming wide = lane_timing(vop(Opcode::VFADD, true), 32, c4, 0);
  CHECK(wide.operand_read == 1);
}

TEST_CASE("scalar-operand forms read one fewer vector source") {
  EngineConfig c = cfg_with(4, 1);
  LaneTiming vv = lane_timing(vop(Opcode::VFADD), 32, c, 0);
  LaneTiming vf = lane_timing(vop(Opcode::VFADD, false, /*scalar=*/true), 32,
                              c, 0);
  CHECK(vf.operand_read + 1 == vv.operand_read);
  CHECK(vf.total + 1 == vv.total);
}

TEST_CASE("a shared read/write port costs one cycle on read+write ops") {
  EngineConfig shared = cfg_with(4, 1);
  shared.shared_rw_port = true;
  EngineConfig split = cfg_with(4, 1);

  LaneTiming a = lane_timing(vop(Opcode::VFADD), 32, shared, 0);
  LaneTiming b = lane_timing(vop(Opcode::VFADD), 32, split, 0);
  CHECK(a.total == b.total + 1);

  // pure producers (no vector source) don't pay it
  LaneTiming mv0 = lane_timing(vop(Opcode::VMV_SX), 32, shared, 0);
  LaneTiming mv1 = lane_timing(vop(Opcode::VMV_SX), 32, split, 0);
  CHECK(mv0.total == mv1.total);
}

TEST_CASE("reductions pay cross-lane combine steps and skip line writes") {
  for (uint32_t lanes : {1u, 2u, 4u, 8u}) {
    EngineConfig c = cfg_with(lanes, 1);
    LaneTiming ti = lane_timing(vop(Opcode::VREDSUM), 64, c, 0);
    uint64_t base = oracle::arith_completion_cycles(64, lanes, 2, 1,
                                                    c.fu.int_alu, true);
    CHECK(ti.total == base + reduction_cycles(lanes, c.interconnect, false));
    CHECK_FALSE(ti.writes_lines);

    LaneTiming tf = lane_timing(vop(Opcode::VFREDSUM), 64, c, 0);
    uint64_t fbase = oracle::arith_completion_cycles(64, lanes, 2, 1,
                                                     c.fu.fp_add, true);
    CHECK(tf.total == fbase + reduction_cycles(lanes, c.interconnect, true));
  }
  // fp combine is strictly linear even on the crossbar
  EngineConfig cx = cfg_with(8, 1);
  cx.interconnect = Topology::Crossbar;
  LaneTiming tfx = lane_timing(vop(Opcode::VFREDSUM), 64, cx, 0);
  LaneTiming tix = lane_timing(vop(Opcode::VREDSUM), 64, cx, 0);
  uint32_t fp_extra = tfx.total - oracle::arith_completion_cycles(
                                      64, 8, 2, 1, cx.fu.fp_add, true);
  uint32_t int_extra = tix.total - oracle::arith_completion_cycles(
                                       64, 8, 2, 1, cx.fu.int_alu, true);
  CHECK(fp_extra == 7);
  CHECK(int_extra == 3);
}

TEST_CASE("mask summaries and scalar extracts have fixed pipelines") {
  for (uint32_t lanes : {1u, 2u, 4u, 8u}) {
    EngineConfig c = cfg_with(lanes, 1);
    uint32_t e = (64 + lanes - 1) / lanes;
    uint32_t comb = reduction_cycles(lanes, c.interconnect, false);
    CHECK(lane_timing(vop(Opcode::VFIRST), 64, c, 0).total == 1 + e + comb + 2);
    CHECK(lane_timing(vop(Opcode::VPOPC), 64, c, 0).total == 1 + e + comb + 2);
    CHECK(lane_timing(vop(Opcode::VMV_XS), 64, c, 0).total == 1 + 3);
  }
}

TEST_CASE("network latency lands on top of element production") {
  EngineConfig c = cfg_with(4, 1);
  LaneTiming base = lane_timing(vop(Opcode::VSLIDE1UP), 32, c, 0);
  LaneTiming plus = lane_timing(vop(Opcode::VSLIDE1UP), 32, c, 1);
  CHECK(plus.total == base.total + 1);
  CHECK(plus.net_cycles == 1);
}

TEST_CASE("lane events: element groups cover vl and the last line closes it") {
  EngineConfig c = cfg_with(4, 1);
  c.clock_ratio = 2;
  Instruction i = vop(Opcode::VFADD);
  uint32_t vl = 37;  // deliberately not a multiple of lanes or line elems
  LaneTiming t = lane_timing(i, vl, c, 0);
  EventLog log;
  log.enabled = true;
  emit_lane_events(log, t, i, vl, c, /*base_tick=*/1000, /*seq=*/7);

  uint64_t covered = 0;
  uint64_t elem_events = 0;
  uint64_t wb_events = 0;
  uint64_t last_wb = 0;
  uint64_t fu_start = 0;
  for (const EventRec& r : log.records()) {
    CHECK(r.seq == 7);
    if (r.kind == EvKind::FuElem) {
      ++elem_events;
      covered += r.b;
    } else if (r.kind == EvKind::WbLine) {
      ++wb_events;
      last_wb = std::max(last_wb, r.tick);
    } else if (r.kind == EvKind::FuStart) {
      ++fu_start;
      CHECK(r.tick == 1000);
    }
  }
  CHECK(fu_start == 1);
  CHECK(elem_events == t.elem_cycles);
  CHECK(covered == vl);
  CHECK(wb_events == (t.elem_cycles + c.elems_per_line() - 1) /
                         c.elems_per_line());
  CHECK(last_wb == 1000 + uint64_t(t.total) * c.clock_ratio);
}

TEST_CASE("lane events: reductions emit combine steps, no line writes") {
  EngineConfig c = cfg_with(8, 1);
  Instruction i = vop(Opcode::VFREDSUM);
  LaneTiming t = lane_timing(i, 64, c, 0);
  EventLog log;
  log.enabled = true;
  emit_lane_events(log, t, i, 64, c, 0, 3);
  uint64_t combines = 0, wb = 0;
  for (const EventRec& r : log.records()) {
    if (r.kind == EvKind::CombineStep) ++combines;
    if (r.kind == EvKind::WbLine) ++wb;
  }
  CHECK(combines == t.combine_cycles);
  CHECK(combines == 7);
  CHECK(wb == 0);
}

TEST_CASE("unit mapping sanity") {
  FuLatencies f;
  CHECK(fu_for(Opcode::VADD, f).latency == f.int_alu);
  CHECK(fu_for(Opcode::VMUL, f).latency == f.int_mul);
  CHECK(fu_for(Opcode::VFADD, f).latency == f.fp_add);
  CHECK(fu_for(Opcode::VFMUL, f).latency == f.fp_mul);
  CHECK(fu_for(Opcode::VFMACC, f).latency == f.fp_fma);
  CHECK(fu_for(Opcode::VFDIV, f).pipelined == false);
  CHECK(fu_for(Opcode::VFSQRT, f).pipelined == false);
  CHECK(fu_for(Opcode::VRGATHER, f).latency == f.slide);
  CHECK(fu_for(Opcode::VMSLT, f).latency == f.int_alu);
  CHECK(fu_for(Opcode::VFMV_VF, f).latency == f.move_op);
}
