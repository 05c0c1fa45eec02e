#include "vsim/lanes.hpp"

#include <algorithm>

#include "vsim/exec.hpp"
#include "vsim/interconnect.hpp"

namespace vsim {

namespace {

uint32_t ceil_div(uint32_t a, uint32_t b) { return (a + b - 1) / b; }

bool is_fp_reduction(Opcode op) { return op == Opcode::VFREDSUM; }
bool is_reduction(Opcode op) {
  return op == Opcode::VREDSUM || op == Opcode::VREDMIN ||
         op == Opcode::VFREDSUM;
}

}  // namespace

FuInfo fu_for(Opcode op, const FuLatencies& fu) {
  switch (op) {
    case Opcode::VADD:
    case Opcode::VSUB:
    case Opcode::VMIN:
    case Opcode::VMAX:
    case Opcode::VMSLT:
    case Opcode::VMSLE:
    case Opcode::VMSEQ:
    case Opcode::VMAND:
    case Opcode::VMOR:
    case Opcode::VMXOR:
    case Opcode::VREDSUM:
    case Opcode::VREDMIN:
      return {fu.int_alu, true};
    case Opcode::VMUL:
      return {fu.int_mul, true};
    case Opcode::VFADD:
    case Opcode::VFSUB:
    case Opcode::VFREDSUM:
      return {fu.fp_add, true};
    case Opcode::VFMUL:
      return {fu.fp_mul, true};
    case Opcode::VFMACC:
      return {fu.fp_fma, true};
    case Opcode::VFDIV:
      return {fu.fp_div, false};
    case Opcode::VFSQRT:
      return {fu.fp_sqrt, false};
    case Opcode::VMV_VV:
    case Opcode::VMV_SX:
    case Opcode::VFMV_VF:
      return {fu.move_op, true};
    case Opcode::VSLIDE1UP:
    case Opcode::VSLIDE1DOWN:
    case Opcode::VSLIDEUP:
    case Opcode::VSLIDEDOWN:
    case Opcode::VRGATHER:
      return {fu.slide, true};
    default:
      return {1, true};
  }
}

LaneTiming lane_timing(const Instruction& inst, uint32_t vl,
                       const EngineConfig& cfg, uint32_t net_added) {
  LaneTiming t;
  uint32_t sources = vector_source_count(inst);
  t.operand_read = sources == 0 ? 0 : ceil_div(sources, cfg.vrf_read_ports);
  t.elem_cycles = ceil_div(vl, cfg.lanes);

  if (inst.op == Opcode::VMV_XS) {
    t.total = t.operand_read + 3;
    return t;
  }
  if (inst.op == Opcode::VFIRST || inst.op == Opcode::VPOPC) {
    t.combine_cycles =
        reduction_cycles(cfg.lanes, cfg.interconnect, /*fp=*/false);
    t.total = t.operand_read + t.elem_cycles + t.combine_cycles + 2;
    return t;
  }

  FuInfo fu = fu_for(inst.op, cfg.fu);
  t.fu_latency = fu.latency;
  t.pipelined = fu.pipelined;
  t.writes_lines = writes_vreg(inst);
  if (is_reduction(inst.op)) {
    t.combine_cycles = reduction_cycles(cfg.lanes, cfg.interconnect,
                                        is_fp_reduction(inst.op));
    t.writes_lines = false;  // single-element result
  } else {
    t.net_cycles = net_added;
  }

  if (fu.pipelined)
    t.total = t.operand_read + t.fu_latency + t.elem_cycles + 1 +
              t.net_cycles + t.combine_cycles;
  else
    t.total = t.operand_read + t.fu_latency * std::max(t.elem_cycles, 1u) + 2;

  if (cfg.shared_rw_port && sources > 0 && writes_vreg(inst)) t.total += 1;
  return t;
}

void emit_lane_events(EventLog& log, const LaneTiming& t,
                      const Instruction& inst, uint32_t vl,
                      const EngineConfig& cfg, uint64_t base_tick,
                      uint64_t seq) {
  if (!log.enabled) return;
  uint64_t cr = cfg.clock_ratio;
  log.emit(base_tick, EvUnit::Lanes, EvKind::FuStart, seq,
           static_cast<uint64_t>(inst.op));
  if (inst.op == Opcode::VMV_XS || inst.op == Opcode::VFIRST ||
      inst.op == Opcode::VPOPC) {
    for (uint32_t s = 1; s <= t.combine_cycles; ++s)
      log.emit(base_tick + (t.total - 2 - t.combine_cycles + s) * cr,
               EvUnit::Net, EvKind::CombineStep, seq, s);
    return;
  }
  uint32_t e = t.elem_cycles;
  uint32_t stride = t.pipelined ? 1 : t.fu_latency;
  for (uint32_t j = 0; j < e; ++j) {
    uint64_t land = t.operand_read + t.fu_latency + 1 +
                    static_cast<uint64_t>(j) * stride;
    uint32_t count = std::min(cfg.lanes, vl - j * cfg.lanes);
    log.emit(base_tick + land * cr, EvUnit::Lanes, EvKind::FuElem, seq, j,
             count);
  }
  if (t.combine_cycles) {
    uint64_t partials = t.operand_read + t.fu_latency + e;
    for (uint32_t s = 1; s <= t.combine_cycles; ++s)
      log.emit(base_tick + (partials + s) * cr, EvUnit::Net,
               EvKind::CombineStep, seq, s);
  }
  if (t.writes_lines && e > 0) {
    uint32_t rows = ceil_div(e, cfg.elems_per_line());
    for (uint32_t r = 0; r < rows; ++r) {
      uint32_t last_slot = std::min(e, (r + 1) * cfg.elems_per_line()) - 1;
      uint64_t land = t.operand_read + t.fu_latency + 1 +
                      static_cast<uint64_t>(last_slot) * stride;
      uint64_t wb = land + 1;
      if (r + 1 == rows) wb = t.total;  // final flush closes the instruction
      log.emit(base_tick + wb * cr, EvUnit::Lanes, EvKind::WbLine, seq, r);
    }
  }
}

}  // namespace vsim
