#pragma once

#include <cstdint>

#include "vsim/config.hpp"
#include "vsim/events.hpp"
#include "vsim/inst.hpp"

namespace vsim {

// (latency in vector cycles, pipelined?)
struct FuInfo {
  uint32_t latency;
  bool pipelined;
};
FuInfo fu_for(Opcode op, const FuLatencies& fu);

// Completion timing of one vector instruction on the lane array, in vector
// cycles from issue. Element production overlaps line write-back; the final
// line flush costs one cycle. Unpipelined units admit one element per
// fu_latency cycles. `net_added` is the interconnect's extra latency for
// element-manipulation patterns (0 otherwise).
//
//   pipelined:     R + F + E + 1 + net + combine (+1 shared port)
//   unpipelined:   R + F*E + 2               (+1 shared port)
//   vfirst/vpopc:  R + E + combine + 2
//   vmv.x.s:       R + 3
//
// R = ceil(sources / vrf_read_ports), E = ceil(vl / lanes), F = fu latency,
// combine = cross-lane reduction steps. With a shared read/write port the
// first line write conflicts with operand reads, costing one extra cycle on
// ops that both read and write vector registers.
struct LaneTiming {
  uint32_t total = 0;
  uint32_t operand_read = 0;
  uint32_t fu_latency = 0;
  uint32_t elem_cycles = 0;  // E
  uint32_t net_cycles = 0;
  uint32_t combine_cycles = 0;
  bool pipelined = true;
  bool writes_lines = false;
};

LaneTiming lane_timing(const Instruction& inst, uint32_t vl,
                       const EngineConfig& cfg, uint32_t net_added);

// fu_start / fu_elem / wb_line / combine_step events for the instruction,
// with ticks measured from base_tick (the issue tick).
void emit_lane_events(EventLog& log, const LaneTiming& t,
                      const Instruction& inst, uint32_t vl,
                      const EngineConfig& cfg, uint64_t base_tick,
                      uint64_t seq);

}  // namespace vsim
