#pragma once

#include <cstdint>
#include <vector>

#include "vsim/config.hpp"
#include "vsim/events.hpp"
#include "vsim/inst.hpp"

namespace vsim {

// One element routed through the inter-lane network: destination element
// slot <- source element slot (both are element indices, not lanes).
struct NetMove {
  uint32_t dst;
  uint32_t src;
};

inline uint32_t owner_lane(uint32_t elem, uint32_t lanes) {
  return elem % lanes;
}

// Shorter-way hop count on the ring (crossbar is always 1 hop).
uint32_t ring_hops(uint32_t src_lane, uint32_t dst_lane, uint32_t lanes);

// Vector cycles the network adds beyond perfectly overlapped element
// production. Element p is produced by lane p%L at local cycle p/L; a move
// injects from its source lane (1/lane/cycle), traverses one directed link
// per cycle (ring) or one switch hop (crossbar), and lands on the
// destination lane (1/lane/cycle). Same-lane moves are free. When `log` is
// given, emits one net_hop event per cross-lane move at its arrival tick.
uint32_t permutation_cycles(const std::vector<NetMove>& moves, uint32_t lanes,
                            Topology topo, uint32_t vl, EventLog* log = nullptr,
                            uint64_t base_tick = 0, uint32_t clock_ratio = 1,
                            uint64_t seq = 0);

// Cross-lane combine steps for a reduction (0 when lanes == 1). Floating
// point combines sequentially in lane order on both topologies to preserve
// the architectural operation order; integer reductions tree-combine on the
// crossbar.
uint32_t reduction_cycles(uint32_t lanes, Topology topo, bool fp);

// Network patterns for the element-manipulation ops. `offset` is the slide
// amount (1 for the scalar-insert slides); gather takes the index register
// contents.
std::vector<NetMove> slide_pattern(Opcode op, uint32_t vl, uint64_t offset);
std::vector<NetMove> gather_pattern(const uint64_t* index, uint32_t vl,
                                    uint32_t mvl);

// Added network cycles for a whole instruction (0 for non-manipulation ops).
uint32_t manipulation_net_cycles(const Instruction& inst, uint32_t vl,
                                 uint64_t slide_offset, const uint64_t* index,
                                 uint32_t mvl, uint32_t lanes, Topology topo,
                                 EventLog* log = nullptr,
                                 uint64_t base_tick = 0,
                                 uint32_t clock_ratio = 1, uint64_t seq = 0);

}  // namespace vsim
