#pragma once
// Shared functional semantics of the vector ISA: one implementation of the
// per-element datapath and of address generation, used by both the reference
// model and the timed engine so results are bit-identical by construction.

#include "vsim/inst.hpp"

#include <cstdint>
#include <vector>

namespace vsim {

inline constexpr uint64_t kHaltSentinel = ~uint64_t(0);

// One element's memory access, in element order. Masked-off elements
// generate no access.
struct ElemAccess {
  uint32_t elem;
  uint64_t addr;
};

// Addresses of a vector memory instruction. stride is in elements
// (scaled by the 8-byte SEW); indexed offsets are raw bytes added to base.
std::vector<ElemAccess> gen_addresses(MemMode mode, uint32_t vl, uint64_t base,
                                      int64_t stride_elems,
                                      const uint64_t* index,
                                      const uint64_t* mask);

// Executes the datapath of any non-memory vector instruction.
//   scalar_bits  .vx/.vf operand, slide fill/offset, or vmv.s.x source
//   s1, s2       source registers (null when the opcode doesn't use them)
//   mask         v0 contents when inst.masked (LSB per element), else null
//   old_dst      previous destination contents (merge source), else null
//   dst          destination (mvl words); null for scalar-result opcodes
// Returns the scalar result for vfirst.m/vpopc.m/vmv.x.s, else 0.
// Tail elements [vl, mvl) of any written destination are zeroed; reductions
// and vmv.s.x write element 0 and zero the rest. vfmacc is deliberately
// unfused: multiply rounds, then add rounds (matches fmul+fadd exactly).
uint64_t exec_vector_op(const Instruction& inst, uint32_t vl, uint32_t mvl,
                        uint64_t scalar_bits, const uint64_t* s1,
                        const uint64_t* s2, const uint64_t* mask,
                        const uint64_t* old_dst, uint64_t* dst);

// Number of vector-register reads the instruction performs (operand-read
// cost driver): explicit vector sources, plus the mask register and the
// old-destination merge read for masked ops with a vector destination.
unsigned vector_source_count(const Instruction& inst);

// True when the opcode writes a vector register.
bool writes_vreg(const Instruction& inst);

} // namespace vsim
