#pragma once
// Instruction set: one decoded record type shared by the assembler, the
// functional reference model and the timed pipeline. SEW is fixed at 64 bits.

#include <cstdint>
#include <string>

namespace vsim {

inline constexpr unsigned kNumVRegs = 32;
inline constexpr unsigned kNumXRegs = 32;
inline constexpr unsigned kNumFRegs = 32;
inline constexpr unsigned kSewBytes = 8;
inline constexpr uint8_t kNoReg = 0xff;

enum class Opcode : uint8_t {
  // vector configuration (executes in the scalar core)
  VSETVL,
  // vector memory
  VLE, VSE, VLSE, VSSE, VLXE, VSXE,
  // vector integer arithmetic
  VADD, VSUB, VMUL, VMIN, VMAX,
  // vector floating point arithmetic
  VFADD, VFSUB, VFMUL, VFDIV, VFSQRT, VFMACC,
  // compares (write 0/1 masks) and mask-register logicals
  VMSLT, VMSLE, VMSEQ, VMAND, VMOR, VMXOR,
  // mask queries producing a scalar result
  VFIRST, VPOPC,
  // element manipulation
  VSLIDE1UP, VSLIDE1DOWN, VSLIDEUP, VSLIDEDOWN, VRGATHER,
  // reductions (result in element 0 of vd)
  VREDSUM, VREDMIN, VFREDSUM,
  // moves
  VMV_VV, VMV_SX, VMV_XS, VFMV_VF,
  // scalar core
  LI, ADD, ADDI, SUB, MUL,
  LD, SD, FLD, FSD,
  FADD, FSUB, FMUL, FDIV,
  BEQ, BNE, BLT, BGE, JAL, RET,
};

enum class MemMode : uint8_t { None, Unit, Strided, Indexed };

enum class InstClass : uint8_t {
  Scalar,
  VectorMemory,
  VectorArithmetic,
  VectorElemManipulation,
};

// Decoded instruction. Field use by group:
//   vector regs: vd (destination; data source for stores), vs1, vs2
//   scalar regs: rd, rs1, rs2 (int or fp file is implied by the opcode)
//   imm: immediates, branch/jump target (instruction index), load/store offset
//   scalar_operand: .vx/.vf form — the scalar source lives in rs1
//   masked: instruction reads v0 as a mask (".., v0.t")
struct Instruction {
  Opcode op = Opcode::RET;
  uint8_t vd = kNoReg;
  uint8_t vs1 = kNoReg;
  uint8_t vs2 = kNoReg;
  uint8_t rd = kNoReg;
  uint8_t rs1 = kNoReg;
  uint8_t rs2 = kNoReg;
  int64_t imm = 0;
  bool masked = false;
  bool scalar_operand = false;
  MemMode mem_mode = MemMode::None;

  bool operator==(const Instruction&) const = default;
};

// Classification used by the statistics engine. Every mnemonic maps to
// exactly one class; vsetvl executes in the scalar core and counts as scalar.
InstClass instruction_class(Opcode op);

// True for instructions handed to the vector engine at commit
// (everything vector except vsetvl).
bool is_vector(Opcode op);
bool is_vector_memory(Opcode op);
bool is_vector_store(Opcode op);

// True for vfirst.m / vpopc.m / vmv.x.s: vector-engine instructions whose
// result lands in a scalar register (the engine->core channel).
bool produces_scalar_result(Opcode op);

// Mnemonic for tracing/disassembly, e.g. "vadd.vv" / "vadd.vx" depending on
// the instruction's form.
std::string mnemonic(const Instruction& inst);

} // namespace vsim
