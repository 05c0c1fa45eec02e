#include "vsim/refmodel.hpp"

#include <bit>

namespace vsim {

namespace {
inline double fd(uint64_t bits) { return std::bit_cast<double>(bits); }
inline uint64_t fb(double v) { return std::bit_cast<uint64_t>(v); }
} // namespace

RefModel::RefModel(Program p, uint32_t mvl)
    : prog_(std::move(p)), st_(mvl, MemoryImage::from_program(prog_)) {
  st_.pc = prog_.entry;
}

void RefModel::count(const Instruction& inst, uint32_t vl_at_exec) {
  InstClass c = instruction_class(inst.op);
  switch (c) {
    case InstClass::Scalar: counters.scalar_instructions++; break;
    case InstClass::VectorMemory: counters.vector_memory++; break;
    case InstClass::VectorArithmetic: counters.vector_arithmetic++; break;
    case InstClass::VectorElemManipulation:
      counters.vector_elem_manipulation++;
      break;
  }
  if (c != InstClass::Scalar) counters.vector_operations += vl_at_exec;
  if (collect_trace)
    trace.push_back(
        {seq_, c, mnemonic(inst), c == InstClass::Scalar ? 0 : vl_at_exec});
  ++seq_;
}

bool RefModel::step() {
  if (st_.halted) return false;
  if (st_.pc >= prog_.text.size())
    throw SimTrap("pc out of range: " + std::to_string(st_.pc));
  const Instruction& inst = prog_.text[st_.pc];
  uint64_t next = st_.pc + 1;
  auto& x = st_.x;
  auto& f = st_.f;
  auto wx = [&](uint8_t r, uint64_t v) {
    if (r != 0) x[r] = v;
  };

  switch (inst.op) {
    case Opcode::LI: wx(inst.rd, (uint64_t)inst.imm); break;
    case Opcode::ADD: wx(inst.rd, x[inst.rs1] + x[inst.rs2]); break;
    case Opcode::ADDI: wx(inst.rd, x[inst.rs1] + (uint64_t)inst.imm); break;
    case Opcode::SUB: wx(inst.rd, x[inst.rs1] - x[inst.rs2]); break;
    case Opcode::MUL: wx(inst.rd, x[inst.rs1] * x[inst.rs2]); break;
    case Opcode::LD:
      wx(inst.rd, st_.mem.read_u64(x[inst.rs1] + (uint64_t)inst.imm));
      break;
    case Opcode::SD:
      st_.mem.write_u64(x[inst.rs1] + (uint64_t)inst.imm, x[inst.rs2]);
      break;
    case Opcode::FLD:
      f[inst.rd] = st_.mem.read_u64(x[inst.rs1] + (uint64_t)inst.imm);
      break;
    case Opcode::FSD:
      st_.mem.write_u64(x[inst.rs1] + (uint64_t)inst.imm, f[inst.rs2]);
      break;
    case Opcode::FADD: f[inst.rd] = fb(fd(f[inst.rs1]) + fd(f[inst.rs2])); break;
    case Opcode::FSUB: f[inst.rd] = fb(fd(f[inst.rs1]) - fd(f[inst.rs2])); break;
    case Opcode::FMUL: f[inst.rd] = fb(fd(f[inst.rs1]) * fd(f[inst.rs2])); break;
    case Opcode::FDIV: f[inst.rd] = fb(fd(f[inst.rs1]) / fd(f[inst.rs2])); break;
    case Opcode::BEQ:
      if (x[inst.rs1] == x[inst.rs2]) next = (uint64_t)inst.imm;
      break;
    case Opcode::BNE:
      if (x[inst.rs1] != x[inst.rs2]) next = (uint64_t)inst.imm;
      break;
    case Opcode::BLT:
      if ((int64_t)x[inst.rs1] < (int64_t)x[inst.rs2])
        next = (uint64_t)inst.imm;
      break;
    case Opcode::BGE:
      if ((int64_t)x[inst.rs1] >= (int64_t)x[inst.rs2])
        next = (uint64_t)inst.imm;
      break;
    case Opcode::JAL:
      wx(inst.rd, st_.pc + 1);
      next = (uint64_t)inst.imm;
      break;
    case Opcode::RET:
      if (x[1] == kHaltSentinel) {
        st_.halted = true;
        count(inst, 0);
        return false;
      }
      next = x[1];
      break;
    case Opcode::VSETVL: {
      uint64_t req = x[inst.rs1];
      st_.vl = (uint32_t)std::min<uint64_t>(req, st_.mvl);
      wx(inst.rd, st_.vl);
      break;
    }

    case Opcode::VLE: case Opcode::VLSE: case Opcode::VLXE: {
      const uint64_t* mask = inst.masked ? st_.v[0].data() : nullptr;
      const uint64_t* index =
          inst.mem_mode == MemMode::Indexed ? st_.v[inst.vs2].data() : nullptr;
      auto accs = gen_addresses(inst.mem_mode, st_.vl, x[inst.rs1],
                                (int64_t)x[inst.rs2], index, mask);
      std::vector<uint64_t> tmp(st_.mvl, 0);
      for (uint32_t i = 0; i < st_.vl; ++i)
        if (inst.masked && !(st_.v[0][i] & 1)) tmp[i] = st_.v[inst.vd][i];
      for (const auto& a : accs) tmp[a.elem] = st_.mem.read_u64(a.addr);
      st_.v[inst.vd] = std::move(tmp);
      break;
    }
    case Opcode::VSE: case Opcode::VSSE: case Opcode::VSXE: {
      const uint64_t* mask = inst.masked ? st_.v[0].data() : nullptr;
      const uint64_t* index =
          inst.mem_mode == MemMode::Indexed ? st_.v[inst.vs2].data() : nullptr;
      auto accs = gen_addresses(inst.mem_mode, st_.vl, x[inst.rs1],
                                (int64_t)x[inst.rs2], index, mask);
      for (const auto& a : accs)
        st_.mem.write_u64(a.addr, st_.v[inst.vd][a.elem]);
      break;
    }

    default: {
      // Vector datapath instructions share exec_vector_op with the engine.
      uint64_t scalar_bits = 0;
      switch (inst.op) {
        case Opcode::VFMV_VF: scalar_bits = f[inst.rs1]; break;
        case Opcode::VFADD: case Opcode::VFSUB: case Opcode::VFMUL:
        case Opcode::VFDIV: case Opcode::VFMACC:
          scalar_bits = inst.scalar_operand ? f[inst.rs1] : 0;
          break;
        default:
          scalar_bits = inst.rs1 != kNoReg ? x[inst.rs1] : 0;
          break;
      }
      const uint64_t* s1 = inst.vs1 != kNoReg ? st_.v[inst.vs1].data() : nullptr;
      const uint64_t* s2 = inst.vs2 != kNoReg ? st_.v[inst.vs2].data() : nullptr;
      const uint64_t* mask = inst.masked ? st_.v[0].data() : nullptr;
      if (produces_scalar_result(inst.op)) {
        uint64_t r = exec_vector_op(inst, st_.vl, st_.mvl, scalar_bits, s1, s2,
                                    mask, nullptr, nullptr);
        wx(inst.rd, r);
      } else {
        exec_vector_op(inst, st_.vl, st_.mvl, scalar_bits, s1, s2, mask,
                       st_.v[inst.vd].data(), st_.v[inst.vd].data());
      }
      break;
    }
  }

  count(inst, st_.vl);
  st_.pc = next;
  return true;
}

void RefModel::run(uint64_t step_limit) {
  uint64_t steps = 0;
  while (!st_.halted) {
    if (++steps > step_limit)
      throw StepLimitExceeded("step limit exceeded after " +
                              std::to_string(step_limit) + " instructions");
    step();
  }
}

} // namespace vsim
