#include "vsim/scalar_core.hpp"

#include <bit>
#include <cmath>

#include "vsim/exec.hpp"

namespace vsim {

namespace {

double d(uint64_t b) { return std::bit_cast<double>(b); }
uint64_t b(double v) { return std::bit_cast<uint64_t>(v); }

bool fp_scalar_form(const Instruction& inst) {
  if (inst.op == Opcode::VFMV_VF) return true;
  if (!inst.scalar_operand) return false;
  switch (inst.op) {
    case Opcode::VFADD:
    case Opcode::VFSUB:
    case Opcode::VFMUL:
    case Opcode::VFDIV:
    case Opcode::VFMACC:
      return true;
    default:
      return false;
  }
}

}  // namespace

ScalarCore::ScalarCore(const Program& prog, MemoryImage& mem,
                       MemSystem& memsys, Engine& engine,
                       const EngineConfig& cfg, TouchFn touch)
    : prog_(prog), mem_(mem), memsys_(memsys), engine_(engine), cfg_(cfg),
      touch_(std::move(touch)), pc_(prog.entry) {
  x_[1] = kHaltSentinel;
  x_[2] = MemoryImage::kStackTop;
}

void ScalarCore::write_x(uint8_t r, uint64_t v, uint64_t ready) {
  if (r == 0) return;
  x_[r] = v;
  busy_x_[r] = ready;
}

void ScalarCore::write_f(uint8_t r, uint64_t v, uint64_t ready) {
  f_[r] = v;
  busy_f_[r] = ready;
}

bool ScalarCore::x_ready(uint8_t r, uint64_t tick) const {
  if (r == kNoReg || r == 0) return true;
  return !pending_x_[r] && busy_x_[r] <= tick;
}

bool ScalarCore::f_ready(uint8_t r, uint64_t tick) const {
  if (r == kNoReg) return true;
  return busy_f_[r] <= tick;
}

void ScalarCore::deliver(uint8_t rd, uint64_t value, uint64_t tick) {
  if (rd == 0 || rd == kNoReg) return;
  x_[rd] = value;
  busy_x_[rd] = tick;
  pending_x_[rd] = false;
}

void ScalarCore::cycle(uint64_t tick) {
  if (halt_wait_) return;
  bool end_group = false;
  for (int slot = 0; slot < 2 && !end_group && !halt_wait_; ++slot) {
    if (!try_issue(tick, &end_group)) break;
  }
}

bool ScalarCore::issue_vector(const Instruction& inst, uint64_t tick) {
  // capture scalar operands; all must be ready at submission
  bool fp_form = fp_scalar_form(inst);
  if (inst.rs1 != kNoReg) {
    if (fp_form ? !f_ready(inst.rs1, tick) : !x_ready(inst.rs1, tick))
      return false;
  }
  if (inst.mem_mode == MemMode::Strided && !x_ready(inst.rs2, tick))
    return false;
  bool scalar_result = produces_scalar_result(inst.op);
  if (scalar_result && inst.rd != kNoReg && inst.rd != 0) {
    if (pending_x_[inst.rd] || busy_x_[inst.rd] > tick) return false;
  }
  Submission s;
  s.inst = inst;
  s.vl = vl_;
  if (inst.rs1 != kNoReg)
    s.scalar_bits = fp_form ? f_[inst.rs1] : x_[inst.rs1];
  if (is_vector_memory(inst.op)) {
    s.base = x_[inst.rs1] + static_cast<uint64_t>(inst.imm);
    if (inst.mem_mode == MemMode::Strided)
      s.stride = static_cast<int64_t>(x_[inst.rs2]);
  }
  if (!engine_.submit(s)) return false;  // submission queue full
  if (scalar_result && inst.rd != kNoReg && inst.rd != 0)
    pending_x_[inst.rd] = true;
  return true;
}

bool ScalarCore::try_issue(uint64_t tick, bool* end_group) {
  if (pc_ >= prog_.text.size())
    throw SimTrap("program counter ran past the end of .text");
  const Instruction& inst = prog_.text[pc_];

  if (is_vector(inst.op)) {
    if (!issue_vector(inst, tick)) return false;
    ++pc_;
    return true;
  }

  switch (inst.op) {
    case Opcode::VSETVL: {
      if (!x_ready(inst.rs1, tick) || !x_ready(inst.rd, tick)) return false;
      uint64_t requested = x_[inst.rs1];
      vl_ = static_cast<uint32_t>(std::min<uint64_t>(requested, cfg_.mvl));
      write_x(inst.rd, vl_, tick + 1);
      break;
    }
    case Opcode::LI:
      if (!x_ready(inst.rd, tick)) return false;
      write_x(inst.rd, static_cast<uint64_t>(inst.imm), tick + 1);
      break;
    case Opcode::ADD:
    case Opcode::SUB:
    case Opcode::MUL: {
      if (!x_ready(inst.rs1, tick) || !x_ready(inst.rs2, tick) ||
          !x_ready(inst.rd, tick))
        return false;
      uint64_t a = x_[inst.rs1], c = x_[inst.rs2], v = 0;
      uint64_t lat = 1;
      if (inst.op == Opcode::ADD) v = a + c;
      if (inst.op == Opcode::SUB) v = a - c;
      if (inst.op == Opcode::MUL) {
        v = a * c;
        lat = cfg_.fu.int_mul;
      }
      write_x(inst.rd, v, tick + lat);
      break;
    }
    case Opcode::ADDI:
      if (!x_ready(inst.rs1, tick) || !x_ready(inst.rd, tick)) return false;
      write_x(inst.rd, x_[inst.rs1] + static_cast<uint64_t>(inst.imm),
              tick + 1);
      break;
    case Opcode::LD:
    case Opcode::FLD: {
      bool is_fp = inst.op == Opcode::FLD;
      if (!x_ready(inst.rs1, tick)) return false;
      if (is_fp ? !f_ready(inst.rd, tick) : !x_ready(inst.rd, tick))
        return false;
      uint64_t addr = x_[inst.rs1] + static_cast<uint64_t>(inst.imm);
      auto ready = memsys_.request(memsys_.line_of(addr), false, tick, true);
      if (!ready) return false;  // no MSHR free, retry
      if (touch_) touch_(addr, 8, false);
      uint64_t v = mem_.read_u64(addr);
      if (is_fp)
        write_f(inst.rd, v, *ready);
      else
        write_x(inst.rd, v, *ready);
      break;
    }
    case Opcode::SD:
    case Opcode::FSD: {
      bool is_fp = inst.op == Opcode::FSD;
      if (!x_ready(inst.rs1, tick)) return false;
      if (is_fp ? !f_ready(inst.rs2, tick) : !x_ready(inst.rs2, tick))
        return false;
      uint64_t addr = x_[inst.rs1] + static_cast<uint64_t>(inst.imm);
      auto ready = memsys_.request(memsys_.line_of(addr), true, tick, true);
      if (!ready) return false;
      if (touch_) touch_(addr, 8, true);
      mem_.write_u64(addr, is_fp ? f_[inst.rs2] : x_[inst.rs2]);
      break;
    }
    case Opcode::FADD:
    case Opcode::FSUB:
    case Opcode::FMUL:
    case Opcode::FDIV: {
      if (!f_ready(inst.rs1, tick) || !f_ready(inst.rs2, tick) ||
          !f_ready(inst.rd, tick))
        return false;
      double a = d(f_[inst.rs1]), c = d(f_[inst.rs2]), v = 0;
      uint64_t lat = cfg_.fu.fp_add;
      switch (inst.op) {
        case Opcode::FADD: v = a + c; break;
        case Opcode::FSUB: v = a - c; break;
        case Opcode::FMUL: v = a * c; break;
        default:
          v = a / c;
          lat = cfg_.fu.fp_div;
          break;
      }
      write_f(inst.rd, b(v), tick + lat);
      break;
    }
    case Opcode::BEQ:
    case Opcode::BNE:
    case Opcode::BLT:
    case Opcode::BGE: {
      if (!x_ready(inst.rs1, tick) || !x_ready(inst.rs2, tick)) return false;
      int64_t a = static_cast<int64_t>(x_[inst.rs1]);
      int64_t c = static_cast<int64_t>(x_[inst.rs2]);
      bool taken = false;
      switch (inst.op) {
        case Opcode::BEQ: taken = a == c; break;
        case Opcode::BNE: taken = a != c; break;
        case Opcode::BLT: taken = a < c; break;
        default: taken = a >= c; break;
      }
      ++scalar_instructions_;
      pc_ = taken ? static_cast<uint64_t>(inst.imm) : pc_ + 1;
      *end_group = true;
      return true;
    }
    case Opcode::JAL:
      if (!x_ready(inst.rd, tick)) return false;
      write_x(inst.rd, pc_ + 1, tick + 1);
      ++scalar_instructions_;
      pc_ = static_cast<uint64_t>(inst.imm);
      *end_group = true;
      return true;
    case Opcode::RET: {
      if (!x_ready(1, tick)) return false;
      ++scalar_instructions_;
      if (x_[1] == kHaltSentinel) {
        halt_wait_ = true;
        *end_group = true;
        return true;
      }
      pc_ = x_[1];
      *end_group = true;
      return true;
    }
    default:
      throw SimTrap("unhandled scalar opcode in timed core");
  }
  ++scalar_instructions_;
  ++pc_;
  return true;
}

}  // namespace vsim
