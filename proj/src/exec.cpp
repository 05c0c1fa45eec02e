#include "vsim/exec.hpp"

#include <bit>
#include <cmath>

namespace vsim {

namespace {
inline double d(uint64_t bits) { return std::bit_cast<double>(bits); }
inline uint64_t b(double v) { return std::bit_cast<uint64_t>(v); }
inline bool active(const uint64_t* mask, uint32_t i) {
  return !mask || (mask[i] & 1);
}
} // namespace

std::vector<ElemAccess> gen_addresses(MemMode mode, uint32_t vl, uint64_t base,
                                      int64_t stride_elems,
                                      const uint64_t* index,
                                      const uint64_t* mask) {
  std::vector<ElemAccess> out;
  out.reserve(vl);
  for (uint32_t i = 0; i < vl; ++i) {
    if (!active(mask, i)) continue;
    uint64_t addr = 0;
    switch (mode) {
      case MemMode::Unit: addr = base + uint64_t(i) * kSewBytes; break;
      case MemMode::Strided:
        addr = base + uint64_t(int64_t(i) * stride_elems * (int64_t)kSewBytes);
        break;
      case MemMode::Indexed: addr = base + index[i]; break;
      case MemMode::None: return out;
    }
    out.push_back({i, addr});
  }
  return out;
}

unsigned vector_source_count(const Instruction& inst) {
  unsigned n = 0;
  switch (inst.op) {
    // two vector sources (or one + scalar form)
    case Opcode::VADD: case Opcode::VSUB: case Opcode::VMUL:
    case Opcode::VMIN: case Opcode::VMAX:
    case Opcode::VFADD: case Opcode::VFSUB: case Opcode::VFMUL:
    case Opcode::VFDIV:
    case Opcode::VMSLT: case Opcode::VMSLE: case Opcode::VMSEQ:
    case Opcode::VMAND: case Opcode::VMOR: case Opcode::VMXOR:
    case Opcode::VRGATHER:
    case Opcode::VREDSUM: case Opcode::VREDMIN: case Opcode::VFREDSUM:
      n = inst.scalar_operand ? 1 : 2;
      break;
    // three: accumulator is read as a source
    case Opcode::VFMACC:
      n = inst.scalar_operand ? 2 : 3;
      break;
    case Opcode::VFSQRT: case Opcode::VMV_VV:
    case Opcode::VSLIDE1UP: case Opcode::VSLIDE1DOWN:
    case Opcode::VSLIDEUP: case Opcode::VSLIDEDOWN:
    case Opcode::VFIRST: case Opcode::VPOPC: case Opcode::VMV_XS:
      n = 1;
      break;
    case Opcode::VMV_SX: case Opcode::VFMV_VF:
      n = 0;
      break;
    // memory: stores read the data register; indexed ops read the index
    case Opcode::VLE: case Opcode::VLSE:
      n = 0;
      break;
    case Opcode::VLXE:
      n = 1;
      break;
    case Opcode::VSE: case Opcode::VSSE:
      n = 1;
      break;
    case Opcode::VSXE:
      n = 2;
      break;
    default:
      return 0; // scalar opcodes
  }
  if (inst.masked) {
    n += 1; // the v0 read
    if (writes_vreg(inst) && inst.op != Opcode::VFMACC) n += 1; // merge read
  }
  return n;
}

bool writes_vreg(const Instruction& inst) {
  if (!is_vector(inst.op)) return false;
  if (is_vector_store(inst.op)) return false;
  if (produces_scalar_result(inst.op)) return false;
  return true;
}

uint64_t exec_vector_op(const Instruction& inst, uint32_t vl, uint32_t mvl,
                        uint64_t scalar_bits, const uint64_t* s1,
                        const uint64_t* s2, const uint64_t* mask,
                        const uint64_t* old_dst, uint64_t* dst) {
  // Scalar-result queries never write a vector register.
  switch (inst.op) {
    case Opcode::VFIRST: {
      for (uint32_t i = 0; i < vl; ++i)
        if (active(mask, i) && (s1[i] & 1)) return i;
      return ~uint64_t(0); // none active: -1
    }
    case Opcode::VPOPC: {
      uint64_t n = 0;
      for (uint32_t i = 0; i < vl; ++i)
        if (active(mask, i) && (s1[i] & 1)) ++n;
      return n;
    }
    case Opcode::VMV_XS:
      return s1[0];
    default: break;
  }

  std::vector<uint64_t> tmp(mvl, 0);
  auto merge_default = [&](uint32_t i) {
    // masked-off element keeps the old destination value
    tmp[i] = old_dst ? old_dst[i] : 0;
  };

  switch (inst.op) {
    case Opcode::VREDSUM: case Opcode::VREDMIN: case Opcode::VFREDSUM: {
      // Strict element order 0..vl-1 starting from the accumulator in
      // s2[0]; result is a single-element write.
      uint64_t acc = s2[0];
      for (uint32_t i = 0; i < vl; ++i) {
        if (!active(mask, i)) continue;
        switch (inst.op) {
          case Opcode::VREDSUM: acc += s1[i]; break;
          case Opcode::VREDMIN:
            acc = std::min((int64_t)acc, (int64_t)s1[i]);
            break;
          default: acc = b(d(acc) + d(s1[i])); break;
        }
      }
      tmp[0] = acc;
      break;
    }
    case Opcode::VMV_SX:
      tmp[0] = scalar_bits;
      break;
    default: {
      for (uint32_t i = 0; i < vl; ++i) {
        if (!active(mask, i)) {
          merge_default(i);
          continue;
        }
        uint64_t a = s1 ? s1[i] : 0;
        uint64_t c = inst.scalar_operand ? scalar_bits : (s2 ? s2[i] : 0);
        uint64_t r = 0;
        switch (inst.op) {
          case Opcode::VADD: r = a + c; break;
          case Opcode::VSUB: r = a - c; break;
          case Opcode::VMUL: r = a * c; break;
          case Opcode::VMIN: r = std::min((int64_t)a, (int64_t)c); break;
          case Opcode::VMAX: r = std::max((int64_t)a, (int64_t)c); break;
          case Opcode::VFADD: r = b(d(a) + d(c)); break;
          case Opcode::VFSUB: r = b(d(a) - d(c)); break;
          case Opcode::VFMUL: r = b(d(a) * d(c)); break;
          case Opcode::VFDIV: r = b(d(a) / d(c)); break;
          case Opcode::VFSQRT: r = b(std::sqrt(d(a))); break;
          case Opcode::VFMACC: {
            // unfused: product rounds, then the add rounds
            double prod = d(a) * d(c);
            r = b(d(old_dst[i]) + prod);
            break;
          }
          case Opcode::VMSLT: r = (int64_t)a < (int64_t)c ? 1 : 0; break;
          case Opcode::VMSLE: r = (int64_t)a <= (int64_t)c ? 1 : 0; break;
          case Opcode::VMSEQ: r = a == c ? 1 : 0; break;
          case Opcode::VMAND: r = (a & c) & 1; break;
          case Opcode::VMOR: r = (a | c) & 1; break;
          case Opcode::VMXOR: r = (a ^ c) & 1; break;
          case Opcode::VMV_VV: r = a; break;
          case Opcode::VFMV_VF: r = scalar_bits; break;
          case Opcode::VSLIDE1UP:
            r = i == 0 ? scalar_bits : s1[i - 1];
            break;
          case Opcode::VSLIDE1DOWN:
            r = i + 1 < vl ? s1[i + 1] : scalar_bits;
            break;
          case Opcode::VSLIDEUP: {
            uint64_t k = scalar_bits;
            if ((uint64_t)i < k) {
              merge_default(i); // elements below the offset are not written
              continue;
            }
            r = s1[i - k];
            break;
          }
          case Opcode::VSLIDEDOWN: {
            uint64_t src = (uint64_t)i + scalar_bits;
            r = src < mvl ? s1[src] : 0;
            break;
          }
          case Opcode::VRGATHER: {
            uint64_t idx = c; // vs2 holds indices
            r = idx < mvl ? s1[idx] : 0;
            break;
          }
          default: r = 0; break;
        }
        tmp[i] = r;
      }
      break;
    }
  }

  for (uint32_t i = 0; i < mvl; ++i) dst[i] = tmp[i];
  return 0;
}

} // namespace vsim
