#include "vsim/inst.hpp"

namespace vsim {

InstClass instruction_class(Opcode op) {
  switch (op) {
    case Opcode::VLE: case Opcode::VSE:
    case Opcode::VLSE: case Opcode::VSSE:
    case Opcode::VLXE: case Opcode::VSXE:
      return InstClass::VectorMemory;
    case Opcode::VSLIDE1UP: case Opcode::VSLIDE1DOWN:
    case Opcode::VSLIDEUP: case Opcode::VSLIDEDOWN:
    case Opcode::VRGATHER:
      return InstClass::VectorElemManipulation;
    case Opcode::VADD: case Opcode::VSUB: case Opcode::VMUL:
    case Opcode::VMIN: case Opcode::VMAX:
    case Opcode::VFADD: case Opcode::VFSUB: case Opcode::VFMUL:
    case Opcode::VFDIV: case Opcode::VFSQRT: case Opcode::VFMACC:
    case Opcode::VMSLT: case Opcode::VMSLE: case Opcode::VMSEQ:
    case Opcode::VMAND: case Opcode::VMOR: case Opcode::VMXOR:
    case Opcode::VFIRST: case Opcode::VPOPC:
    case Opcode::VREDSUM: case Opcode::VREDMIN: case Opcode::VFREDSUM:
    case Opcode::VMV_VV: case Opcode::VMV_SX: case Opcode::VMV_XS:
    case Opcode::VFMV_VF:
      return InstClass::VectorArithmetic;
    default:
      return InstClass::Scalar; // vsetvl and the scalar subset
  }
}

bool is_vector(Opcode op) {
  return instruction_class(op) != InstClass::Scalar;
}

bool is_vector_memory(Opcode op) {
  return instruction_class(op) == InstClass::VectorMemory;
}

bool is_vector_store(Opcode op) {
  return op == Opcode::VSE || op == Opcode::VSSE || op == Opcode::VSXE;
}

bool produces_scalar_result(Opcode op) {
  return op == Opcode::VFIRST || op == Opcode::VPOPC || op == Opcode::VMV_XS;
}

std::string mnemonic(const Instruction& inst) {
  auto suffixed = [&](const char* base) {
    return std::string(base) + (inst.scalar_operand ? ".vx" : ".vv");
  };
  auto fsuffixed = [&](const char* base) {
    return std::string(base) + (inst.scalar_operand ? ".vf" : ".vv");
  };
  switch (inst.op) {
    case Opcode::VSETVL: return "vsetvl";
    case Opcode::VLE: return "vle.v";
    case Opcode::VSE: return "vse.v";
    case Opcode::VLSE: return "vlse.v";
    case Opcode::VSSE: return "vsse.v";
    case Opcode::VLXE: return "vlxe.v";
    case Opcode::VSXE: return "vsxe.v";
    case Opcode::VADD: return suffixed("vadd");
    case Opcode::VSUB: return suffixed("vsub");
    case Opcode::VMUL: return suffixed("vmul");
    case Opcode::VMIN: return suffixed("vmin");
    case Opcode::VMAX: return suffixed("vmax");
    case Opcode::VFADD: return fsuffixed("vfadd");
    case Opcode::VFSUB: return fsuffixed("vfsub");
    case Opcode::VFMUL: return fsuffixed("vfmul");
    case Opcode::VFDIV: return fsuffixed("vfdiv");
    case Opcode::VFSQRT: return "vfsqrt.v";
    case Opcode::VFMACC: return fsuffixed("vfmacc");
    case Opcode::VMSLT: return suffixed("vmslt");
    case Opcode::VMSLE: return suffixed("vmsle");
    case Opcode::VMSEQ: return suffixed("vmseq");
    case Opcode::VMAND: return "vmand.mm";
    case Opcode::VMOR: return "vmor.mm";
    case Opcode::VMXOR: return "vmxor.mm";
    case Opcode::VFIRST: return "vfirst.m";
    case Opcode::VPOPC: return "vpopc.m";
    case Opcode::VSLIDE1UP: return "vslide1up.vx";
    case Opcode::VSLIDE1DOWN: return "vslide1down.vx";
    case Opcode::VSLIDEUP: return "vslideup.vx";
    case Opcode::VSLIDEDOWN: return "vslidedown.vx";
    case Opcode::VRGATHER: return "vrgather.vv";
    case Opcode::VREDSUM: return "vredsum.vs";
    case Opcode::VREDMIN: return "vredmin.vs";
    case Opcode::VFREDSUM: return "vfredsum.vs";
    case Opcode::VMV_VV: return "vmv.v.v";
    case Opcode::VMV_SX: return "vmv.s.x";
    case Opcode::VMV_XS: return "vmv.x.s";
    case Opcode::VFMV_VF: return "vfmv.v.f";
    case Opcode::LI: return "li";
    case Opcode::ADD: return "add";
    case Opcode::ADDI: return "addi";
    case Opcode::SUB: return "sub";
    case Opcode::MUL: return "mul";
    case Opcode::LD: return "ld";
    case Opcode::SD: return "sd";
    case Opcode::FLD: return "fld";
    case Opcode::FSD: return "fsd";
    case Opcode::FADD: return "fadd";
    case Opcode::FSUB: return "fsub";
    case Opcode::FMUL: return "fmul";
    case Opcode::FDIV: return "fdiv";
    case Opcode::BEQ: return "beq";
    case Opcode::BNE: return "bne";
    case Opcode::BLT: return "blt";
    case Opcode::BGE: return "bge";
    case Opcode::JAL: return "jal";
    case Opcode::RET: return "ret";
  }
  return "?";
}

} // namespace vsim
