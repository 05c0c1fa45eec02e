#include "vsim/assembler.hpp"

#include <algorithm>
#include <cctype>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

namespace vsim {

namespace {

// Operand pattern characters (see table below):
//   D,S,T  vector register -> vd, vs1, vs2
//   d,s,t  integer register -> rd, rs1, rs2
//   e,f,g  fp register      -> rd, rs1, rs2
//   i      integer immediate -> imm
//   I      integer immediate or data label -> imm
//   B      text label or instruction index -> imm
//   M      mem operand imm(xN) -> imm, rs1
//   P      bare (xN) -> rs1
struct Form {
  Opcode op;
  const char* pattern;
  bool mask_ok;
  bool scalar_operand;
  MemMode mem_mode;
};

const std::map<std::string, Form>& form_table() {
  static const std::map<std::string, Form> t = {
      {"vsetvl", {Opcode::VSETVL, "ds", false, false, MemMode::None}},
      {"vle.v", {Opcode::VLE, "DP", true, false, MemMode::Unit}},
      {"vse.v", {Opcode::VSE, "DP", true, false, MemMode::Unit}},
      {"vlse.v", {Opcode::VLSE, "DPt", true, false, MemMode::Strided}},
      {"vsse.v", {Opcode::VSSE, "DPt", true, false, MemMode::Strided}},
      {"vlxe.v", {Opcode::VLXE, "DPT", true, false, MemMode::Indexed}},
      {"vsxe.v", {Opcode::VSXE, "DPT", true, false, MemMode::Indexed}},
      {"vadd.vv", {Opcode::VADD, "DST", true, false, MemMode::None}},
      {"vadd.vx", {Opcode::VADD, "DSs", true, true, MemMode::None}},
      {"vsub.vv", {Opcode::VSUB, "DST", true, false, MemMode::None}},
      {"vsub.vx", {Opcode::VSUB, "DSs", true, true, MemMode::None}},
      {"vmul.vv", {Opcode::VMUL, "DST", true, false, MemMode::None}},
      {"vmul.vx", {Opcode::VMUL, "DSs", true, true, MemMode::None}},
      {"vmin.vv", {Opcode::VMIN, "DST", true, false, MemMode::None}},
      {"vmin.vx", {Opcode::VMIN, "DSs", true, true, MemMode::None}},
      {"vmax.vv", {Opcode::VMAX, "DST", true, false, MemMode::None}},
      {"vmax.vx", {Opcode::VMAX, "DSs", true, true, MemMode::None}},
      {"vfadd.vv", {Opcode::VFADD, "DST", true, false, MemMode::None}},
      {"vfadd.vf", {Opcode::VFADD, "DSf", true, true, MemMode::None}},
      {"vfsub.vv", {Opcode::VFSUB, "DST", true, false, MemMode::None}},
      {"vfsub.vf", {Opcode::VFSUB, "DSf", true, true, MemMode::None}},
      {"vfmul.vv", {Opcode::VFMUL, "DST", true, false, MemMode::None}},
      {"vfmul.vf", {Opcode::VFMUL, "DSf", true, true, MemMode::None}},
      {"vfdiv.vv", {Opcode::VFDIV, "DST", true, false, MemMode::None}},
      {"vfdiv.vf", {Opcode::VFDIV, "DSf", true, true, MemMode::None}},
      {"vfsqrt.v", {Opcode::VFSQRT, "DS", true, false, MemMode::None}},
      {"vfmacc.vv", {Opcode::VFMACC, "DST", true, false, MemMode::None}},
      {"vfmacc.vf", {Opcode::VFMACC, "DSf", true, true, MemMode::None}},
      {"vmslt.vv", {Opcode::VMSLT, "DST", true, false, MemMode::None}},
      {"vmslt.vx", {Opcode::VMSLT, "DSs", true, true, MemMode::None}},
      {"vmsle.vv", {Opcode::VMSLE, "DST", true, false, MemMode::None}},
      {"vmsle.vx", {Opcode::VMSLE, "DSs", true, true, MemMode::None}},
      {"vmseq.vv", {Opcode::VMSEQ, "DST", true, false, MemMode::None}},
      {"vmseq.vx", {Opcode::VMSEQ, "DSs", true, true, MemMode::None}},
      {"vmand.mm", {Opcode::VMAND, "DST", false, false, MemMode::None}},
      {"vmor.mm", {Opcode::VMOR, "DST", false, false, MemMode::None}},
      {"vmxor.mm", {Opcode::VMXOR, "DST", false, false, MemMode::None}},
      {"vfirst.m", {Opcode::VFIRST, "dS", true, false, MemMode::None}},
      {"vpopc.m", {Opcode::VPOPC, "dS", true, false, MemMode::None}},
      {"vslide1up.vx", {Opcode::VSLIDE1UP, "DSs", true, true, MemMode::None}},
      {"vslide1down.vx",
       {Opcode::VSLIDE1DOWN, "DSs", true, true, MemMode::None}},
      {"vslideup.vx", {Opcode::VSLIDEUP, "DSs", true, true, MemMode::None}},
      {"vslidedown.vx",
       {Opcode::VSLIDEDOWN, "DSs", true, true, MemMode::None}},
      {"vrgather.vv", {Opcode::VRGATHER, "DST", true, false, MemMode::None}},
      {"vredsum.vs", {Opcode::VREDSUM, "DST", true, false, MemMode::None}},
      {"vredmin.vs", {Opcode::VREDMIN, "DST", true, false, MemMode::None}},
      {"vfredsum.vs", {Opcode::VFREDSUM, "DST", true, false, MemMode::None}},
      {"vmv.v.v", {Opcode::VMV_VV, "DS", true, false, MemMode::None}},
      {"vmv.s.x", {Opcode::VMV_SX, "Ds", false, false, MemMode::None}},
      {"vmv.x.s", {Opcode::VMV_XS, "dS", false, false, MemMode::None}},
      {"vfmv.v.f", {Opcode::VFMV_VF, "Df", true, false, MemMode::None}},
      {"li", {Opcode::LI, "dI", false, false, MemMode::None}},
      {"add", {Opcode::ADD, "dst", false, false, MemMode::None}},
      {"addi", {Opcode::ADDI, "dsi", false, false, MemMode::None}},
      {"sub", {Opcode::SUB, "dst", false, false, MemMode::None}},
      {"mul", {Opcode::MUL, "dst", false, false, MemMode::None}},
      {"ld", {Opcode::LD, "dM", false, false, MemMode::None}},
      {"sd", {Opcode::SD, "tM", false, false, MemMode::None}},
      {"fld", {Opcode::FLD, "eM", false, false, MemMode::None}},
      {"fsd", {Opcode::FSD, "gM", false, false, MemMode::None}},
      {"fadd", {Opcode::FADD, "efg", false, false, MemMode::None}},
      {"fsub", {Opcode::FSUB, "efg", false, false, MemMode::None}},
      {"fmul", {Opcode::FMUL, "efg", false, false, MemMode::None}},
      {"fdiv", {Opcode::FDIV, "efg", false, false, MemMode::None}},
      {"beq", {Opcode::BEQ, "stB", false, false, MemMode::None}},
      {"bne", {Opcode::BNE, "stB", false, false, MemMode::None}},
      {"blt", {Opcode::BLT, "stB", false, false, MemMode::None}},
      {"bge", {Opcode::BGE, "stB", false, false, MemMode::None}},
      {"jal", {Opcode::JAL, "dB", false, false, MemMode::None}},
      {"ret", {Opcode::RET, "", false, false, MemMode::None}},
  };
  return t;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool is_ident(const std::string& s) {
  if (s.empty() || (!std::isalpha((unsigned char)s[0]) && s[0] != '_'))
    return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '.';
  });
}

uint8_t parse_reg(const std::string& tok, char file, int line) {
  if (tok.size() < 2 || tok[0] != file)
    throw AsmError("expected register '" + std::string(1, file) +
                       "N', got '" + tok + "'",
                   line);
  char* end = nullptr;
  long v = std::strtol(tok.c_str() + 1, &end, 10);
  if (*end != '\0' || end == tok.c_str() + 1)
    throw AsmError("bad register '" + tok + "'", line);
  if (v < 0 || v > 31) throw AsmError("register out of range", line);
  return (uint8_t)v;
}

bool parse_int(const std::string& tok, int64_t* out) {
  if (tok.empty()) return false;
  errno = 0;
  char* end = nullptr;
  // Hex values may use the full 64-bit range; decimals are signed.
  if (tok.rfind("0x", 0) == 0 || tok.rfind("-0x", 0) == 0) {
    bool neg = tok[0] == '-';
    uint64_t u = std::strtoull(tok.c_str() + (neg ? 1 : 0), &end, 16);
    if (*end != '\0' || errno == ERANGE) return false;
    *out = neg ? -(int64_t)u : (int64_t)u;
  } else {
    long long v = std::strtoll(tok.c_str(), &end, 10);
    if (*end != '\0' || end == tok.c_str() || errno == ERANGE) {
      // Allow unsigned decimals above INT64_MAX as raw bit patterns.
      errno = 0;
      uint64_t u = std::strtoull(tok.c_str(), &end, 10);
      if (*end != '\0' || end == tok.c_str() || errno == ERANGE) return false;
      *out = (int64_t)u;
      return true;
    }
    *out = v;
  }
  return true;
}

bool parse_f64(const std::string& tok, double* out) {
  if (tok.empty()) return false;
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(tok.c_str(), &end);
  if (*end != '\0' || end == tok.c_str()) return false;
  *out = v;
  return true;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  std::string last = trim(cur);
  if (!last.empty() || !out.empty()) out.push_back(last);
  return out;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

struct PendingInst {
  std::string mnemonic;
  std::vector<std::string> operands;
  int line;
};

struct PendingSeg {
  std::string label;
  bool fp = false;
  bool zero_form = false;
  bool explicit_base = false;
  uint64_t base = 0;
  std::vector<std::string> value_toks;
  int line = 0;
};

} // namespace

Program assemble(const std::string& source) {
  std::vector<PendingInst> insts;
  std::vector<PendingSeg> segs;
  std::map<std::string, uint32_t> text_labels;

  enum Section { None, Text, Data } section = None;
  std::istringstream in(source);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto h = raw.find('#'); h != std::string::npos) raw.resize(h);
    std::string s = trim(raw);
    if (s.empty()) continue;
    if (s == ".text") {
      section = Text;
      continue;
    }
    if (s.rfind(".data", 0) == 0 && trim(s) == ".data") {
      section = Data;
      continue;
    }
    if (s[0] == '.') throw AsmError("unknown directive '" + s + "'", line);

    if (section == Data) {
      auto colon = s.find(':');
      if (colon == std::string::npos) {
        // value continuation for the previous segment
        if (segs.empty())
          throw AsmError("data values before any segment label", line);
        for (auto& t : split_ws(s)) segs.back().value_toks.push_back(t);
        continue;
      }
      std::string head = trim(s.substr(0, colon));
      std::string rest = trim(s.substr(colon + 1));
      PendingSeg seg;
      seg.line = line;
      if (auto at = head.find('@'); at != std::string::npos) {
        seg.label = trim(head.substr(0, at));
        std::string addr = trim(head.substr(at + 1));
        int64_t v;
        if (!parse_int(addr, &v) || v < 0)
          throw AsmError("bad segment base '" + addr + "'", line);
        seg.base = (uint64_t)v;
        seg.explicit_base = true;
      } else {
        seg.label = head;
      }
      if (!is_ident(seg.label))
        throw AsmError("bad data label '" + seg.label + "'", line);
      auto toks = split_ws(rest);
      if (toks.empty())
        throw AsmError("missing data type (f64/i64/zero)", line);
      std::string ty = toks[0];
      if (ty == "f64")
        seg.fp = true;
      else if (ty == "zero")
        seg.zero_form = true;
      else if (ty != "i64")
        throw AsmError("unknown data type '" + ty + "'", line);
      seg.value_toks.assign(toks.begin() + 1, toks.end());
      segs.push_back(std::move(seg));
      continue;
    }
    if (section != Text)
      throw AsmError("statement before .text/.data directive", line);

    // Peel leading labels ("name:"), possibly followed by an instruction.
    while (true) {
      auto colon = s.find(':');
      if (colon == std::string::npos) break;
      std::string head = trim(s.substr(0, colon));
      if (!is_ident(head)) break; // not a label (e.g. no labels contain '(')
      if (text_labels.count(head))
        throw AsmError("duplicate label '" + head + "'", line);
      text_labels[head] = (uint32_t)insts.size();
      s = trim(s.substr(colon + 1));
      if (s.empty()) break;
    }
    if (s.empty()) continue;

    auto sp = s.find_first_of(" \t");
    PendingInst pi;
    pi.line = line;
    pi.mnemonic = sp == std::string::npos ? s : s.substr(0, sp);
    if (sp != std::string::npos) pi.operands = split_commas(trim(s.substr(sp)));
    insts.push_back(std::move(pi));
  }

  // Lay out data segments: explicit bases first, then pack the rest after the
  // highest explicit end (or the default base), 64-byte aligned.
  Program prog;
  constexpr uint64_t kDefaultBase = 0x10000;
  uint64_t cursor = kDefaultBase;
  std::map<std::string, uint64_t> data_labels;
  std::map<std::string, int> seg_lines;
  for (auto& ps : segs) {
    DataSegment d;
    d.label = ps.label;
    d.fp = ps.fp;
    d.explicit_base = ps.explicit_base;
    if (ps.zero_form) {
      if (ps.value_toks.size() != 1)
        throw AsmError("zero form takes one count", ps.line);
      int64_t n;
      if (!parse_int(ps.value_toks[0], &n) || n < 0)
        throw AsmError("bad zero count '" + ps.value_toks[0] + "'", ps.line);
      d.words.assign((size_t)n, 0);
    } else {
      for (auto& t : ps.value_toks) {
        if (ps.fp) {
          double v;
          if (!parse_f64(t, &v))
            throw AsmError("bad f64 value '" + t + "'", ps.line);
          uint64_t bits;
          std::memcpy(&bits, &v, 8);
          d.words.push_back(bits);
        } else {
          int64_t v;
          if (!parse_int(t, &v))
            throw AsmError("bad i64 value '" + t + "'", ps.line);
          d.words.push_back((uint64_t)v);
        }
      }
    }
    if (ps.explicit_base) {
      d.base = ps.base;
      cursor = std::max(cursor, d.base + d.size_bytes());
    }
    if (data_labels.count(d.label))
      throw AsmError("duplicate data label '" + d.label + "'", ps.line);
    data_labels[d.label] = 0; // placeholder
    seg_lines[d.label] = ps.line;
    prog.data.push_back(std::move(d));
  }
  cursor = (cursor + 63) & ~uint64_t(63);
  for (auto& d : prog.data) {
    if (!d.explicit_base) {
      d.base = cursor;
      cursor = (cursor + d.size_bytes() + 63) & ~uint64_t(63);
    }
    data_labels[d.label] = d.base;
  }
  {
    auto sorted = prog.data;
    std::sort(sorted.begin(), sorted.end(),
              [](const DataSegment& a, const DataSegment& b) {
                return a.base < b.base;
              });
    for (size_t i = 1; i < sorted.size(); ++i) {
      if (sorted[i].base < sorted[i - 1].base + sorted[i - 1].size_bytes())
        throw AsmError("overlapping data segments '" + sorted[i - 1].label +
                           "' and '" + sorted[i].label + "'",
                       seg_lines[sorted[i].label]);
    }
  }

  // Encode instructions.
  const auto& forms = form_table();
  for (auto& pi : insts) {
    auto it = forms.find(pi.mnemonic);
    if (it == forms.end())
      throw AsmError("unknown mnemonic '" + pi.mnemonic + "'", pi.line);
    const Form& f = it->second;
    Instruction inst;
    inst.op = f.op;
    inst.scalar_operand = f.scalar_operand;
    inst.mem_mode = f.mem_mode;

    auto ops = pi.operands;
    if (f.mask_ok && !ops.empty() && ops.back() == "v0.t") {
      inst.masked = true;
      ops.pop_back();
    }
    size_t want = std::strlen(f.pattern);
    if (ops.size() != want)
      throw AsmError("expected " + std::to_string(want) + " operands for '" +
                         pi.mnemonic + "', got " + std::to_string(ops.size()),
                     pi.line);
    for (size_t k = 0; k < want; ++k) {
      const std::string& tok = ops[k];
      switch (f.pattern[k]) {
        case 'D': inst.vd = parse_reg(tok, 'v', pi.line); break;
        case 'S': inst.vs1 = parse_reg(tok, 'v', pi.line); break;
        case 'T': inst.vs2 = parse_reg(tok, 'v', pi.line); break;
        case 'd': inst.rd = parse_reg(tok, 'x', pi.line); break;
        case 's': inst.rs1 = parse_reg(tok, 'x', pi.line); break;
        case 't': inst.rs2 = parse_reg(tok, 'x', pi.line); break;
        case 'e': inst.rd = parse_reg(tok, 'f', pi.line); break;
        case 'f': inst.rs1 = parse_reg(tok, 'f', pi.line); break;
        case 'g': inst.rs2 = parse_reg(tok, 'f', pi.line); break;
        case 'i': {
          if (!parse_int(tok, &inst.imm))
            throw AsmError("bad immediate '" + tok + "'", pi.line);
          break;
        }
        case 'I': {
          if (parse_int(tok, &inst.imm)) break;
          auto dl = data_labels.find(tok);
          if (dl == data_labels.end())
            throw AsmError("unresolved label '" + tok + "'", pi.line);
          inst.imm = (int64_t)dl->second;
          break;
        }
        case 'B': {
          if (parse_int(tok, &inst.imm)) break;
          auto tl = text_labels.find(tok);
          if (tl == text_labels.end())
            throw AsmError("unresolved label '" + tok + "'", pi.line);
          inst.imm = (int64_t)tl->second;
          break;
        }
        case 'M': {
          auto lp = tok.find('(');
          auto rp = tok.find(')');
          if (lp == std::string::npos || rp == std::string::npos || rp < lp)
            throw AsmError("bad memory operand '" + tok + "'", pi.line);
          std::string off = trim(tok.substr(0, lp));
          if (off.empty())
            inst.imm = 0;
          else if (!parse_int(off, &inst.imm))
            throw AsmError("bad offset '" + off + "'", pi.line);
          inst.rs1 = parse_reg(trim(tok.substr(lp + 1, rp - lp - 1)), 'x',
                               pi.line);
          break;
        }
        case 'P': {
          if (tok.size() < 3 || tok.front() != '(' || tok.back() != ')')
            throw AsmError("bad address operand '" + tok + "'", pi.line);
          inst.rs1 =
              parse_reg(trim(tok.substr(1, tok.size() - 2)), 'x', pi.line);
          break;
        }
        default: throw AsmError("internal: bad pattern", pi.line);
      }
    }
    prog.text.push_back(inst);
  }

  for (auto& [name, idx] : text_labels) {
    if (idx > prog.text.size())
      throw AsmError("label '" + name + "' past end of text", line);
  }
  if (auto it = text_labels.find("main"); it != text_labels.end())
    prog.entry = it->second;
  return prog;
}

std::string disassemble(const Program& p) {
  std::ostringstream out;
  if (!p.data.empty()) {
    out << ".data\n";
    for (const auto& d : p.data) {
      out << d.label;
      if (d.explicit_base) {
        char buf[32];
        std::snprintf(buf, sizeof buf, " @0x%" PRIx64, d.base);
        out << buf;
      }
      bool all_zero =
          !d.fp && std::all_of(d.words.begin(), d.words.end(),
                               [](uint64_t w) { return w == 0; });
      if (all_zero && d.words.size() > 8) {
        out << ": zero " << d.words.size() << "\n";
        continue;
      }
      out << (d.fp ? ": f64" : ": i64");
      int col = 0;
      for (uint64_t w : d.words) {
        if (col == 16) {
          out << "\n ";
          col = 0;
        }
        char buf[48];
        if (d.fp) {
          double v;
          std::memcpy(&v, &w, 8);
          std::snprintf(buf, sizeof buf, " %a", v);
        } else {
          std::snprintf(buf, sizeof buf, " %" PRId64, (int64_t)w);
        }
        out << buf;
        ++col;
      }
      out << "\n";
    }
  }
  out << ".text\n";

  // Collect branch/jump targets so they can be labeled.
  std::map<uint32_t, std::string> labels;
  labels[p.entry] = "main";
  for (const auto& inst : p.text) {
    switch (inst.op) {
      case Opcode::BEQ: case Opcode::BNE: case Opcode::BLT:
      case Opcode::BGE: case Opcode::JAL: {
        uint32_t tgt = (uint32_t)inst.imm;
        if (!labels.count(tgt)) labels[tgt] = "L" + std::to_string(tgt);
        break;
      }
      default: break;
    }
  }

  // Data labels for li immediates that exactly match a segment base.
  std::map<uint64_t, std::string> seg_by_base;
  for (const auto& d : p.data) seg_by_base[d.base] = d.label;

  const auto& forms = form_table();
  for (uint32_t i = 0; i < p.text.size(); ++i) {
    if (auto l = labels.find(i); l != labels.end())
      out << l->second << ":\n";
    const Instruction& inst = p.text[i];
    std::string mn = mnemonic(inst);
    const Form& f = forms.at(mn);
    out << "  " << mn;
    const char* pat = f.pattern;
    for (size_t k = 0; pat[k]; ++k) {
      out << (k == 0 ? " " : ", ");
      switch (pat[k]) {
        case 'D': out << "v" << (int)inst.vd; break;
        case 'S': out << "v" << (int)inst.vs1; break;
        case 'T': out << "v" << (int)inst.vs2; break;
        case 'd': out << "x" << (int)inst.rd; break;
        case 's': out << "x" << (int)inst.rs1; break;
        case 't': out << "x" << (int)inst.rs2; break;
        case 'e': out << "f" << (int)inst.rd; break;
        case 'f': out << "f" << (int)inst.rs1; break;
        case 'g': out << "f" << (int)inst.rs2; break;
        case 'i': out << inst.imm; break;
        case 'I': {
          auto sb = seg_by_base.find((uint64_t)inst.imm);
          if (sb != seg_by_base.end())
            out << sb->second;
          else
            out << inst.imm;
          break;
        }
        case 'B': out << labels.at((uint32_t)inst.imm); break;
        case 'M': out << inst.imm << "(x" << (int)inst.rs1 << ")"; break;
        case 'P': out << "(x" << (int)inst.rs1 << ")"; break;
      }
    }
    if (inst.masked) out << ", v0.t";
    out << "\n";
  }
  if (auto l = labels.find((uint32_t)p.text.size()); l != labels.end())
    out << l->second << ":\n";
  return out.str();
}

} // namespace vsim
