#include "vsim/kernels.hpp"

#include <cstdio>

namespace vsim {

uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double splitmix_double(uint64_t& state, double lo, double hi) {
  double u = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

const char* to_string(KernelSize s) {
  switch (s) {
    case KernelSize::Tiny: return "tiny";
    case KernelSize::Small: return "small";
    case KernelSize::Medium: return "medium";
  }
  return "?";
}

namespace {

// Hex-float formatting round-trips exactly through the assembler's strtod.
std::string fhex(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%a", v);
  return buf;
}

std::string num(size_t v) { return std::to_string(v); }

void emit_f64(std::string& out, const std::string& label,
              const std::vector<double>& v) {
  out += label + ": f64";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i > 0 && i % 4 == 0) out += "\n  ";
    out += " " + fhex(v[i]);
  }
  out += "\n";
}

void emit_i64(std::string& out, const std::string& label,
              const std::vector<int64_t>& v) {
  out += label + ": i64";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i > 0 && i % 8 == 0) out += "\n  ";
    out += " " + std::to_string(v[i]);
  }
  out += "\n";
}

void emit_zero(std::string& out, const std::string& label, size_t n) {
  out += label + ": zero " + std::to_string(n) + "\n";
}

std::vector<double> rand_f64(uint64_t& st, size_t n, double lo, double hi) {
  std::vector<double> v(n);
  for (auto& x : v) x = splitmix_double(st, lo, hi);
  return v;
}

std::vector<int64_t> rand_i64(uint64_t& st, size_t n, int64_t bound) {
  std::vector<int64_t> v(n);
  for (auto& x : v) x = static_cast<int64_t>(splitmix64(st) % bound);
  return v;
}

// ---------------------------------------------------------------------------
// blackscholes: synthetic option pricing over n contracts. sqrt(t) comes
// from four Newton steps so the scalar twin can reproduce it with fdiv/fadd/
// fmul; the cumulative-normal is a software polynomial with coefficients in
// the data segment, used identically by both versions. Results land in an
// array of (price, delta) pairs via strided stores. Every vector instruction
// sits inside the strip loop, so the operation count is MVL-invariant.
// ---------------------------------------------------------------------------
KernelSource make_blackscholes(uint64_t& st, size_t n) {
  std::string data = ".data\n";
  emit_f64(data, "bs_s", rand_f64(st, n, 10.0, 200.0));
  emit_f64(data, "bs_k", rand_f64(st, n, 10.0, 200.0));
  emit_f64(data, "bs_t", rand_f64(st, n, 0.1, 2.0));
  emit_f64(data, "bs_vol", rand_f64(st, n, 0.05, 0.5));
  emit_zero(data, "bs_out", 2 * n);
  emit_f64(data, "bs_consts",
           {0.5, 1.0, 0.05, 0.004, -0.06, 0.35, 0.5, 0.7});

  std::string vec = data +
      ".text\n"
      "main: li x9, 2\n"
      "li x8, 8\n"
      "li x5, " + num(n) + "\n"
      "li x10, bs_s\n"
      "li x11, bs_k\n"
      "li x12, bs_t\n"
      "li x13, bs_vol\n"
      "li x14, bs_out\n"
      "li x15, bs_consts\n"
      "fld f1, 0(x15)\n"   // 0.5
      "fld f2, 8(x15)\n"   // 1.0
      "fld f3, 16(x15)\n"  // rate
      "fld f4, 24(x15)\n"  // c3
      "fld f5, 32(x15)\n"  // c2
      "fld f6, 40(x15)\n"  // c1
      "fld f7, 48(x15)\n"  // c0
      "fld f8, 56(x15)\n"  // 0.7
      "addi x16, x14, 8\n"
      "loop: vsetvl x6, x5\n"
      "vle.v v1, (x10)\n"
      "vle.v v2, (x11)\n"
      "vle.v v3, (x12)\n"
      "vle.v v4, (x13)\n"
      "vfmul.vf v5, v3, f2\n"  // y = t, Newton seed
      "vfdiv.vv v6, v3, v5\n"
      "vfadd.vv v5, v5, v6\n"
      "vfmul.vf v5, v5, f1\n"
      "vfdiv.vv v6, v3, v5\n"
      "vfadd.vv v5, v5, v6\n"
      "vfmul.vf v5, v5, f1\n"
      "vfdiv.vv v6, v3, v5\n"
      "vfadd.vv v5, v5, v6\n"
      "vfmul.vf v5, v5, f1\n"
      "vfdiv.vv v6, v3, v5\n"
      "vfadd.vv v5, v5, v6\n"
      "vfmul.vf v5, v5, f1\n"      // y ~ sqrt(t)
      "vfmul.vv v7, v4, v5\n"      // vol*sqrt(t)
      "vfdiv.vv v8, v1, v2\n"      // s/k
      "vfsub.vf v9, v8, f2\n"
      "vfmacc.vf v9, v3, f3\n"     // + t*rate
      "vfdiv.vv v10, v9, v7\n"     // d
      "vfmv.v.f v11, f4\n"
      "vfmul.vv v11, v11, v10\n"
      "vfadd.vf v11, v11, f5\n"
      "vfmul.vv v11, v11, v10\n"
      "vfadd.vf v11, v11, f6\n"
      "vfmul.vv v11, v11, v10\n"
      "vfadd.vf v11, v11, f7\n"    // p = poly(d)
      "vfmv.v.f v12, f2\n"
      "vfmul.vf v13, v11, f8\n"
      "vfsub.vv v12, v12, v13\n"   // q = 1 - 0.7p
      "vfmul.vv v14, v1, v11\n"
      "vfmul.vv v15, v2, v12\n"
      "vfsub.vv v16, v14, v15\n"   // price
      "vfdiv.vv v17, v11, v7\n"    // delta
      "vsse.v v16, (x14), x9\n"
      "vsse.v v17, (x16), x9\n"
      "mul x7, x6, x8\n"
      "add x10, x10, x7\n"
      "add x11, x11, x7\n"
      "add x12, x12, x7\n"
      "add x13, x13, x7\n"
      "add x14, x14, x7\n"
      "add x14, x14, x7\n"
      "add x16, x16, x7\n"
      "add x16, x16, x7\n"
      "sub x5, x5, x6\n"
      "bne x5, x0, loop\n"
      "ret\n";

  std::string sca = data +
      ".text\n"
      "main: li x5, " + num(n) + "\n"
      "li x10, bs_s\n"
      "li x11, bs_k\n"
      "li x12, bs_t\n"
      "li x13, bs_vol\n"
      "li x14, bs_out\n"
      "li x15, bs_consts\n"
      "fld f1, 0(x15)\n"
      "fld f2, 8(x15)\n"
      "fld f3, 16(x15)\n"
      "fld f4, 24(x15)\n"
      "fld f5, 32(x15)\n"
      "fld f6, 40(x15)\n"
      "fld f7, 48(x15)\n"
      "fld f8, 56(x15)\n"
      "loop: fld f10, 0(x10)\n"
      "fld f11, 0(x11)\n"
      "fld f12, 0(x12)\n"
      "fld f13, 0(x13)\n"
      "fmul f14, f12, f2\n"
      "fdiv f15, f12, f14\n"
      "fadd f14, f14, f15\n"
      "fmul f14, f14, f1\n"
      "fdiv f15, f12, f14\n"
      "fadd f14, f14, f15\n"
      "fmul f14, f14, f1\n"
      "fdiv f15, f12, f14\n"
      "fadd f14, f14, f15\n"
      "fmul f14, f14, f1\n"
      "fdiv f15, f12, f14\n"
      "fadd f14, f14, f15\n"
      "fmul f14, f14, f1\n"
      "fmul f16, f13, f14\n"
      "fdiv f17, f10, f11\n"
      "fsub f18, f17, f2\n"
      "fmul f19, f12, f3\n"
      "fadd f18, f18, f19\n"
      "fdiv f20, f18, f16\n"
      "fmul f21, f4, f20\n"
      "fadd f21, f21, f5\n"
      "fmul f21, f21, f20\n"
      "fadd f21, f21, f6\n"
      "fmul f21, f21, f20\n"
      "fadd f21, f21, f7\n"
      "fmul f22, f21, f8\n"
      "fsub f23, f2, f22\n"
      "fmul f24, f10, f21\n"
      "fmul f25, f11, f23\n"
      "fsub f26, f24, f25\n"
      "fdiv f27, f21, f16\n"
      "fsd f26, 0(x14)\n"
      "fsd f27, 8(x14)\n"
      "addi x10, x10, 8\n"
      "addi x11, x11, 8\n"
      "addi x12, x12, 8\n"
      "addi x13, x13, 8\n"
      "addi x14, x14, 16\n"
      "addi x5, x5, -1\n"
      "bne x5, x0, loop\n"
      "ret\n";

  return {"blackscholes", vec, sca,
          "synthetic option pricing: Newton sqrt, polynomial CDF, "
          "strided (price,delta) output pairs",
          {"bs_out"},
          "exact",
          {"unit_stride", "strided"}};
}

// ---------------------------------------------------------------------------
// canneal_swapcost: per-trial routing cost of one picked node. A fan_locs
// array of byte offsets drives indexed loads of the neighbour coordinates;
// |dx|+|dy| accumulates through an integer reduction whose scalar result the
// core compares against a swap threshold. Fan counts are capped at 22 with
// at least one full-fan trial, so any MVL >= 32 runs every trial in a single
// strip while MVL=8 needs up to three.
// ---------------------------------------------------------------------------
KernelSource make_canneal(uint64_t& st, size_t trials, size_t nodes) {
  std::vector<int64_t> fc(trials);
  for (size_t i = 0; i < trials; ++i)
    fc[i] = static_cast<int64_t>(splitmix64(st) % 23);
  fc[0] = 22;  // guarantee one trial that cannot fit a single MVL=8 strip
  std::vector<int64_t> fan;
  for (size_t i = 0; i < trials; ++i)
    for (int64_t j = 0; j < fc[i]; ++j)
      fan.push_back(static_cast<int64_t>((splitmix64(st) % nodes) * 8));

  std::string data = ".data\n";
  emit_i64(data, "cn_xs", rand_i64(st, nodes, 4096));
  emit_i64(data, "cn_ys", rand_i64(st, nodes, 4096));
  emit_i64(data, "cn_fc", fc);
  emit_i64(data, "cn_fan", fan);
  emit_i64(data, "cn_x0", rand_i64(st, trials, 4096));
  emit_i64(data, "cn_y0", rand_i64(st, trials, 4096));
  emit_zero(data, "cn_cost", trials);
  emit_zero(data, "cn_swaps", 1);
  emit_zero(data, "cn_total", 1);

  std::string head =
      "li x28, 30000\n"  // swap threshold
      "li x29, 0\n"      // swap count
      "li x30, 0\n"      // cost total
      "li x10, cn_fc\n"
      "li x11, cn_x0\n"
      "li x12, cn_y0\n"
      "li x13, cn_fan\n"
      "li x14, cn_cost\n"
      "li x15, cn_xs\n"
      "li x16, cn_ys\n"
      "li x5, " + num(trials) + "\n";
  std::string tail =
      "extract: " + std::string("") +
      "%EXTRACT%"
      "sd x25, 0(x14)\n"
      "add x30, x30, x25\n"
      "bge x25, x28, noswap\n"
      "addi x29, x29, 1\n"
      "noswap: addi x10, x10, 8\n"
      "addi x11, x11, 8\n"
      "addi x12, x12, 8\n"
      "addi x14, x14, 8\n"
      "addi x5, x5, -1\n"
      "bne x5, x0, trial\n"
      "li x17, cn_swaps\n"
      "sd x29, 0(x17)\n"
      "li x17, cn_total\n"
      "sd x30, 0(x17)\n"
      "ret\n";

  std::string vec = data +
      ".text\n"
      "main: li x8, 8\n"
      "li x24, 1\n"
      "li x26, -1\n" +
      head +
      "trial: ld x20, 0(x10)\n"
      "ld x21, 0(x11)\n"
      "ld x22, 0(x12)\n"
      "vsetvl x23, x24\n"
      "vmv.s.x v9, x0\n"        // cost accumulator = 0
      "add x17, x20, x0\n"
      "beq x17, x0, extract\n"
      "strip: vsetvl x6, x17\n"
      "vle.v v1, (x13)\n"       // fan_locs byte offsets
      "vlxe.v v2, (x15), v1\n"  // neighbour x
      "vlxe.v v3, (x16), v1\n"  // neighbour y
      "vsub.vx v2, v2, x21\n"
      "vsub.vx v3, v3, x22\n"
      "vmul.vx v4, v2, x26\n"
      "vmax.vv v2, v2, v4\n"    // |dx|
      "vmul.vx v4, v3, x26\n"
      "vmax.vv v3, v3, v4\n"    // |dy|
      "vadd.vv v2, v2, v3\n"
      "vredsum.vs v9, v2, v9\n"
      "mul x7, x6, x8\n"
      "add x13, x13, x7\n"
      "sub x17, x17, x6\n"
      "bne x17, x0, strip\n" +
      tail;
  vec.replace(vec.find("%EXTRACT%"), 9, "vmv.x.s x25, v9\n");

  std::string sca = data +
      ".text\n"
      "main: " + head +
      "trial: ld x20, 0(x10)\n"
      "ld x21, 0(x11)\n"
      "ld x22, 0(x12)\n"
      "li x25, 0\n"
      "add x17, x20, x0\n"
      "beq x17, x0, extract\n"
      "floop: ld x7, 0(x13)\n"
      "add x9, x15, x7\n"
      "ld x9, 0(x9)\n"
      "sub x9, x9, x21\n"     // dx
      "sub x6, x0, x9\n"
      "blt x9, x6, negx\n"
      "jal x0, donex\n"
      "negx: add x9, x6, x0\n"
      "donex: add x18, x16, x7\n"
      "ld x18, 0(x18)\n"
      "sub x18, x18, x22\n"   // dy
      "sub x6, x0, x18\n"
      "blt x18, x6, negy\n"
      "jal x0, doney\n"
      "negy: add x18, x6, x0\n"
      "doney: add x9, x9, x18\n"
      "add x25, x25, x9\n"
      "addi x13, x13, 8\n"
      "addi x17, x17, -1\n"
      "bne x17, x0, floop\n" +
      tail;
  sca.replace(sca.find("%EXTRACT%"), 9, "");

  return {"canneal_swapcost", vec, sca,
          "per-node swap cost: indexed coordinate gathers, integer "
          "|dx|+|dy| reduction, scalar swap decision per trial",
          {"cn_cost", "cn_swaps", "cn_total"},
          "exact",
          {"unit_stride", "indexed", "reductions", "scalar_comm"}};
}

// ---------------------------------------------------------------------------
// jacobi2d: K ping-pong sweeps of the 5-point stencil over a (W-2)x(H-2)
// interior. West/east neighbours come from vslide1up/vslide1down; the seam
// values are injected from scalar registers - halo columns via scalar loads
// (never written by the vector side), interior seams via a one-element peek
// load plus the carried last element of the previous strip.
// ---------------------------------------------------------------------------
KernelSource make_jacobi2d(uint64_t& st, size_t W, size_t H, size_t K) {
  std::vector<double> a = rand_f64(st, W * H, 0.0, 1.0);
  std::vector<double> b = a;
  for (size_t r = 1; r + 1 < H; ++r)
    for (size_t c = 1; c + 1 < W; ++c) b[r * W + c] = 0.0;

  std::string data = ".data\n";
  emit_f64(data, "jc_a", a);
  emit_f64(data, "jc_b", b);
  emit_f64(data, "jc_consts", {0.2});

  const std::string W8 = num(W * 8);        // row stride in bytes
  const std::string E8 = num((W - 1) * 8);  // east halo column offset
  const std::string W2 = num(W - 2);        // interior columns
  const std::string H2 = num(H - 2);        // interior rows

  std::string vec = data +
      ".text\n"
      "main: li x8, 8\n"
      "li x24, 1\n"
      "li x26, " + W8 + "\n"
      "li x15, jc_consts\n"
      "fld f1, 0(x15)\n"
      "li x10, jc_a\n"
      "li x11, jc_b\n"
      "li x9, " + num(K) + "\n"
      "sweep: add x17, x10, x26\n"
      "add x18, x11, x26\n"
      "li x14, " + H2 + "\n"
      "rows: ld x20, 0(x17)\n"     // west halo of this row
      "ld x25, " + E8 + "(x17)\n"  // east halo of this row
      "addi x12, x17, 8\n"
      "addi x13, x18, 8\n"
      "li x5, " + W2 + "\n"
      "cols: vsetvl x6, x5\n"
      "vle.v v1, (x12)\n"          // mid
      "sub x22, x5, x6\n"
      "beq x22, x0, lastcol\n"
      "mul x7, x6, x8\n"
      "add x7, x12, x7\n"
      "vsetvl x23, x24\n"          // one-element peek at the next strip
      "vle.v v7, (x7)\n"
      "vmv.x.s x21, v7\n"
      "vsetvl x23, x6\n"
      "jal x0, haveeast\n"
      "lastcol: add x21, x25, x0\n"
      "haveeast: vslide1up.vx v4, v1, x20\n"
      "vslide1down.vx v5, v1, x21\n"
      "sub x7, x12, x26\n"
      "vle.v v2, (x7)\n"           // north
      "add x7, x12, x26\n"
      "vle.v v3, (x7)\n"           // south
      "vfadd.vv v6, v1, v2\n"
      "vfadd.vv v6, v6, v3\n"
      "vfadd.vv v6, v6, v4\n"
      "vfadd.vv v6, v6, v5\n"
      "vfmul.vf v6, v6, f1\n"
      "vse.v v6, (x13)\n"
      "addi x7, x6, -1\n"
      "vslidedown.vx v7, v1, x7\n"
      "vmv.x.s x20, v7\n"          // west carry = last mid element
      "mul x7, x6, x8\n"
      "add x12, x12, x7\n"
      "add x13, x13, x7\n"
      "add x5, x22, x0\n"
      "bne x5, x0, cols\n"
      "add x17, x17, x26\n"
      "add x18, x18, x26\n"
      "addi x14, x14, -1\n"
      "bne x14, x0, rows\n"
      "add x16, x10, x0\n"
      "add x10, x11, x0\n"
      "add x11, x16, x0\n"
      "addi x9, x9, -1\n"
      "bne x9, x0, sweep\n"
      "ret\n";

  std::string sca = data +
      ".text\n"
      "main: li x26, " + W8 + "\n"
      "li x15, jc_consts\n"
      "fld f1, 0(x15)\n"
      "li x10, jc_a\n"
      "li x11, jc_b\n"
      "li x9, " + num(K) + "\n"
      "sweep: add x17, x10, x26\n"
      "add x18, x11, x26\n"
      "li x14, " + H2 + "\n"
      "rows: addi x12, x17, 8\n"
      "addi x13, x18, 8\n"
      "li x5, " + W2 + "\n"
      "cols: fld f2, 0(x12)\n"
      "sub x7, x12, x26\n"
      "fld f3, 0(x7)\n"
      "add x7, x12, x26\n"
      "fld f4, 0(x7)\n"
      "fld f5, -8(x12)\n"
      "fld f6, 8(x12)\n"
      "fadd f7, f2, f3\n"
      "fadd f7, f7, f4\n"
      "fadd f7, f7, f5\n"
      "fadd f7, f7, f6\n"
      "fmul f7, f7, f1\n"
      "fsd f7, 0(x13)\n"
      "addi x12, x12, 8\n"
      "addi x13, x13, 8\n"
      "addi x5, x5, -1\n"
      "bne x5, x0, cols\n"
      "add x17, x17, x26\n"
      "add x18, x18, x26\n"
      "addi x14, x14, -1\n"
      "bne x14, x0, rows\n"
      "add x16, x10, x0\n"
      "add x10, x11, x0\n"
      "add x11, x16, x0\n"
      "addi x9, x9, -1\n"
      "bne x9, x0, sweep\n"
      "ret\n";

  return {"jacobi2d", vec, sca,
          "5-point stencil, ping-pong buffers: slide-aligned west/east "
          "neighbours with scalar seam injection, " + num(K) + " sweeps",
          {"jc_a", "jc_b"},
          "exact",
          {"unit_stride", "slides", "scalar_comm"}};
}

// ---------------------------------------------------------------------------
// particle_filter: the resampling inner loops. Phase 1 reweights flagged
// particles under a mask and counts them with vpopc; phase 2 normalises by
// the vfredsum total broadcast through vrgather; phase 3 answers random
// queries against the cumulative-weight array with compare -> mask ->
// vfirst/vpopc, scanning every strip so results are MVL-independent.
// ---------------------------------------------------------------------------
KernelSource make_particle_filter(uint64_t& st, size_t np, size_t nq) {
  std::vector<int64_t> flags(np);
  for (auto& f : flags) f = (splitmix64(st) % 10) < 7 ? 1 : 0;
  std::vector<double> cdf(np);
  double acc = 0.0;
  for (auto& c : cdf) {
    acc += splitmix_double(st, 0.01, 1.0);
    c = acc;
  }

  std::string data = ".data\n";
  emit_f64(data, "pp_w", rand_f64(st, np, 0.1, 1.0));
  emit_f64(data, "pp_like", rand_f64(st, np, 0.2, 5.0));
  emit_i64(data, "pp_flag", flags);
  emit_f64(data, "pp_cdf", cdf);
  emit_f64(data, "pp_u", rand_f64(st, nq, 0.0, acc));
  emit_zero(data, "pp_wout", np);
  emit_zero(data, "pp_norm", np);
  emit_zero(data, "pp_sum", 1);
  emit_zero(data, "pp_count", 1);
  emit_zero(data, "pp_res", nq);
  emit_zero(data, "pp_elig", nq);
  emit_f64(data, "pp_consts", {0.0});

  std::string vec = data +
      ".text\n"
      "main: li x8, 8\n"
      "li x24, 1\n"
      "li x9, 1\n"
      "li x27, 0\n"
      "li x10, pp_w\n"
      "li x11, pp_like\n"
      "li x12, pp_flag\n"
      "li x13, pp_wout\n"
      "li x5, " + num(np) + "\n"
      "vsetvl x23, x24\n"
      "vmv.s.x v10, x0\n"          // weight total = +0.0
      "p1: vsetvl x6, x5\n"
      "vle.v v1, (x10)\n"
      "vle.v v2, (x11)\n"
      "vle.v v3, (x12)\n"
      "vmseq.vx v0, v3, x9\n"      // mask: flagged particles
      "vmv.v.v v4, v1\n"
      "vfmul.vv v4, v1, v2, v0.t\n"
      "vse.v v4, (x13)\n"
      "vpopc.m x7, v0\n"
      "add x27, x27, x7\n"
      "vfredsum.vs v10, v4, v10\n"
      "mul x7, x6, x8\n"
      "add x10, x10, x7\n"
      "add x11, x11, x7\n"
      "add x12, x12, x7\n"
      "add x13, x13, x7\n"
      "sub x5, x5, x6\n"
      "bne x5, x0, p1\n"
      "li x14, pp_count\n"
      "sd x27, 0(x14)\n"
      "li x14, pp_sum\n"
      "vsetvl x23, x24\n"
      "vse.v v10, (x14)\n"
      "li x13, pp_wout\n"
      "li x15, pp_norm\n"
      "li x5, " + num(np) + "\n"
      "p2: vsetvl x6, x5\n"
      "vle.v v5, (x13)\n"
      "vsub.vv v12, v5, v5\n"      // zero index vector
      "vrgather.vv v11, v10, v12\n"
      "vfdiv.vv v13, v5, v11\n"
      "vse.v v13, (x15)\n"
      "mul x7, x6, x8\n"
      "add x13, x13, x7\n"
      "add x15, x15, x7\n"
      "sub x5, x5, x6\n"
      "bne x5, x0, p2\n"
      "li x16, pp_u\n"
      "li x17, pp_res\n"
      "li x18, pp_elig\n"
      "li x14, " + num(nq) + "\n"
      "query: ld x20, 0(x16)\n"
      "li x21, -1\n"
      "li x22, 0\n"
      "li x19, 0\n"
      "li x13, pp_cdf\n"
      "li x5, " + num(np) + "\n"
      "p3: vsetvl x6, x5\n"
      "vle.v v1, (x13)\n"
      "vmslt.vx v2, v1, x20\n"
      "vmseq.vx v3, v2, x0\n"      // cdf >= u
      "vpopc.m x7, v3\n"
      "add x22, x22, x7\n"
      "bge x21, x0, qskip\n"
      "vfirst.m x7, v3\n"
      "blt x7, x0, qskip\n"
      "add x21, x19, x7\n"
      "qskip: add x19, x19, x6\n"
      "mul x7, x6, x8\n"
      "add x13, x13, x7\n"
      "sub x5, x5, x6\n"
      "bne x5, x0, p3\n"
      "sd x21, 0(x17)\n"
      "sd x22, 0(x18)\n"
      "addi x16, x16, 8\n"
      "addi x17, x17, 8\n"
      "addi x18, x18, 8\n"
      "addi x14, x14, -1\n"
      "bne x14, x0, query\n"
      "ret\n";

  std::string sca = data +
      ".text\n"
      "main: li x9, 1\n"
      "li x27, 0\n"
      "li x15, pp_consts\n"
      "fld f9, 0(x15)\n"
      "fadd f20, f9, f9\n"         // weight total = +0.0
      "li x10, pp_w\n"
      "li x11, pp_like\n"
      "li x12, pp_flag\n"
      "li x13, pp_wout\n"
      "li x5, " + num(np) + "\n"
      "p1: ld x7, 0(x12)\n"
      "fld f1, 0(x10)\n"
      "beq x7, x9, upd\n"
      "jal x0, stor\n"
      "upd: fld f2, 0(x11)\n"
      "fmul f1, f1, f2\n"
      "stor: fsd f1, 0(x13)\n"
      "fadd f20, f20, f1\n"
      "add x27, x27, x7\n"
      "addi x10, x10, 8\n"
      "addi x11, x11, 8\n"
      "addi x12, x12, 8\n"
      "addi x13, x13, 8\n"
      "addi x5, x5, -1\n"
      "bne x5, x0, p1\n"
      "li x14, pp_count\n"
      "sd x27, 0(x14)\n"
      "li x14, pp_sum\n"
      "fsd f20, 0(x14)\n"
      "li x13, pp_wout\n"
      "li x15, pp_norm\n"
      "li x5, " + num(np) + "\n"
      "p2: fld f3, 0(x13)\n"
      "fdiv f4, f3, f20\n"
      "fsd f4, 0(x15)\n"
      "addi x13, x13, 8\n"
      "addi x15, x15, 8\n"
      "addi x5, x5, -1\n"
      "bne x5, x0, p2\n"
      "li x16, pp_u\n"
      "li x17, pp_res\n"
      "li x18, pp_elig\n"
      "li x14, " + num(nq) + "\n"
      "query: ld x20, 0(x16)\n"
      "li x21, -1\n"
      "li x22, 0\n"
      "li x19, 0\n"
      "li x13, pp_cdf\n"
      "li x5, " + num(np) + "\n"
      "scan: ld x7, 0(x13)\n"
      "blt x7, x20, notge\n"
      "addi x22, x22, 1\n"
      "bge x21, x0, notge\n"
      "add x21, x19, x0\n"
      "notge: addi x19, x19, 1\n"
      "addi x13, x13, 8\n"
      "addi x5, x5, -1\n"
      "bne x5, x0, scan\n"
      "sd x21, 0(x17)\n"
      "sd x22, 0(x18)\n"
      "addi x16, x16, 8\n"
      "addi x17, x17, 8\n"
      "addi x18, x18, 8\n"
      "addi x14, x14, -1\n"
      "bne x14, x0, query\n"
      "ret\n";

  return {"particle_filter", vec, sca,
          "resampling loops: masked reweighting with vpopc, vfredsum "
          "normalisation broadcast via vrgather, cumulative-weight query "
          "search with vfirst",
          {"pp_wout", "pp_norm", "pp_sum", "pp_count", "pp_res", "pp_elig"},
          "exact",
          {"unit_stride", "masked", "reductions", "scalar_comm"}};
}

// ---------------------------------------------------------------------------
// pathfinder: dynamic program over a rows x 8 cost wall. The running row
// lives in a vector register across all steps; left/right neighbours come
// from vslide1up/vslide1down with a sentinel injected at the borders. The
// column count is a fixed property of the input, so every configuration
// requests the same vector length and the operation count is exactly
// MVL-invariant.
// ---------------------------------------------------------------------------
KernelSource make_pathfinder(uint64_t& st, size_t rows) {
  std::string data = ".data\n";
  emit_i64(data, "pf_wall", rand_i64(st, rows * 8, 100));
  emit_zero(data, "pf_row", 8);
  emit_zero(data, "pf_min", 1);

  std::string vec = data +
      ".text\n"
      "main: li x24, 8\n"
      "li x20, 1000000000\n"  // border sentinel
      "li x10, pf_wall\n"
      "li x5, " + num(rows) + "\n"
      "vsetvl x6, x24\n"
      "vle.v v1, (x10)\n"     // DP row = wall row 0
      "addi x10, x10, 64\n"
      "addi x5, x5, -1\n"
      "steps: vslide1up.vx v2, v1, x20\n"
      "vslide1down.vx v3, v1, x20\n"
      "vmin.vv v2, v2, v3\n"
      "vmin.vv v2, v2, v1\n"
      "vle.v v4, (x10)\n"
      "vadd.vv v1, v2, v4\n"
      "addi x10, x10, 64\n"
      "addi x5, x5, -1\n"
      "bne x5, x0, steps\n"
      "li x11, pf_row\n"
      "vse.v v1, (x11)\n"
      "vmv.s.x v5, x20\n"
      "vredmin.vs v6, v1, v5\n"
      "li x12, pf_min\n"
      "li x24, 1\n"
      "vsetvl x23, x24\n"
      "vse.v v6, (x12)\n"
      "ret\n";

  std::string sca = data +
      ".text\n"
      "main: li x20, 1000000000\n"
      "li x10, pf_wall\n"
      "li x11, pf_row\n"
      "li x5, 8\n"
      "add x12, x10, x0\n"
      "add x13, x11, x0\n"
      "copy: ld x7, 0(x12)\n"
      "sd x7, 0(x13)\n"
      "addi x12, x12, 8\n"
      "addi x13, x13, 8\n"
      "addi x5, x5, -1\n"
      "bne x5, x0, copy\n"
      "addi x10, x10, 64\n"
      "li x5, " + num(rows - 1) + "\n"
      "steps: add x21, x20, x0\n"  // previous-left = sentinel
      "li x6, 8\n"
      "add x12, x10, x0\n"
      "add x13, x11, x0\n"
      "cols: ld x22, 0(x13)\n"     // current old value
      "addi x7, x6, -1\n"
      "beq x7, x0, lastc\n"
      "ld x23, 8(x13)\n"
      "jal x0, havec\n"
      "lastc: add x23, x20, x0\n"
      "havec: add x25, x21, x0\n"
      "blt x25, x23, skA\n"
      "add x25, x23, x0\n"
      "skA: blt x25, x22, skB\n"
      "add x25, x22, x0\n"
      "skB: ld x26, 0(x12)\n"
      "add x26, x26, x25\n"
      "sd x26, 0(x13)\n"
      "add x21, x22, x0\n"
      "addi x12, x12, 8\n"
      "addi x13, x13, 8\n"
      "addi x6, x6, -1\n"
      "bne x6, x0, cols\n"
      "addi x10, x10, 64\n"
      "addi x5, x5, -1\n"
      "bne x5, x0, steps\n"
      "add x25, x20, x0\n"
      "li x6, 8\n"
      "add x13, x11, x0\n"
      "mins: ld x22, 0(x13)\n"
      "bge x22, x25, skC\n"
      "add x25, x22, x0\n"
      "skC: addi x13, x13, 8\n"
      "addi x6, x6, -1\n"
      "bne x6, x0, mins\n"
      "li x12, pf_min\n"
      "sd x25, 0(x12)\n"
      "ret\n";

  return {"pathfinder", vec, sca,
          "min-path dynamic program: slide-aligned neighbours with border "
          "sentinels, integer min reduction of the final row",
          {"pf_row", "pf_min"},
          "exact",
          {"unit_stride", "slides", "reductions"}};
}

// ---------------------------------------------------------------------------
// streamcluster_dist: squared euclidean distance of every 4-dimensional
// point (array-of-structs, strided loads) to one centre, a running vfredsum
// of the total, and a threshold scan that reports the first point closer
// than 50.0. Distances are non-negative, so their bit patterns order like
// integers and the scan can use vmslt on raw bits.
// ---------------------------------------------------------------------------
KernelSource make_streamcluster(uint64_t& st, size_t n) {
  std::string data = ".data\n";
  emit_f64(data, "sc_pts", rand_f64(st, n * 4, -5.0, 5.0));
  emit_f64(data, "sc_c", rand_f64(st, 4, -5.0, 5.0));
  emit_zero(data, "sc_dist", n);
  emit_zero(data, "sc_total", 1);
  emit_zero(data, "sc_first", 1);
  emit_f64(data, "sc_consts", {0.0});

  std::string vec = data +
      ".text\n"
      "main: li x8, 8\n"
      "li x24, 1\n"
      "li x9, 4\n"                       // AoS stride in elements
      "li x27, -1\n"
      "li x28, 4632937379169042432\n"    // bits of 50.0
      "li x19, 0\n"
      "li x10, sc_pts\n"
      "li x11, sc_dist\n"
      "li x15, sc_c\n"
      "fld f1, 0(x15)\n"
      "fld f2, 8(x15)\n"
      "fld f3, 16(x15)\n"
      "fld f4, 24(x15)\n"
      "li x15, sc_consts\n"
      "fld f9, 0(x15)\n"
      "li x5, " + num(n) + "\n"
      "vsetvl x23, x24\n"
      "vmv.s.x v6, x0\n"                 // running total = +0.0
      "loop: vsetvl x6, x5\n"
      "vfmv.v.f v5, f9\n"
      "vlse.v v1, (x10), x9\n"
      "vfsub.vf v1, v1, f1\n"
      "vfmacc.vv v5, v1, v1\n"
      "addi x7, x10, 8\n"
      "vlse.v v2, (x7), x9\n"
      "vfsub.vf v2, v2, f2\n"
      "vfmacc.vv v5, v2, v2\n"
      "addi x7, x10, 16\n"
      "vlse.v v3, (x7), x9\n"
      "vfsub.vf v3, v3, f3\n"
      "vfmacc.vv v5, v3, v3\n"
      "addi x7, x10, 24\n"
      "vlse.v v4, (x7), x9\n"
      "vfsub.vf v4, v4, f4\n"
      "vfmacc.vv v5, v4, v4\n"
      "vse.v v5, (x11)\n"
      "vfredsum.vs v6, v5, v6\n"
      "bge x27, x0, skipf\n"
      "vmslt.vx v8, v5, x28\n"
      "vfirst.m x7, v8\n"
      "blt x7, x0, skipf\n"
      "add x27, x19, x7\n"
      "skipf: add x19, x19, x6\n"
      "mul x7, x6, x8\n"
      "add x11, x11, x7\n"
      "mul x7, x7, x9\n"
      "add x10, x10, x7\n"
      "sub x5, x5, x6\n"
      "bne x5, x0, loop\n"
      "li x12, sc_total\n"
      "vsetvl x23, x24\n"
      "vse.v v6, (x12)\n"
      "li x13, sc_first\n"
      "sd x27, 0(x13)\n"
      "ret\n";

  std::string sca = data +
      ".text\n"
      "main: li x27, -1\n"
      "li x28, 4632937379169042432\n"
      "li x19, 0\n"
      "li x10, sc_pts\n"
      "li x11, sc_dist\n"
      "li x15, sc_c\n"
      "fld f1, 0(x15)\n"
      "fld f2, 8(x15)\n"
      "fld f3, 16(x15)\n"
      "fld f4, 24(x15)\n"
      "li x15, sc_consts\n"
      "fld f9, 0(x15)\n"
      "fadd f20, f9, f9\n"               // running total = +0.0
      "li x5, " + num(n) + "\n"
      "loop: fadd f13, f9, f9\n"         // acc = +0.0
      "fld f10, 0(x10)\n"
      "fsub f10, f10, f1\n"
      "fmul f11, f10, f10\n"
      "fadd f13, f13, f11\n"
      "fld f10, 8(x10)\n"
      "fsub f10, f10, f2\n"
      "fmul f11, f10, f10\n"
      "fadd f13, f13, f11\n"
      "fld f10, 16(x10)\n"
      "fsub f10, f10, f3\n"
      "fmul f11, f10, f10\n"
      "fadd f13, f13, f11\n"
      "fld f10, 24(x10)\n"
      "fsub f10, f10, f4\n"
      "fmul f11, f10, f10\n"
      "fadd f13, f13, f11\n"
      "fsd f13, 0(x11)\n"
      "fadd f20, f20, f13\n"
      "bge x27, x0, skipf\n"
      "ld x7, 0(x11)\n"
      "bge x7, x28, skipf\n"
      "add x27, x19, x0\n"
      "skipf: addi x19, x19, 1\n"
      "addi x10, x10, 32\n"
      "addi x11, x11, 8\n"
      "addi x5, x5, -1\n"
      "bne x5, x0, loop\n"
      "li x12, sc_total\n"
      "fsd f20, 0(x12)\n"
      "li x13, sc_first\n"
      "sd x27, 0(x13)\n"
      "ret\n";

  return {"streamcluster_dist", vec, sca,
          "point-to-centre distances over strided AoS coordinates, running "
          "vfredsum total, vfirst threshold scan on raw distance bits",
          {"sc_dist", "sc_total", "sc_first"},
          "exact",
          {"unit_stride", "strided", "reductions", "scalar_comm"}};
}

// ---------------------------------------------------------------------------
// swaptions_cninv: the inverse-cumulative-normal path. Each pass evaluates a
// rational polynomial in x = (u - 0.5) * s_p and accumulates x*num/den*z_p
// into the output array. The u and out arrays together form a working set
// of 16*n bytes, sized (for tiny) between the stock 256 KB L2 and the 1 MB
// variant so repeated passes expose the cache-capacity effect. All vector
// work is strip-mined, so operation counts are exactly MVL-invariant.
// ---------------------------------------------------------------------------
KernelSource make_swaptions(uint64_t& st, size_t n, size_t passes) {
  std::string data = ".data\n";
  emit_f64(data, "sw_u", rand_f64(st, n, 0.05, 0.95));
  emit_zero(data, "sw_out", n);
  emit_f64(data, "sw_consts",
           {0.5, 2.50662823884, -18.61500062529, 41.39119773534,
            -25.44106049637, -8.47351093090, 23.08336743743,
            -21.06224101826, 1.0});
  emit_f64(data, "sw_s", rand_f64(st, passes, 0.6, 1.0));
  emit_f64(data, "sw_z", rand_f64(st, passes, 0.5, 1.5));

  std::string vec = data +
      ".text\n"
      "main: li x8, 8\n"
      "li x15, sw_consts\n"
      "fld f1, 0(x15)\n"   // 0.5
      "fld f2, 8(x15)\n"   // a0
      "fld f3, 16(x15)\n"  // a1
      "fld f4, 24(x15)\n"  // a2
      "fld f5, 32(x15)\n"  // a3
      "fld f6, 40(x15)\n"  // b1
      "fld f7, 48(x15)\n"  // b2
      "fld f8, 56(x15)\n"  // b3
      "fld f9, 64(x15)\n"  // 1.0
      "li x9, " + num(passes) + "\n"
      "li x16, sw_s\n"
      "li x17, sw_z\n"
      "pass: fld f10, 0(x16)\n"
      "fld f11, 0(x17)\n"
      "li x10, sw_u\n"
      "li x11, sw_out\n"
      "li x5, " + num(n) + "\n"
      "strip: vsetvl x6, x5\n"
      "vle.v v1, (x10)\n"
      "vfsub.vf v2, v1, f1\n"
      "vfmul.vf v2, v2, f10\n"   // x
      "vfmul.vv v3, v2, v2\n"    // r = x*x
      "vfmv.v.f v4, f5\n"
      "vfmul.vv v4, v4, v3\n"
      "vfadd.vf v4, v4, f4\n"
      "vfmul.vv v4, v4, v3\n"
      "vfadd.vf v4, v4, f3\n"
      "vfmul.vv v4, v4, v3\n"
      "vfadd.vf v4, v4, f2\n"    // num
      "vfmv.v.f v5, f8\n"
      "vfmul.vv v5, v5, v3\n"
      "vfadd.vf v5, v5, f7\n"
      "vfmul.vv v5, v5, v3\n"
      "vfadd.vf v5, v5, f6\n"
      "vfmul.vv v5, v5, v3\n"
      "vfadd.vf v5, v5, f9\n"    // den
      "vfmul.vv v6, v2, v4\n"
      "vfdiv.vv v6, v6, v5\n"    // q = x*num/den
      "vle.v v7, (x11)\n"
      "vfmacc.vf v7, v6, f11\n"  // out += q*z
      "vse.v v7, (x11)\n"
      "mul x7, x6, x8\n"
      "add x10, x10, x7\n"
      "add x11, x11, x7\n"
      "sub x5, x5, x6\n"
      "bne x5, x0, strip\n"
      "addi x16, x16, 8\n"
      "addi x17, x17, 8\n"
      "addi x9, x9, -1\n"
      "bne x9, x0, pass\n"
      "ret\n";

  std::string sca = data +
      ".text\n"
      "main: li x15, sw_consts\n"
      "fld f1, 0(x15)\n"
      "fld f2, 8(x15)\n"
      "fld f3, 16(x15)\n"
      "fld f4, 24(x15)\n"
      "fld f5, 32(x15)\n"
      "fld f6, 40(x15)\n"
      "fld f7, 48(x15)\n"
      "fld f8, 56(x15)\n"
      "fld f9, 64(x15)\n"
      "li x9, " + num(passes) + "\n"
      "li x16, sw_s\n"
      "li x17, sw_z\n"
      "pass: fld f10, 0(x16)\n"
      "fld f11, 0(x17)\n"
      "li x10, sw_u\n"
      "li x11, sw_out\n"
      "li x5, " + num(n) + "\n"
      "loop: fld f12, 0(x10)\n"
      "fsub f13, f12, f1\n"
      "fmul f13, f13, f10\n"
      "fmul f14, f13, f13\n"
      "fmul f15, f5, f14\n"
      "fadd f15, f15, f4\n"
      "fmul f15, f15, f14\n"
      "fadd f15, f15, f3\n"
      "fmul f15, f15, f14\n"
      "fadd f15, f15, f2\n"
      "fmul f16, f8, f14\n"
      "fadd f16, f16, f7\n"
      "fmul f16, f16, f14\n"
      "fadd f16, f16, f6\n"
      "fmul f16, f16, f14\n"
      "fadd f16, f16, f9\n"
      "fmul f17, f13, f15\n"
      "fdiv f17, f17, f16\n"
      "fld f18, 0(x11)\n"
      "fmul f19, f17, f11\n"
      "fadd f18, f18, f19\n"
      "fsd f18, 0(x11)\n"
      "addi x10, x10, 8\n"
      "addi x11, x11, 8\n"
      "addi x5, x5, -1\n"
      "bne x5, x0, loop\n"
      "addi x16, x16, 8\n"
      "addi x17, x17, 8\n"
      "addi x9, x9, -1\n"
      "bne x9, x0, pass\n"
      "ret\n";

  return {"swaptions_cninv", vec, sca,
          "inverse cumulative normal via rational polynomial, " +
              num(passes) + " accumulation passes over a " +
              num(n * 16 / 1024) + " KB working set",
          {"sw_out"},
          "exact",
          {"unit_stride"}};
}

}  // namespace

std::vector<KernelSource> generate_kernels(uint64_t seed, KernelSize size) {
  uint64_t st = seed;
  size_t bs_n = 300, cn_t = 64, cn_n = 128;
  size_t jc_w = 66, jc_h = 12, jc_k = 10;
  size_t pp_n = 256, pp_q = 32, pf_r = 256, sc_n = 256;
  size_t sw_n = 24576, sw_p = 4;
  if (size == KernelSize::Small) {
    bs_n = 1200; cn_t = 256; cn_n = 512;
    jc_w = 130; jc_h = 18; jc_k = 10;
    pp_n = 1024; pp_q = 64; pf_r = 1024; sc_n = 1024;
    sw_n = 32768; sw_p = 4;
  } else if (size == KernelSize::Medium) {
    bs_n = 4800; cn_t = 1024; cn_n = 2048;
    jc_w = 258; jc_h = 26; jc_k = 8;
    pp_n = 4096; pp_q = 128; pf_r = 4096; sc_n = 4096;
    sw_n = 49152; sw_p = 6;
  }
  std::vector<KernelSource> out;
  out.push_back(make_blackscholes(st, bs_n));
  out.push_back(make_canneal(st, cn_t, cn_n));
  out.push_back(make_jacobi2d(st, jc_w, jc_h, jc_k));
  out.push_back(make_particle_filter(st, pp_n, pp_q));
  out.push_back(make_pathfinder(st, pf_r));
  out.push_back(make_streamcluster(st, sc_n));
  out.push_back(make_swaptions(st, sw_n, sw_p));
  return out;
}

}  // namespace vsim
