// Kernel corpus: every kernel must assemble, vectorize meaningfully, and its
// scalar twin must reproduce the vector program's memory image bit for bit.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "vsim/assembler.hpp"
#include "vsim/kernels.hpp"
#include "vsim/simulator.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

using namespace vsim;

namespace {

// Final contents of every data segment, keyed by label.
std::map<std::string, std::vector<uint64_t>> seg_values(const Program& p,
                                                        const MemoryImage& m) {
  std::map<std::string, std::vector<uint64_t>> out;
  for (const auto& seg : p.data) {
    std::vector<uint64_t> words(seg.words.size());
    for (size_t i = 0; i < words.size(); ++i)
      words[i] = m.read_u64(seg.base + 8 * i);
    out[seg.label] = std::move(words);
  }
  return out;
}

EngineConfig cfg_mvl(uint32_t mvl) {
  EngineConfig cfg;
  cfg.mvl = mvl;
  return cfg;
}

bool uses(const Program& p, Opcode op) {
  return std::any_of(p.text.begin(), p.text.end(),
                     [&](const Instruction& i) { return i.op == op; });
}

bool uses_masked(const Program& p) {
  return std::any_of(p.text.begin(), p.text.end(),
                     [](const Instruction& i) { return i.masked; });
}

bool has_feature(const KernelSource& k, const std::string& f) {
  return std::find(k.features.begin(), k.features.end(), f) !=
         k.features.end();
}

const KernelSource& find_kernel(const std::vector<KernelSource>& ks,
                                const std::string& name) {
  for (const auto& k : ks)
    if (k.name == name) return k;
  REQUIRE_MESSAGE(false, "missing kernel " << name);
  return ks.front();
}

}  // namespace

TEST_CASE("the corpus has seven distinct, deterministic kernels") {
  auto ks = generate_kernels(1);
  REQUIRE(ks.size() == 7);
  std::set<std::string> names;
  for (const auto& k : ks) {
    CHECK(!k.vector_asm.empty());
    CHECK(!k.scalar_asm.empty());
    CHECK(!k.description.empty());
    CHECK(!k.outputs.empty());
    CHECK(k.ulp_rule == "exact");
    CHECK(!k.features.empty());
    names.insert(k.name);
  }
  CHECK(names.size() == 7);
  CHECK(names.count("blackscholes") == 1);
  CHECK(names.count("canneal_swapcost") == 1);
  CHECK(names.count("jacobi2d") == 1);
  CHECK(names.count("particle_filter") == 1);
  CHECK(names.count("pathfinder") == 1);
  CHECK(names.count("streamcluster_dist") == 1);
  CHECK(names.count("swaptions_cninv") == 1);

  auto again = generate_kernels(1);
  for (size_t i = 0; i < ks.size(); ++i) {
    CHECK(ks[i].vector_asm == again[i].vector_asm);
    CHECK(ks[i].scalar_asm == again[i].scalar_asm);
  }
  auto other = generate_kernels(2);
  bool any_diff = false;
  for (size_t i = 0; i < ks.size(); ++i)
    any_diff |= ks[i].vector_asm != other[i].vector_asm;
  CHECK(any_diff);

  // the three sizes scale the problem, producing different programs
  auto small = generate_kernels(1, KernelSize::Small);
  auto medium = generate_kernels(1, KernelSize::Medium);
  for (size_t i = 0; i < ks.size(); ++i) {
    CHECK(ks[i].vector_asm != small[i].vector_asm);
    CHECK(small[i].vector_asm != medium[i].vector_asm);
  }
}

TEST_CASE("kernels assemble; twins are purely scalar, kernels vectorized") {
  for (auto size :
       {KernelSize::Tiny, KernelSize::Small, KernelSize::Medium}) {
    for (const auto& k : generate_kernels(1, size)) {
      CAPTURE(k.name);
      CAPTURE(to_string(size));
      Program vp = assemble(k.vector_asm);
      Program sp = assemble(k.scalar_asm);
      int vec_insts = 0;
      for (const auto& inst : vp.text) vec_insts += is_vector(inst.op) ? 1 : 0;
      CHECK(vec_insts > 0);
      for (const auto& inst : sp.text) CHECK(!is_vector(inst.op));
      // the twins share one data layout, so their segments line up exactly
      REQUIRE(vp.data.size() == sp.data.size());
      for (size_t i = 0; i < vp.data.size(); ++i) {
        CHECK(vp.data[i].label == sp.data[i].label);
        CHECK(vp.data[i].base == sp.data[i].base);
        CHECK(vp.data[i].words == sp.data[i].words);
      }
      // every declared output region is a real segment
      for (const auto& label : k.outputs) {
        bool found = false;
        for (const auto& seg : vp.data) found |= seg.label == label;
        CAPTURE(label);
        CHECK(found);
      }
    }
  }
}

TEST_CASE("each kernel exercises its advertised vector features") {
  auto ks = generate_kernels(1);
  for (const auto& k : ks) {
    CAPTURE(k.name);
    Program vp = assemble(k.vector_asm);
    if (has_feature(k, "strided"))
      CHECK((uses(vp, Opcode::VLSE) || uses(vp, Opcode::VSSE)));
    if (has_feature(k, "indexed"))
      CHECK((uses(vp, Opcode::VLXE) || uses(vp, Opcode::VSXE)));
    if (has_feature(k, "masked")) CHECK(uses_masked(vp));
    if (has_feature(k, "slides"))
      CHECK((uses(vp, Opcode::VSLIDE1UP) || uses(vp, Opcode::VSLIDE1DOWN)));
    if (has_feature(k, "reductions"))
      CHECK((uses(vp, Opcode::VREDSUM) || uses(vp, Opcode::VREDMIN) ||
             uses(vp, Opcode::VFREDSUM)));
    if (has_feature(k, "scalar_comm"))
      CHECK((uses(vp, Opcode::VFIRST) || uses(vp, Opcode::VPOPC) ||
             uses(vp, Opcode::VMV_XS)));
  }

  // per-kernel signatures
  {
    Program p = assemble(find_kernel(ks, "blackscholes").vector_asm);
    CHECK(uses(p, Opcode::VSSE));
    CHECK(!uses(p, Opcode::VLXE));
    CHECK(!uses(p, Opcode::VSXE));
  }
  {
    Program p = assemble(find_kernel(ks, "canneal_swapcost").vector_asm);
    CHECK(uses(p, Opcode::VLXE));
    CHECK(uses(p, Opcode::VREDSUM));
    CHECK(!uses(p, Opcode::VSLIDE1UP));
    CHECK(!uses(p, Opcode::VSLIDE1DOWN));
  }
  {
    Program p = assemble(find_kernel(ks, "jacobi2d").vector_asm);
    CHECK(uses(p, Opcode::VSLIDE1UP));
    CHECK(uses(p, Opcode::VSLIDE1DOWN));
    CHECK(uses(p, Opcode::VMV_XS));
  }
  {
    Program p = assemble(find_kernel(ks, "particle_filter").vector_asm);
    CHECK(uses(p, Opcode::VFIRST));
    CHECK(uses(p, Opcode::VPOPC));
    CHECK(uses(p, Opcode::VRGATHER));
    CHECK(uses(p, Opcode::VFREDSUM));
    CHECK(uses_masked(p));
  }
  {
    Program p = assemble(find_kernel(ks, "pathfinder").vector_asm);
    CHECK(uses(p, Opcode::VSLIDE1UP));
    CHECK(uses(p, Opcode::VSLIDE1DOWN));
    CHECK(uses(p, Opcode::VREDMIN));
  }
  {
    Program p = assemble(find_kernel(ks, "streamcluster_dist").vector_asm);
    CHECK(uses(p, Opcode::VLSE));
    CHECK(uses(p, Opcode::VFREDSUM));
    CHECK(uses(p, Opcode::VFIRST));
  }
  {
    Program p = assemble(find_kernel(ks, "swaptions_cninv").vector_asm);
    CHECK(uses(p, Opcode::VFMACC));
    CHECK(uses(p, Opcode::VFDIV));
  }
}

TEST_CASE("scalar twins reproduce the vector results bit for bit") {
  for (auto size : {KernelSize::Tiny, KernelSize::Small}) {
    for (const auto& k : generate_kernels(1, size)) {
      CAPTURE(k.name);
      CAPTURE(to_string(size));
      Program vp = assemble(k.vector_asm);
      Program sp = assemble(k.scalar_asm);
      SimResult vr = run_reference(vp, cfg_mvl(8));
      SimResult sr = run_reference(sp, cfg_mvl(8));
      auto vsegs = seg_values(vp, vr.memory);
      auto ssegs = seg_values(sp, sr.memory);
      REQUIRE(vsegs.size() == ssegs.size());
      for (const auto& [label, words] : vsegs) {
        CAPTURE(label);
        REQUIRE(ssegs.count(label) == 1);
        CHECK(words == ssegs.at(label));
      }
      // the run actually produced something: some output region changed
      bool changed = false;
      for (const auto& label : k.outputs) {
        for (const auto& seg : vp.data) {
          if (seg.label != label) continue;
          changed |= vsegs.at(label) !=
                     std::vector<uint64_t>(seg.words.begin(), seg.words.end());
        }
      }
      CHECK(changed);
    }
  }
}

TEST_CASE("kernel results do not depend on the maximum vector length") {
  // Strip-mining must be seamless: strip-boundary carries (slides, reductions)
  // may not leak the strip size into the results.
  for (const auto& k : generate_kernels(1)) {
    CAPTURE(k.name);
    Program vp = assemble(k.vector_asm);
    auto base = seg_values(vp, run_reference(vp, cfg_mvl(8)).memory);
    for (uint32_t mvl : {16u, 64u, 256u}) {
      CAPTURE(mvl);
      auto other = seg_values(vp, run_reference(vp, cfg_mvl(mvl)).memory);
      CHECK(base == other);
    }
  }
}

TEST_CASE("strip-mined kernels keep their operation count across MVLs") {
  // blackscholes, pathfinder and swaptions_cninv perform pure strip-mined
  // work: the total element count is a property of the input, so the sum of
  // VL over all committed vector instructions cannot depend on the MVL.
  auto ks = generate_kernels(1);
  for (const char* name : {"blackscholes", "pathfinder", "swaptions_cninv"}) {
    CAPTURE(name);
    Program vp = assemble(find_kernel(ks, name).vector_asm);
    uint64_t base = run_reference(vp, cfg_mvl(8)).counters.vector_operations;
    CHECK(base > 0);
    for (uint32_t mvl : {16u, 32u, 64u, 128u, 256u}) {
      CAPTURE(mvl);
      CHECK(run_reference(vp, cfg_mvl(mvl)).counters.vector_operations ==
            base);
    }
  }
}

TEST_CASE("canneal strip counts saturate once MVL covers the largest fan") {
  // Fan sizes are capped at 22 elements, so every MVL of 32 and above runs
  // each trial in a single strip: the committed vector instruction count
  // becomes MVL-independent. MVL=8 must split large fans and commit more.
  auto ks = generate_kernels(1);
  Program vp = assemble(find_kernel(ks, "canneal_swapcost").vector_asm);
  uint64_t at32 = run_reference(vp, cfg_mvl(32)).counters.total_vector();
  for (uint32_t mvl : {64u, 128u, 256u}) {
    CAPTURE(mvl);
    CHECK(run_reference(vp, cfg_mvl(mvl)).counters.total_vector() == at32);
  }
  CHECK(run_reference(vp, cfg_mvl(8)).counters.total_vector() > at32);
}

TEST_CASE("timed runs of every kernel match the reference model") {
  std::vector<EngineConfig> cfgs;
  cfgs.emplace_back();  // defaults: 1 lane, mvl 8, in-order, ring
  {
    EngineConfig c;
    c.lanes = 4;
    c.mvl = 64;
    c.interconnect = Topology::Crossbar;
    cfgs.push_back(c);
  }
  {
    EngineConfig c;
    c.lanes = 2;
    c.mvl = 16;
    c.issue_scheme = IssueScheme::OutOfOrder;
    c.clock_ratio = 3;
    c.shared_rw_port = true;
    c.vmu_attach = VmuAttach::L1d;
    cfgs.push_back(c);
  }
  {
    EngineConfig c;
    c.lanes = 8;
    c.mvl = 256;
    c.vmu_ports = 2;
    cfgs.push_back(c);
  }

  for (const auto& k : generate_kernels(1)) {
    Program vp = assemble(k.vector_asm);
    Program sp = assemble(k.scalar_asm);
    for (size_t ci = 0; ci < cfgs.size(); ++ci) {
      CAPTURE(k.name);
      CAPTURE(ci);
      SimResult ref = run_reference(vp, cfgs[ci]);
      SimResult timed = run_timed(vp, cfgs[ci]);
      auto diffs = compare_results(timed, ref);
      CAPTURE(diffs);
      CHECK(diffs.empty());
      CHECK(timed.ticks > 0);

      SimResult sref = run_reference(sp, cfgs[ci]);
      SimResult stimed = run_timed(sp, cfgs[ci]);
      auto sdiffs = compare_results(stimed, sref);
      CAPTURE(sdiffs);
      CHECK(sdiffs.empty());
    }
  }
}

TEST_CASE("kernels vectorize heavily and twins shrink instruction counts") {
  for (const auto& k : generate_kernels(1)) {
    CAPTURE(k.name);
    Program vp = assemble(k.vector_asm);
    Program sp = assemble(k.scalar_asm);
    SimResult vr = run_reference(vp, cfg_mvl(64));
    SimResult sr = run_reference(sp, cfg_mvl(64));

    CHECK(sr.counters.total_vector() == 0);
    CHECK(vr.counters.vector_memory > 0);
    CHECK(vr.counters.vector_arithmetic > 0);

    // percent vectorization: element operations vs total committed work
    double pv = 100.0 * double(vr.counters.vector_operations) /
                double(vr.counters.scalar_instructions +
                       vr.counters.vector_operations);
    CAPTURE(pv);
    CHECK(pv >= 75.0);

    // the twin runs the same computation in far more instructions
    CHECK(sr.counters.total() > 2 * vr.counters.total());
  }
}
