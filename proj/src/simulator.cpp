#include "vsim/simulator.hpp"

#include <cinttypes>
#include <cstdio>

#include "vsim/engine.hpp"
#include "vsim/scalar_core.hpp"

namespace vsim {

void IntervalSet::add(uint64_t lo, uint64_t hi) {
  // swallow/merge neighbours so the map stays small
  auto it = m_.upper_bound(lo);
  if (it != m_.begin()) {
    --it;
    if (it->second + 1 >= lo) {
      lo = it->first;
      hi = std::max(hi, it->second);
      it = m_.erase(it);
    } else {
      ++it;
    }
  }
  while (it != m_.end() && it->first <= hi + 1) {
    hi = std::max(hi, it->second);
    it = m_.erase(it);
  }
  m_[lo] = hi;
}

bool IntervalSet::intersects(uint64_t lo, uint64_t hi) const {
  auto it = m_.upper_bound(hi);
  if (it == m_.begin()) return false;
  --it;
  return it->second >= lo;
}

namespace {

std::string hex_addr(uint64_t addr) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "0x%" PRIx64, addr);
  return buf;
}

}  // namespace

void Discipline::scalar_access(uint64_t addr, uint32_t len, bool write) {
  if (!enabled_ || len == 0) return;
  uint64_t lo = addr, hi = addr + len - 1;
  if (write) {
    if (vector_reads_.intersects(lo, hi) || vector_writes_.intersects(lo, hi))
      throw SimTrap("memory discipline violation: scalar store to " +
                    hex_addr(addr) + " overlaps vector-touched bytes");
    scalar_writes_.add(lo, hi);
  } else {
    if (vector_writes_.intersects(lo, hi))
      throw SimTrap("memory discipline violation: scalar load from " +
                    hex_addr(addr) + " overlaps vector-written bytes");
    scalar_reads_.add(lo, hi);
  }
}

void Discipline::vector_access(uint64_t addr, uint32_t len, bool write) {
  if (!enabled_ || len == 0) return;
  uint64_t lo = addr, hi = addr + len - 1;
  if (write) {
    if (scalar_reads_.intersects(lo, hi) || scalar_writes_.intersects(lo, hi))
      throw SimTrap("memory discipline violation: vector store to " +
                    hex_addr(addr) + " overlaps scalar-touched bytes");
    vector_writes_.add(lo, hi);
  } else {
    if (scalar_writes_.intersects(lo, hi))
      throw SimTrap("memory discipline violation: vector load from " +
                    hex_addr(addr) + " overlaps scalar-written bytes");
    vector_reads_.add(lo, hi);
  }
}

SimResult run_timed(const Program& prog, const EngineConfig& cfg,
                    const SimOptions& opt) {
  validate(cfg);
  SimResult res;
  res.memory = MemoryImage::from_program(prog);
  res.events.enabled = opt.events;

  Discipline discipline(cfg.check_mem_discipline);
  MemSystem memsys(cfg, &res.events);

  ScalarCore* core_ptr = nullptr;
  Engine engine(
      cfg, res.memory, memsys, &res.events,
      [&discipline](uint64_t addr, uint32_t len, bool write) {
        discipline.vector_access(addr, len, write);
      },
      [&core_ptr](uint8_t rd, uint64_t value, uint64_t tick) {
        if (core_ptr) core_ptr->deliver(rd, value, tick);
      },
      [&res, &opt](const Instruction& inst, uint32_t vl) {
        if (opt.trace)
          res.trace.push_back({res.trace.size(), instruction_class(inst.op),
                               mnemonic(inst), vl});
      });
  ScalarCore core(
      prog, res.memory, memsys, engine, cfg,
      [&discipline](uint64_t addr, uint32_t len, bool write) {
        discipline.scalar_access(addr, len, write);
      });
  core_ptr = &core;

  uint64_t tick = 0;
  for (;; ++tick) {
    if (tick > cfg.step_limit)
      throw StepLimitExceeded("tick limit exceeded (" +
                              std::to_string(cfg.step_limit) + ")");
    if (tick % cfg.clock_ratio == 0) engine.cycle(tick / cfg.clock_ratio);
    core.cycle(tick);
    if (core.halt_requested() && engine.drained()) break;
  }

  res.ticks = tick + 1;
  res.vector_cycles = res.ticks / cfg.clock_ratio;
  res.cache = memsys.stats();
  res.counters = engine.counters();
  res.counters.scalar_instructions = core.scalar_instructions();
  res.x = core.x();
  res.f = core.f();
  res.final_vl = core.current_vl();
  res.vregs.reserve(kNumVRegs);
  for (uint8_t v = 0; v < kNumVRegs; ++v) res.vregs.push_back(engine.vreg(v));
  return res;
}

SimResult run_reference(const Program& prog, const EngineConfig& cfg,
                        const SimOptions& opt) {
  validate(cfg);
  SimResult res;
  RefModel ref(prog, cfg.mvl);
  ref.collect_trace = opt.trace;
  ref.run(cfg.step_limit);
  res.counters = ref.counters;
  res.memory = ref.state().mem;
  res.x = ref.state().x;
  res.f = ref.state().f;
  res.vregs = ref.state().v;
  res.final_vl = ref.state().vl;
  res.trace = ref.trace;
  return res;
}

std::vector<std::string> compare_results(const SimResult& timed,
                                         const SimResult& reference) {
  std::vector<std::string> diffs;
  char buf[256];
  for (int r = 0; r < 32; ++r) {
    if (timed.x[r] != reference.x[r]) {
      std::snprintf(buf, sizeof(buf),
                    "x%d: timed 0x%" PRIx64 " != reference 0x%" PRIx64, r,
                    timed.x[r], reference.x[r]);
      diffs.push_back(buf);
    }
    if (timed.f[r] != reference.f[r]) {
      std::snprintf(buf, sizeof(buf),
                    "f%d: timed 0x%" PRIx64 " != reference 0x%" PRIx64, r,
                    timed.f[r], reference.f[r]);
      diffs.push_back(buf);
    }
  }
  for (size_t v = 0; v < timed.vregs.size() && v < reference.vregs.size();
       ++v) {
    for (size_t e = 0; e < timed.vregs[v].size(); ++e) {
      if (timed.vregs[v][e] != reference.vregs[v][e]) {
        std::snprintf(buf, sizeof(buf),
                      "v%zu[%zu]: timed 0x%" PRIx64 " != reference 0x%" PRIx64,
                      v, e, timed.vregs[v][e], reference.vregs[v][e]);
        diffs.push_back(buf);
        break;  // one per register keeps the report readable
      }
    }
  }
  if (timed.final_vl != reference.final_vl)
    diffs.push_back("vl: timed " + std::to_string(timed.final_vl) +
                    " != reference " + std::to_string(reference.final_vl));
  for (const MemoryImage::Segment& seg : reference.memory.segments()) {
    if (seg.label == "__stack") continue;
    const MemoryImage::Segment* t = timed.memory.find(seg.label);
    if (!t) {
      diffs.push_back("segment " + seg.label + " missing from timed memory");
      continue;
    }
    for (size_t i = 0; i < seg.words.size(); ++i) {
      if (t->words[i] != seg.words[i]) {
        std::snprintf(buf, sizeof(buf),
                      "%s[%zu]: timed 0x%" PRIx64 " != reference 0x%" PRIx64,
                      seg.label.c_str(), i, t->words[i], seg.words[i]);
        diffs.push_back(buf);
        break;
      }
    }
  }
  auto cmp_count = [&](const char* name, uint64_t a, uint64_t b) {
    if (a != b)
      diffs.push_back(std::string(name) + ": timed " + std::to_string(a) +
                      " != reference " + std::to_string(b));
  };
  cmp_count("scalar_instructions", timed.counters.scalar_instructions,
            reference.counters.scalar_instructions);
  cmp_count("vector_memory", timed.counters.vector_memory,
            reference.counters.vector_memory);
  cmp_count("vector_arithmetic", timed.counters.vector_arithmetic,
            reference.counters.vector_arithmetic);
  cmp_count("vector_elem_manipulation",
            timed.counters.vector_elem_manipulation,
            reference.counters.vector_elem_manipulation);
  cmp_count("vector_operations", timed.counters.vector_operations,
            reference.counters.vector_operations);
  return diffs;
}

}  // namespace vsim
