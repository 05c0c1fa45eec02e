#pragma once

#include <array>
#include <cstdint>
#include <functional>

#include "vsim/config.hpp"
#include "vsim/engine.hpp"
#include "vsim/events.hpp"
#include "vsim/memory.hpp"
#include "vsim/memsys.hpp"
#include "vsim/program.hpp"

namespace vsim {

// Dual-issue in-order scalar pipeline. Results are computed at issue; a
// scoreboard of per-register ready ticks models latency, and branches
// resolve immediately but end the issue group. Vector instructions are
// handed to the engine's submission queue at issue with scalar operands
// captured by value; scalar-result vector ops mark their destination pending
// until the engine delivers.
class ScalarCore {
 public:
  ScalarCore(const Program& prog, MemoryImage& mem, MemSystem& memsys,
             Engine& engine, const EngineConfig& cfg, TouchFn touch);

  void cycle(uint64_t tick);

  // engine delivery of vfirst/vpopc/vmv.x.s results
  void deliver(uint8_t rd, uint64_t value, uint64_t tick);

  bool halt_requested() const { return halt_wait_; }

  uint64_t scalar_instructions() const { return scalar_instructions_; }
  uint32_t current_vl() const { return vl_; }
  const std::array<uint64_t, 32>& x() const { return x_; }
  const std::array<uint64_t, 32>& f() const { return f_; }

 private:
  const Program& prog_;
  MemoryImage& mem_;
  MemSystem& memsys_;
  Engine& engine_;
  const EngineConfig& cfg_;
  TouchFn touch_;

  std::array<uint64_t, 32> x_{};
  std::array<uint64_t, 32> f_{};
  std::array<uint64_t, 32> busy_x_{};  // ready tick
  std::array<uint64_t, 32> busy_f_{};
  std::array<bool, 32> pending_x_{};   // awaiting engine scalar result
  uint64_t pc_ = 0;
  uint32_t vl_ = 0;
  bool halt_wait_ = false;
  uint64_t scalar_instructions_ = 0;

  void write_x(uint8_t r, uint64_t v, uint64_t ready);
  void write_f(uint8_t r, uint64_t v, uint64_t ready);
  bool x_ready(uint8_t r, uint64_t tick) const;
  bool f_ready(uint8_t r, uint64_t tick) const;
  // returns false on stall; sets *end_group on redirects
  bool try_issue(uint64_t tick, bool* end_group);
  bool issue_vector(const Instruction& inst, uint64_t tick);
};

}  // namespace vsim
