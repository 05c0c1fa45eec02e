#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <vector>

#include "vsim/config.hpp"
#include "vsim/events.hpp"
#include "vsim/exec.hpp"
#include "vsim/memory.hpp"
#include "vsim/memsys.hpp"

namespace vsim {

// Memory-side touch callback for the scalar/vector ownership check:
// (addr, len, is_write).
using TouchFn = std::function<void(uint64_t, uint32_t, bool)>;

// One in-flight vector memory instruction handed to a VMU port.
struct VmuJob {
  uint64_t seq = 0;
  bool is_store = false;
  std::vector<ElemAccess> accesses;  // active elements, element order
  std::vector<uint64_t> store_data;  // parallel to accesses (stores)
  uint64_t* dest = nullptr;          // physical register elements (loads)
};

// The vector memory unit: one or more ports, each owning a single in-flight
// instruction. Element accesses are grouped into maximal runs that share a
// cache line; each port fires one line request per vector cycle. Load
// responses can return out of order (hit-under-miss) and are distributed to
// the lanes one element per lane per cycle; stores drain from the store
// buffer at one element per lane per cycle and each line is written at
// request time. Loads sample memory when the line request fires.
class Vmu {
 public:
  Vmu(const EngineConfig& cfg, MemSystem& memsys, MemoryImage& mem,
      EventLog* log, TouchFn touch);

  bool has_free_port() const;
  // false if no port is free
  bool dispatch(VmuJob job, uint64_t vcycle);

  // Advance one vector cycle; completed instruction seqs are appended to
  // `completed` in deterministic order.
  void cycle(uint64_t vcycle, std::vector<uint64_t>& completed);

  bool idle() const;

 private:
  struct LineGroup {
    uint64_t line;
    uint32_t first;  // index into accesses
    uint32_t count;
  };
  struct Pending {
    uint64_t ready_tick;
    uint32_t group;
  };
  struct Port {
    bool busy = false;
    VmuJob job;
    std::vector<LineGroup> groups;
    uint32_t next_send = 0;
    uint32_t drained = 0;  // store elements moved out of the store buffer
    std::vector<Pending> pending;
    std::deque<uint32_t> distq;      // load groups awaiting distribution
    uint64_t dist_busy_until = 0;    // vector cycle
    uint64_t last_lb_cycle = 0;
    uint32_t distributed = 0;        // load groups fully distributed
    uint32_t acked = 0;              // store groups acknowledged
  };

  const EngineConfig& cfg_;
  MemSystem& memsys_;
  MemoryImage& mem_;
  EventLog* log_;
  TouchFn touch_;
  std::vector<Port> ports_;

  void step_port(Port& p, uint64_t vcycle, std::vector<uint64_t>& completed);
  static std::vector<LineGroup> group_lines(const std::vector<ElemAccess>& acc,
                                            uint32_t line_bytes);
};

}  // namespace vsim
