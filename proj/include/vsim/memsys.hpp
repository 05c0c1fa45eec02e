#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "vsim/config.hpp"
#include "vsim/events.hpp"

namespace vsim {

struct CacheStats {
  uint64_t l1d_hits = 0;
  uint64_t l1d_misses = 0;
  uint64_t l2_hits = 0;
  uint64_t l2_misses = 0;
  uint64_t dram_lines = 0;
};

// Tag-only set-associative LRU cache. Data lives in the flat memory image;
// the cache tracks presence for timing and hit/miss accounting.
class CacheModel {
 public:
  CacheModel(const CacheConfig& cfg, uint32_t line_bytes);

  bool lookup(uint64_t line_addr);  // true on hit; updates LRU
  void fill(uint64_t line_addr);    // insert, evicting LRU if needed
  bool present(uint64_t line_addr) const;

 private:
  struct Way {
    uint64_t tag = 0;
    bool valid = false;
    uint64_t lru = 0;
  };
  uint32_t sets_;
  uint32_t assoc_;
  uint32_t line_bytes_;
  uint64_t clock_ = 0;
  std::vector<Way> ways_;  // sets_ * assoc_

  uint32_t set_of(uint64_t line_addr) const;
};

// L1D + L2 + DRAM timing model shared by the scalar core (through L1D) and
// the vector memory unit (attached to L1D or directly to L2). All times are
// ticks. Misses allocate L2 MSHRs; requests to a line already in flight
// merge onto the existing MSHR. DRAM is pipelined: one line per
// dram.line_interval ticks after a fixed latency. Callers must present
// requests in nondecreasing tick order.
class MemSystem {
 public:
  MemSystem(const EngineConfig& cfg, EventLog* log);

  // Returns the tick the data is available (load) or accepted (store), or
  // nullopt when no MSHR is free (retry next cycle). via_l1d selects the
  // scalar path / vmu.attach=l1d path.
  std::optional<uint64_t> request(uint64_t line_addr, bool is_write,
                                  uint64_t now, bool via_l1d);

  const CacheStats& stats() const { return stats_; }
  uint32_t line_bytes() const { return line_bytes_; }
  uint64_t line_of(uint64_t addr) const { return addr / line_bytes_; }

 private:
  struct Mshr {
    uint64_t line_addr;
    uint64_t ready;
    bool fill_l1;
  };

  const EngineConfig& cfg_;
  EventLog* log_;
  uint32_t line_bytes_;
  CacheModel l1d_;
  CacheModel l2_;
  std::vector<Mshr> mshrs_;
  uint64_t dram_next_free_ = 0;
  CacheStats stats_;

  void drain_fills(uint64_t now);
};

}  // namespace vsim
