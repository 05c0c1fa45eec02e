#include "vsim/memsys.hpp"

#include <algorithm>

namespace vsim {

CacheModel::CacheModel(const CacheConfig& cfg, uint32_t line_bytes)
    : assoc_(cfg.assoc), line_bytes_(line_bytes) {
  uint64_t lines = static_cast<uint64_t>(cfg.size_kb) * 1024 / line_bytes;
  sets_ = static_cast<uint32_t>(std::max<uint64_t>(1, lines / assoc_));
  ways_.resize(static_cast<size_t>(sets_) * assoc_);
}

uint32_t CacheModel::set_of(uint64_t line_addr) const {
  return static_cast<uint32_t>(line_addr % sets_);
}

bool CacheModel::lookup(uint64_t line_addr) {
  Way* base = &ways_[static_cast<size_t>(set_of(line_addr)) * assoc_];
  for (uint32_t w = 0; w < assoc_; ++w) {
    if (base[w].valid && base[w].tag == line_addr) {
      base[w].lru = ++clock_;
      return true;
    }
  }
  return false;
}

bool CacheModel::present(uint64_t line_addr) const {
  const Way* base = &ways_[static_cast<size_t>(set_of(line_addr)) * assoc_];
  for (uint32_t w = 0; w < assoc_; ++w)
    if (base[w].valid && base[w].tag == line_addr) return true;
  return false;
}

void CacheModel::fill(uint64_t line_addr) {
  Way* base = &ways_[static_cast<size_t>(set_of(line_addr)) * assoc_];
  Way* victim = base;
  for (uint32_t w = 0; w < assoc_; ++w) {
    if (base[w].valid && base[w].tag == line_addr) {
      base[w].lru = ++clock_;
      return;
    }
    if (!base[w].valid) {
      victim = &base[w];
      break;
    }
    if (base[w].lru < victim->lru) victim = &base[w];
  }
  victim->valid = true;
  victim->tag = line_addr;
  victim->lru = ++clock_;
}

MemSystem::MemSystem(const EngineConfig& cfg, EventLog* log)
    : cfg_(cfg),
      log_(log),
      line_bytes_(cfg.line_bytes()),
      l1d_(cfg.l1d, line_bytes_),
      l2_(cfg.l2, line_bytes_) {
  (void)log_;
}

void MemSystem::drain_fills(uint64_t now) {
  for (size_t i = 0; i < mshrs_.size();) {
    if (mshrs_[i].ready <= now) {
      l2_.fill(mshrs_[i].line_addr);
      if (mshrs_[i].fill_l1) l1d_.fill(mshrs_[i].line_addr);
      mshrs_.erase(mshrs_.begin() + static_cast<long>(i));
    } else {
      ++i;
    }
  }
}

std::optional<uint64_t> MemSystem::request(uint64_t line_addr, bool is_write,
                                           uint64_t now, bool via_l1d) {
  (void)is_write;  // write-allocate with fetch: stores follow the load path
  drain_fills(now);
  uint64_t t = now;
  if (via_l1d) {
    if (l1d_.lookup(line_addr)) {
      ++stats_.l1d_hits;
      return t + cfg_.l1d.latency;
    }
    ++stats_.l1d_misses;
    t += cfg_.l1d.latency;
  }
  if (l2_.lookup(line_addr)) {
    ++stats_.l2_hits;
    if (via_l1d) l1d_.fill(line_addr);
    return t + cfg_.l2.latency;
  }
  ++stats_.l2_misses;
  for (Mshr& m : mshrs_) {
    if (m.line_addr == line_addr) {
      m.fill_l1 = m.fill_l1 || via_l1d;
      return m.ready;
    }
  }
  if (mshrs_.size() >= cfg_.l2.mshrs) return std::nullopt;
  uint64_t start = std::max(t + cfg_.l2.latency, dram_next_free_);
  dram_next_free_ = start + cfg_.dram_line_interval;
  uint64_t ready = start + cfg_.dram_latency;
  ++stats_.dram_lines;
  mshrs_.push_back({line_addr, ready, via_l1d});
  return ready;
}

}  // namespace vsim
