#include "vsim/vmu.hpp"

#include <algorithm>

namespace vsim {

Vmu::Vmu(const EngineConfig& cfg, MemSystem& memsys, MemoryImage& mem,
         EventLog* log, TouchFn touch)
    : cfg_(cfg), memsys_(memsys), mem_(mem), log_(log),
      touch_(std::move(touch)) {
  ports_.resize(cfg.vmu_ports);
}

bool Vmu::has_free_port() const {
  for (const Port& p : ports_)
    if (!p.busy) return true;
  return false;
}

bool Vmu::idle() const {
  for (const Port& p : ports_)
    if (p.busy) return false;
  return true;
}

std::vector<Vmu::LineGroup> Vmu::group_lines(
    const std::vector<ElemAccess>& acc, uint32_t line_bytes) {
  std::vector<LineGroup> groups;
  for (uint32_t i = 0; i < acc.size(); ++i) {
    uint64_t line = acc[i].addr / line_bytes;
    if (!groups.empty() && groups.back().line == line &&
        groups.back().first + groups.back().count == i) {
      ++groups.back().count;
    } else {
      groups.push_back({line, i, 1});
    }
  }
  return groups;
}

bool Vmu::dispatch(VmuJob job, uint64_t vcycle) {
  for (Port& p : ports_) {
    if (p.busy) continue;
    p = Port{};
    p.busy = true;
    p.job = std::move(job);
    p.groups = group_lines(p.job.accesses, memsys_.line_bytes());
    p.dist_busy_until = vcycle;
    return true;
  }
  return false;
}

void Vmu::cycle(uint64_t vcycle, std::vector<uint64_t>& completed) {
  for (Port& p : ports_)
    if (p.busy) step_port(p, vcycle, completed);
}

void Vmu::step_port(Port& p, uint64_t vcycle,
                    std::vector<uint64_t>& completed) {
  const uint64_t now_tick = vcycle * cfg_.clock_ratio;
  const uint32_t lanes = cfg_.lanes;

  if (!p.job.is_store) {
    // responses arriving this cycle, oldest ready first
    std::vector<Pending> arrived;
    for (size_t i = 0; i < p.pending.size();) {
      if (p.pending[i].ready_tick <= now_tick) {
        arrived.push_back(p.pending[i]);
        p.pending.erase(p.pending.begin() + static_cast<long>(i));
      } else {
        ++i;
      }
    }
    std::sort(arrived.begin(), arrived.end(),
              [](const Pending& a, const Pending& b) {
                if (a.ready_tick != b.ready_tick)
                  return a.ready_tick < b.ready_tick;
                return a.group < b.group;
              });
    for (const Pending& a : arrived) {
      if (log_)
        log_->emit(now_tick, EvUnit::Vmu, EvKind::MemResp, p.job.seq,
                   p.groups[a.group].line * memsys_.line_bytes(),
                   p.groups[a.group].count);
      p.distq.push_back(a.group);
    }

    // distribute one group at a time, min(lanes, remaining) elements/cycle
    if (p.dist_busy_until <= vcycle && !p.distq.empty()) {
      uint32_t g = p.distq.front();
      p.distq.pop_front();
      uint32_t n = p.groups[g].count;
      uint64_t cycles = (n + lanes - 1) / lanes;
      p.dist_busy_until = vcycle + cycles;
      p.last_lb_cycle = vcycle + cycles;  // line-buffer write follows the
                                          // last distributed element
      ++p.distributed;
      if (log_)
        log_->emit(p.last_lb_cycle * cfg_.clock_ratio, EvUnit::Lanes,
                   EvKind::LbLine, p.job.seq, g, n);
    }

    // fire one line request per cycle
    if (p.next_send < p.groups.size()) {
      const LineGroup& g = p.groups[p.next_send];
      auto ready = memsys_.request(g.line, false, now_tick,
                                   cfg_.vmu_attach == VmuAttach::L1d);
      if (ready) {
        for (uint32_t k = 0; k < g.count; ++k) {
          const ElemAccess& a = p.job.accesses[g.first + k];
          if (touch_) touch_(a.addr, 8, false);
          p.job.dest[a.elem] = mem_.read_u64(a.addr);
        }
        if (log_)
          log_->emit(now_tick, EvUnit::Vmu, EvKind::MemReq, p.job.seq,
                     g.line * memsys_.line_bytes(), g.count);
        p.pending.push_back({*ready, p.next_send});
        ++p.next_send;
      }
    }

    bool all_distributed = p.distributed == p.groups.size() &&
                           p.next_send == p.groups.size() &&
                           p.pending.empty() && p.distq.empty();
    if (all_distributed && p.dist_busy_until <= vcycle &&
        p.last_lb_cycle <= vcycle) {
      completed.push_back(p.job.seq);
      p.busy = false;
    }
    return;
  }

  // store: drain from the store buffer, lanes elements per cycle
  uint32_t total = static_cast<uint32_t>(p.job.accesses.size());
  if (p.drained < total) {
    uint32_t n = std::min(lanes, total - p.drained);
    p.drained += n;
    if (log_)
      log_->emit(now_tick, EvUnit::Lanes, EvKind::SbDrain, p.job.seq, n,
                 p.drained);
  }

  // acknowledge completed line writes
  for (size_t i = 0; i < p.pending.size();) {
    if (p.pending[i].ready_tick <= now_tick) {
      if (log_)
        log_->emit(now_tick, EvUnit::Vmu, EvKind::MemResp, p.job.seq,
                   p.groups[p.pending[i].group].line * memsys_.line_bytes(),
                   p.groups[p.pending[i].group].count);
      ++p.acked;
      p.pending.erase(p.pending.begin() + static_cast<long>(i));
    } else {
      ++i;
    }
  }

  // fire one fully drained line per cycle; data hits memory at request time
  if (p.next_send < p.groups.size()) {
    const LineGroup& g = p.groups[p.next_send];
    if (g.first + g.count <= p.drained) {
      auto ready = memsys_.request(g.line, true, now_tick,
                                   cfg_.vmu_attach == VmuAttach::L1d);
      if (ready) {
        for (uint32_t k = 0; k < g.count; ++k) {
          const ElemAccess& a = p.job.accesses[g.first + k];
          if (touch_) touch_(a.addr, 8, true);
          mem_.write_u64(a.addr, p.job.store_data[g.first + k]);
        }
        if (log_)
          log_->emit(now_tick, EvUnit::Vmu, EvKind::MemReq, p.job.seq,
                     g.line * memsys_.line_bytes(), g.count);
        p.pending.push_back({*ready, p.next_send});
        ++p.next_send;
      }
    }
  }

  if (p.next_send == p.groups.size() && p.pending.empty()) {
    completed.push_back(p.job.seq);
    p.busy = false;
  }
}

}  // namespace vsim
