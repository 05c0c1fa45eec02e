#include "vsim/engine.hpp"

#include <algorithm>

#include "vsim/exec.hpp"
#include "vsim/interconnect.hpp"
#include "vsim/lanes.hpp"

namespace vsim {

Engine::Engine(const EngineConfig& cfg, MemoryImage& mem, MemSystem& memsys,
               EventLog* log, TouchFn touch, ScalarResultFn on_scalar_result,
               CommitFn on_commit)
    : cfg_(cfg),
      mem_(mem),
      log_(log),
      on_scalar_result_(std::move(on_scalar_result)),
      on_commit_(std::move(on_commit)),
      vmu_(cfg, memsys, mem, log, std::move(touch)) {
  prf_.assign(cfg.physical_regs, std::vector<uint64_t>(cfg.mvl, 0));
  valid_.assign(cfg.physical_regs, true);
  for (uint16_t i = 0; i < kNumVRegs; ++i) rat_[i] = i;
  for (uint16_t i = kNumVRegs; i < cfg.physical_regs; ++i) frl_.push_back(i);
  scratch_.assign(cfg.mvl, 0);
}

bool Engine::submit(const Submission& s) {
  if (subq_.size() >= cfg_.submit_q_depth) return false;
  subq_.push_back(s);
  return true;
}

bool Engine::drained() const {
  return subq_.empty() && rob_.empty() && vmu_.idle();
}

const std::vector<uint64_t>& Engine::vreg(uint8_t v) const {
  return prf_[rat_[v]];
}

Engine::RobEntry* Engine::find(uint64_t seq) {
  for (RobEntry& e : rob_)
    if (e.seq == seq) return &e;
  return nullptr;
}

void Engine::mark_executed(RobEntry& e, uint64_t vcycle) {
  e.executed = true;
  if (e.prd != kNoPhys) valid_[e.prd] = true;
  if (e.has_scalar_result) {
    uint64_t tick = vcycle * cfg_.clock_ratio;
    if (log_)
      log_->emit(tick, EvUnit::Engine, EvKind::ScalarResult, e.seq,
                 e.inst.rd, e.scalar_result);
    if (on_scalar_result_) on_scalar_result_(e.inst.rd, e.scalar_result, tick);
  }
}

bool Engine::hazard_for(const RobEntry& e) const {
  for (const RobEntry& o : rob_) {
    if (o.seq >= e.seq) break;
    if (!o.is_mem || o.executed) continue;
    if (o.indexed || e.indexed) return true;
    bool empty = e.lo > e.hi || o.lo > o.hi;
    bool overlap = !empty && e.hi >= o.lo && o.hi >= e.lo;
    if (overlap && (e.is_store || o.is_store)) return true;
  }
  return false;
}

void Engine::recompute_hazards() {
  for (RobEntry& e : rob_)
    if (e.is_mem && !e.issued) e.hazard = hazard_for(e);
}

bool Engine::sources_ready(const RobEntry& e) const {
  auto ok = [&](uint16_t p) { return p == kNoPhys || valid_[p]; };
  return ok(e.ps1) && ok(e.ps2) && ok(e.pmask) && ok(e.pdata) &&
         (!e.needs_old || ok(e.pold));
}

void Engine::cycle(uint64_t vcycle) {
  // 1. arithmetic completions scheduled for this cycle
  while (!comps_.empty() && comps_.top().first <= vcycle) {
    uint64_t seq = comps_.top().second;
    comps_.pop();
    if (RobEntry* e = find(seq)) mark_executed(*e, vcycle);
  }

  // 2. memory progress
  vmu_completed_.clear();
  vmu_.cycle(vcycle, vmu_completed_);
  for (uint64_t seq : vmu_completed_)
    if (RobEntry* e = find(seq)) mark_executed(*e, vcycle);
  if (!vmu_completed_.empty()) recompute_hazards();

  // 3. in-order commit, two per cycle
  do_commit(vcycle);

  // 4. issue
  do_issue_arith(vcycle);
  do_issue_mem(vcycle);

  // 5. rename one submission
  do_rename(vcycle);

  check_invariants();
}

void Engine::do_commit(uint64_t vcycle) {
  for (int n = 0; n < 2 && !rob_.empty() && rob_.front().executed; ++n) {
    RobEntry& e = rob_.front();
    if (e.pold != kNoPhys) {
      valid_[e.pold] = true;
      frl_.push_back(e.pold);
    }
    switch (instruction_class(e.inst.op)) {
      case InstClass::VectorMemory:
        ++counters_.vector_memory;
        break;
      case InstClass::VectorElemManipulation:
        ++counters_.vector_elem_manipulation;
        break;
      default:
        ++counters_.vector_arithmetic;
        break;
    }
    counters_.vector_operations += e.vl;
    if (log_)
      log_->emit(vcycle * cfg_.clock_ratio, EvUnit::Engine, EvKind::Commit,
                 e.seq, static_cast<uint64_t>(e.inst.op), e.vl);
    if (on_commit_) on_commit_(e.inst, e.vl);
    ++committed_;
    rob_.pop_front();
  }
}

void Engine::do_rename(uint64_t vcycle) {
  if (subq_.empty()) return;
  if (rob_.size() >= cfg_.rob_depth) return;
  const Submission& s = subq_.front();
  bool mem = is_vector_memory(s.inst.op);
  std::deque<uint64_t>& q = mem ? mem_q_ : arith_q_;
  size_t cap = mem ? cfg_.mem_q_depth : cfg_.arith_q_depth;
  if (q.size() >= cap) return;
  bool writes = writes_vreg(s.inst);
  if (writes && frl_.empty()) return;

  RobEntry e;
  e.seq = next_seq_++;
  e.inst = s.inst;
  e.vl = s.vl;
  e.scalar_bits = s.scalar_bits;
  e.base = s.base;
  e.stride = s.stride;
  if (e.inst.vs1 != kNoReg) e.ps1 = rat_[e.inst.vs1];
  if (e.inst.vs2 != kNoReg) e.ps2 = rat_[e.inst.vs2];
  if (e.inst.masked) e.pmask = rat_[0];
  e.is_mem = mem;
  e.is_store = is_vector_store(e.inst.op);
  if (e.is_store) e.pdata = rat_[e.inst.vd];
  e.needs_old = writes && (e.inst.masked || e.inst.op == Opcode::VFMACC ||
                           e.inst.op == Opcode::VSLIDEUP);
  if (writes) {
    e.pold = rat_[e.inst.vd];
    e.prd = frl_.front();
    frl_.pop_front();
    valid_[e.prd] = false;
    rat_[e.inst.vd] = e.prd;
  }
  if (mem) {
    e.indexed = e.inst.mem_mode == MemMode::Indexed;
    if (!e.indexed && e.vl > 0) {
      int64_t step = e.stride * 8;
      if (e.inst.mem_mode == MemMode::Unit) step = 8;
      int64_t span = step * (static_cast<int64_t>(e.vl) - 1);
      uint64_t a = e.base;
      uint64_t b = e.base + span;
      e.lo = std::min(a, b);
      e.hi = std::max(a, b) + 7;
    }
    e.hazard = hazard_for(e);
  }
  if (log_)
    log_->emit(vcycle * cfg_.clock_ratio, EvUnit::Engine, EvKind::Rename,
               e.seq, e.prd == kNoPhys ? 0 : e.prd,
               e.pold == kNoPhys ? 0 : e.pold);
  rob_.push_back(e);
  q.push_back(e.seq);
  subq_.pop_front();
}

void Engine::do_issue_arith(uint64_t vcycle) {
  if (arith_q_.empty() || lanes_free_cycle_ > vcycle) return;
  auto it = arith_q_.begin();
  RobEntry* pick = nullptr;
  for (; it != arith_q_.end(); ++it) {
    RobEntry* e = find(*it);
    if (sources_ready(*e)) {
      pick = e;
      break;
    }
    if (cfg_.issue_scheme == IssueScheme::InOrder) return;
  }
  if (!pick) return;
  arith_q_.erase(it);
  execute_arith(*pick, vcycle);
}

void Engine::do_issue_mem(uint64_t vcycle) {
  if (mem_q_.empty() || !vmu_.has_free_port()) return;
  auto it = mem_q_.begin();
  RobEntry* pick = nullptr;
  for (; it != mem_q_.end(); ++it) {
    RobEntry* e = find(*it);
    if (!e->hazard && sources_ready(*e)) {
      pick = e;
      break;
    }
    if (cfg_.issue_scheme == IssueScheme::InOrder) return;
  }
  if (!pick) return;
  mem_q_.erase(it);
  dispatch_mem(*pick, vcycle);
}

void Engine::execute_arith(RobEntry& e, uint64_t vcycle) {
  e.issued = true;
  const uint64_t issue_tick = vcycle * cfg_.clock_ratio;
  const uint64_t* s1 = e.ps1 != kNoPhys ? prf_[e.ps1].data() : nullptr;
  const uint64_t* s2 = e.ps2 != kNoPhys ? prf_[e.ps2].data() : nullptr;
  const uint64_t* mask = e.pmask != kNoPhys ? prf_[e.pmask].data() : nullptr;
  const uint64_t* old = e.pold != kNoPhys ? prf_[e.pold].data() : nullptr;
  uint64_t* dst = e.prd != kNoPhys ? prf_[e.prd].data() : scratch_.data();

  uint64_t result = exec_vector_op(e.inst, e.vl, cfg_.mvl, e.scalar_bits, s1,
                                   s2, mask, old, dst);
  if (produces_scalar_result(e.inst.op)) {
    e.has_scalar_result = true;
    e.scalar_result = result;
  }

  uint32_t net = 0;
  if (instruction_class(e.inst.op) == InstClass::VectorElemManipulation)
    net = manipulation_net_cycles(e.inst, e.vl, e.scalar_bits, s2, cfg_.mvl,
                                  cfg_.lanes, cfg_.interconnect, log_,
                                  issue_tick, cfg_.clock_ratio, e.seq);
  LaneTiming t = lane_timing(e.inst, e.vl, cfg_, net);
  if (log_) {
    log_->emit(issue_tick, EvUnit::Engine, EvKind::Issue, e.seq,
               static_cast<uint64_t>(e.inst.op), e.vl);
    log_->emit(issue_tick, EvUnit::Engine, EvKind::Execute, e.seq,
               static_cast<uint64_t>(e.inst.op), t.total);
    emit_lane_events(*log_, t, e.inst, e.vl, cfg_, issue_tick, e.seq);
  }
  comps_.push({vcycle + t.total, e.seq});
  lanes_free_cycle_ = vcycle + t.total;
}

void Engine::dispatch_mem(RobEntry& e, uint64_t vcycle) {
  e.issued = true;
  const uint64_t issue_tick = vcycle * cfg_.clock_ratio;
  const uint64_t* mask = e.pmask != kNoPhys ? prf_[e.pmask].data() : nullptr;
  const uint64_t* idx = e.indexed && e.ps2 != kNoPhys ? prf_[e.ps2].data()
                                                      : nullptr;
  VmuJob job;
  job.seq = e.seq;
  job.is_store = e.is_store;
  job.accesses = gen_addresses(e.inst.mem_mode, e.vl, e.base, e.stride, idx,
                               mask);
  if (e.is_store) {
    const std::vector<uint64_t>& data = prf_[e.pdata];
    job.store_data.reserve(job.accesses.size());
    for (const ElemAccess& a : job.accesses)
      job.store_data.push_back(data[a.elem]);
  } else {
    std::vector<uint64_t>& dst = prf_[e.prd];
    std::fill(dst.begin(), dst.end(), 0);
    if (e.inst.masked && e.pold != kNoPhys) {
      const std::vector<uint64_t>& old = prf_[e.pold];
      for (uint32_t i = 0; i < e.vl; ++i)
        if (!(mask[i] & 1)) dst[i] = old[i];
    }
    job.dest = dst.data();
  }
  if (log_) {
    log_->emit(issue_tick, EvUnit::Engine, EvKind::Issue, e.seq,
               static_cast<uint64_t>(e.inst.op), e.vl);
    log_->emit(issue_tick, EvUnit::Engine, EvKind::Execute, e.seq,
               static_cast<uint64_t>(e.inst.op), job.accesses.size());
  }
  vmu_.dispatch(std::move(job), vcycle);
}

void Engine::check_invariants() const {
  std::vector<uint8_t> seen(cfg_.physical_regs, 0);
  auto mark = [&](uint16_t p, const char* role) {
    if (p >= cfg_.physical_regs)
      throw SimTrap(std::string("physical register index out of range (") +
                    role + ")");
    if (seen[p]++)
      throw SimTrap(std::string("physical register owned twice (") + role +
                    ")");
  };
  for (uint16_t p : rat_) mark(p, "rename table");
  for (uint16_t p : frl_) mark(p, "free list");
  size_t inflight = 0;
  for (const RobEntry& e : rob_) {
    if (e.pold != kNoPhys) {
      mark(e.pold, "in-flight previous mapping");
      ++inflight;
    }
  }
  if (kNumVRegs + frl_.size() + inflight != cfg_.physical_regs)
    throw SimTrap("physical register conservation violated");
  for (const RobEntry& e : rob_) {
    if (e.prd == kNoPhys) continue;
    if (!e.executed && valid_[e.prd])
      throw SimTrap("pending destination marked valid");
  }
}

}  // namespace vsim
