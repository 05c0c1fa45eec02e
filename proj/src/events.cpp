#include "vsim/events.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>

namespace vsim {

const char* to_string(EvUnit u) {
  switch (u) {
    case EvUnit::Core: return "core";
    case EvUnit::Engine: return "engine";
    case EvUnit::Lanes: return "lanes";
    case EvUnit::Net: return "net";
    case EvUnit::Vmu: return "vmu";
    case EvUnit::Mem: return "mem";
  }
  return "?";
}

const char* to_string(EvKind k) {
  switch (k) {
    case EvKind::Rename: return "rename";
    case EvKind::Issue: return "issue";
    case EvKind::Execute: return "execute";
    case EvKind::Commit: return "commit";
    case EvKind::FuStart: return "fu_start";
    case EvKind::FuElem: return "fu_elem";
    case EvKind::WbLine: return "wb_line";
    case EvKind::LbLine: return "lb_line";
    case EvKind::SbDrain: return "sb_drain";
    case EvKind::NetHop: return "net_hop";
    case EvKind::CombineStep: return "combine_step";
    case EvKind::MemReq: return "memreq";
    case EvKind::MemResp: return "memresp";
    case EvKind::ScalarResult: return "scalar_result";
  }
  return "?";
}

std::string EventLog::to_csv() const {
  // units emit some events ahead of time (e.g. scheduled completions), so
  // present rows in tick order; stable sort keeps emission order within a
  // tick deterministic
  std::vector<EventRec> rows = records_;
  std::stable_sort(rows.begin(), rows.end(),
                   [](const EventRec& a, const EventRec& b) {
                     return a.tick < b.tick;
                   });
  std::string out = "tick,unit,event,seq,detail\n";
  char buf[128];
  for (const EventRec& r : rows) {
    const char* fmt;
    // addresses render as hex, everything else as decimal
    if (r.kind == EvKind::MemReq || r.kind == EvKind::MemResp)
      fmt = "%" PRIu64 ",%s,%s,%" PRIu64 ",0x%" PRIx64 "|%" PRIu64 "\n";
    else
      fmt = "%" PRIu64 ",%s,%s,%" PRIu64 ",%" PRIu64 "|%" PRIu64 "\n";
    std::snprintf(buf, sizeof(buf), fmt, r.tick, to_string(r.unit),
                  to_string(r.kind), r.seq, r.a, r.b);
    out += buf;
  }
  return out;
}

uint64_t EventLog::digest() const {
  std::string csv = to_csv();
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : csv) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace vsim
