#pragma once
// Independent reference model for the inter-lane network, used to check
// src/interconnect.cpp. Where the production code searches for the earliest
// feasible slot per move, this reference steps the network cycle by cycle
// with explicit per-cycle resource tables, so the two can only agree if the
// shared contract is honoured:
//
//  - element p is produced by lane p%L at local cycle p/L
//  - a cross-lane move occupies its source lane's inject port for one cycle,
//    each directed ring link for one cycle per hop, and the destination
//    lane's receive port on the arrival cycle; arrival = inject + hops
//  - crossbar: every cross-lane move is one hop
//  - ring path takes the shorter direction, ties broken clockwise (+1)
//  - moves are served oldest-source-first (then by destination element)
//  - same-lane moves are free
//
// Reported cost is the added latency past perfectly overlapped production:
// max(0, last_arrival - (ceil(vl/L) - 1)).

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

namespace refnet {

struct Move {
  uint32_t dst;
  uint32_t src;
};

inline uint32_t ring_hops(uint32_t s, uint32_t d, uint32_t lanes) {
  uint32_t fwd = (d + lanes - s) % lanes;
  uint32_t bwd = (s + lanes - d) % lanes;
  return std::min(fwd, bwd);
}

// true -> clockwise (+1) direction
inline bool ring_dir_cw(uint32_t s, uint32_t d, uint32_t lanes) {
  uint32_t fwd = (d + lanes - s) % lanes;
  uint32_t bwd = (s + lanes - d) % lanes;
  return fwd <= bwd;
}

inline uint64_t added_cycles(std::vector<Move> moves, uint32_t lanes,
                             bool crossbar, uint32_t vl) {
  if (lanes <= 1 || moves.empty()) return 0;
  std::vector<Move> cross;
  for (const Move& m : moves)
    if (m.src % lanes != m.dst % lanes) cross.push_back(m);
  if (cross.empty()) return 0;
  std::sort(cross.begin(), cross.end(), [&](const Move& a, const Move& b) {
    uint32_t sa = a.src / lanes, sb = b.src / lanes;
    if (sa != sb) return sa < sb;
    return a.dst < b.dst;
  });

  // busy[cycle] sets, keyed by resource id
  //   inject lane l   -> ('I', l)
  //   receive lane l  -> ('R', l)
  //   link l, dir d   -> ('L', l * 2 + d)   (link from l toward l+1 if d==0,
  //                                          toward l-1 if d==1)
  std::map<uint64_t, std::set<std::pair<char, uint32_t>>> busy;
  auto free_at = [&](uint64_t cyc, char kind, uint32_t id) {
    auto it = busy.find(cyc);
    return it == busy.end() || !it->second.count({kind, id});
  };
  auto take = [&](uint64_t cyc, char kind, uint32_t id) {
    busy[cyc].insert({kind, id});
  };

  uint64_t last_arrival = 0;
  for (const Move& m : cross) {
    uint32_t ls = m.src % lanes, ld = m.dst % lanes;
    uint64_t ready = m.src / lanes;
    uint32_t hops = crossbar ? 1 : ring_hops(ls, ld, lanes);
    bool cw = crossbar || ring_dir_cw(ls, ld, lanes);
    for (uint64_t c = ready;; ++c) {
      bool ok = free_at(c, 'I', ls) && free_at(c + hops, 'R', ld);
      if (ok && !crossbar) {
        uint32_t at = ls;
        for (uint32_t k = 0; k < hops && ok; ++k) {
          uint32_t dir = cw ? 0 : 1;
          if (!free_at(c + 1 + k, 'L', at * 2 + dir)) ok = false;
          at = cw ? (at + 1) % lanes : (at + lanes - 1) % lanes;
        }
      }
      if (!ok) continue;
      take(c, 'I', ls);
      take(c + hops, 'R', ld);
      if (!crossbar) {
        uint32_t at = ls;
        for (uint32_t k = 0; k < hops; ++k) {
          uint32_t dir = cw ? 0 : 1;
          take(c + 1 + k, 'L', at * 2 + dir);
          at = cw ? (at + 1) % lanes : (at + lanes - 1) % lanes;
        }
      }
      last_arrival = std::max(last_arrival, c + hops);
      break;
    }
  }
  uint64_t e = (vl + lanes - 1) / lanes;
  uint64_t base = e == 0 ? 0 : e - 1;
  return last_arrival > base ? last_arrival - base : 0;
}

} // namespace refnet
