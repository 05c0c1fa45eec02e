#include "vsim/interconnect.hpp"

#include <algorithm>
#include <unordered_set>

namespace vsim {

uint32_t ring_hops(uint32_t src_lane, uint32_t dst_lane, uint32_t lanes) {
  uint32_t fwd = (dst_lane + lanes - src_lane) % lanes;
  uint32_t bwd = (src_lane + lanes - dst_lane) % lanes;
  return std::min(fwd, bwd);
}

namespace {

// clockwise (+1) when the forward distance wins or ties
bool ring_clockwise(uint32_t src_lane, uint32_t dst_lane, uint32_t lanes) {
  uint32_t fwd = (dst_lane + lanes - src_lane) % lanes;
  uint32_t bwd = (src_lane + lanes - dst_lane) % lanes;
  return fwd <= bwd;
}

// resource keys: kind | lane | cycle packed into one word
constexpr uint64_t kInject = 0, kReceive = 1, kLinkCw = 2, kLinkCcw = 3;

uint64_t rkey(uint64_t kind, uint64_t lane, uint64_t cycle) {
  return (kind << 60) | (lane << 48) | cycle;
}

}  // namespace

uint32_t permutation_cycles(const std::vector<NetMove>& moves, uint32_t lanes,
                            Topology topo, uint32_t vl, EventLog* log,
                            uint64_t base_tick, uint32_t clock_ratio,
                            uint64_t seq) {
  if (lanes <= 1 || vl == 0) return 0;
  std::vector<NetMove> cross;
  cross.reserve(moves.size());
  for (const NetMove& m : moves)
    if (owner_lane(m.src, lanes) != owner_lane(m.dst, lanes))
      cross.push_back(m);
  if (cross.empty()) return 0;
  // oldest source first, destination index as tie-break
  std::stable_sort(cross.begin(), cross.end(),
                   [lanes](const NetMove& a, const NetMove& b) {
                     uint32_t sa = a.src / lanes, sb = b.src / lanes;
                     if (sa != sb) return sa < sb;
                     return a.dst < b.dst;
                   });

  std::unordered_set<uint64_t> busy;
  busy.reserve(cross.size() * 4);
  uint64_t last_arrival = 0;
  for (const NetMove& m : cross) {
    uint32_t ls = owner_lane(m.src, lanes);
    uint32_t ld = owner_lane(m.dst, lanes);
    uint32_t hops = topo == Topology::Crossbar ? 1 : ring_hops(ls, ld, lanes);
    bool cw = topo == Topology::Crossbar || ring_clockwise(ls, ld, lanes);
    uint64_t link_kind = cw ? kLinkCw : kLinkCcw;
    for (uint64_t c = m.src / lanes;; ++c) {
      if (busy.count(rkey(kInject, ls, c))) continue;
      if (busy.count(rkey(kReceive, ld, c + hops))) continue;
      bool links_free = true;
      if (topo == Topology::Ring) {
        uint32_t at = ls;
        for (uint32_t k = 0; k < hops; ++k) {
          if (busy.count(rkey(link_kind, at, c + 1 + k))) {
            links_free = false;
            break;
          }
          at = cw ? (at + 1) % lanes : (at + lanes - 1) % lanes;
        }
      }
      if (!links_free) continue;
      busy.insert(rkey(kInject, ls, c));
      busy.insert(rkey(kReceive, ld, c + hops));
      if (topo == Topology::Ring) {
        uint32_t at = ls;
        for (uint32_t k = 0; k < hops; ++k) {
          busy.insert(rkey(link_kind, at, c + 1 + k));
          at = cw ? (at + 1) % lanes : (at + lanes - 1) % lanes;
        }
      }
      uint64_t arrival = c + hops;
      last_arrival = std::max(last_arrival, arrival);
      if (log)
        log->emit(base_tick + arrival * clock_ratio, EvUnit::Net,
                  EvKind::NetHop, seq, m.dst, hops);
      break;
    }
  }
  uint64_t e = (vl + lanes - 1) / lanes;
  uint64_t base = e - 1;
  return last_arrival > base ? static_cast<uint32_t>(last_arrival - base) : 0;
}

uint32_t reduction_cycles(uint32_t lanes, Topology topo, bool fp) {
  if (lanes <= 1) return 0;
  if (topo == Topology::Ring || fp) return lanes - 1;
  uint32_t steps = 0;
  for (uint32_t n = lanes; n > 1; n = (n + 1) / 2) ++steps;
  return steps;
}

std::vector<NetMove> slide_pattern(Opcode op, uint32_t vl, uint64_t offset) {
  std::vector<NetMove> moves;
  if (vl == 0) return moves;
  switch (op) {
    case Opcode::VSLIDE1UP:
      for (uint32_t i = 1; i < vl; ++i) moves.push_back({i, i - 1});
      break;
    case Opcode::VSLIDE1DOWN:
      for (uint32_t i = 0; i + 1 < vl; ++i) moves.push_back({i, i + 1});
      break;
    case Opcode::VSLIDEUP:
      for (uint32_t i = 0; i < vl; ++i) {
        if (i >= offset && i - offset < vl)
          moves.push_back({i, static_cast<uint32_t>(i - offset)});
      }
      break;
    case Opcode::VSLIDEDOWN:
      for (uint32_t i = 0; i < vl; ++i) {
        uint64_t src = i + offset;
        if (src < vl) moves.push_back({i, static_cast<uint32_t>(src)});
      }
      break;
    default:
      break;
  }
  return moves;
}

std::vector<NetMove> gather_pattern(const uint64_t* index, uint32_t vl,
                                    uint32_t mvl) {
  std::vector<NetMove> moves;
  moves.reserve(vl);
  for (uint32_t i = 0; i < vl; ++i) {
    uint64_t src = index[i];
    if (src < mvl) moves.push_back({i, static_cast<uint32_t>(src)});
  }
  return moves;
}

uint32_t manipulation_net_cycles(const Instruction& inst, uint32_t vl,
                                 uint64_t slide_offset, const uint64_t* index,
                                 uint32_t mvl, uint32_t lanes, Topology topo,
                                 EventLog* log, uint64_t base_tick,
                                 uint32_t clock_ratio, uint64_t seq) {
  std::vector<NetMove> moves;
  switch (inst.op) {
    case Opcode::VSLIDE1UP:
    case Opcode::VSLIDE1DOWN:
      moves = slide_pattern(inst.op, vl, 1);
      break;
    case Opcode::VSLIDEUP:
    case Opcode::VSLIDEDOWN:
      moves = slide_pattern(inst.op, vl, slide_offset);
      break;
    case Opcode::VRGATHER:
      moves = gather_pattern(index, vl, mvl);
      break;
    default:
      return 0;
  }
  return permutation_cycles(moves, lanes, topo, vl, log, base_tick,
                            clock_ratio, seq);
}

}  // namespace vsim
