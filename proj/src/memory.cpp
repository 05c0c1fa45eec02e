#include "vsim/memory.hpp"

#include <algorithm>

namespace vsim {

MemoryImage MemoryImage::from_program(const Program& p) {
  MemoryImage m;
  for (const auto& seg : p.data) m.add_segment(seg.label, seg.base, seg.words);
  m.add_segment("__stack", kStackTop - kStackBytes,
                std::vector<uint64_t>(kStackBytes / kSewBytes, 0));
  return m;
}

void MemoryImage::add_segment(const std::string& label, uint64_t base,
                              const std::vector<uint64_t>& words) {
  Segment s{label, base, words};
  auto it = std::upper_bound(
      segs_.begin(), segs_.end(), s,
      [](const Segment& a, const Segment& b) { return a.base < b.base; });
  segs_.insert(it, std::move(s));
}

const MemoryImage::Segment* MemoryImage::locate(uint64_t addr) const {
  // Last segment with base <= addr.
  auto it = std::upper_bound(
      segs_.begin(), segs_.end(), addr,
      [](uint64_t a, const Segment& s) { return a < s.base; });
  if (it == segs_.begin()) return nullptr;
  --it;
  if (addr - it->base >= it->words.size() * kSewBytes) return nullptr;
  return &*it;
}

bool MemoryImage::contains(uint64_t addr) const {
  return addr % kSewBytes == 0 && locate(addr) != nullptr;
}

uint64_t MemoryImage::read_u64(uint64_t addr) const {
  if (addr % kSewBytes != 0)
    throw SimTrap("misaligned 64-bit read at 0x" + std::to_string(addr));
  const Segment* s = locate(addr);
  if (!s)
    throw SimTrap("read outside declared data segments at address " +
                  std::to_string(addr));
  return s->words[(addr - s->base) / kSewBytes];
}

void MemoryImage::write_u64(uint64_t addr, uint64_t value) {
  if (addr % kSewBytes != 0)
    throw SimTrap("misaligned 64-bit write at 0x" + std::to_string(addr));
  const Segment* s = locate(addr);
  if (!s)
    throw SimTrap("write outside declared data segments at address " +
                  std::to_string(addr));
  const_cast<Segment*>(s)->words[(addr - s->base) / kSewBytes] = value;
}

const MemoryImage::Segment* MemoryImage::find(const std::string& label) const {
  for (const auto& s : segs_)
    if (s.label == label) return &s;
  return nullptr;
}

} // namespace vsim
