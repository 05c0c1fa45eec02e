#pragma once
#include "vsim/inst.hpp"

#include <string>
#include <vector>

namespace vsim {

// One initialized 64-bit-word data segment. Segments get sequential,
// 64-byte-aligned bases unless the source pins one with "@0xADDR".
struct DataSegment {
  std::string label;
  uint64_t base = 0;
  bool fp = false; // declared f64 (formatting only; storage is raw words)
  bool explicit_base = false;
  std::vector<uint64_t> words;

  uint64_t size_bytes() const { return words.size() * kSewBytes; }
  bool operator==(const DataSegment&) const = default;
};

struct Program {
  std::vector<Instruction> text;
  std::vector<DataSegment> data;
  uint32_t entry = 0; // index of label "main" if present, else 0

  const DataSegment* find_segment(const std::string& label) const {
    for (const auto& s : data)
      if (s.label == label) return &s;
    return nullptr;
  }
  bool operator==(const Program&) const = default;
};

} // namespace vsim
