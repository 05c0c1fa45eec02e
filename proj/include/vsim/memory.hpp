#pragma once
#include "vsim/program.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace vsim {

// Raised on architectural errors: out-of-segment or misaligned accesses,
// step-limit overruns, memory-discipline violations.
struct SimTrap : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat architectural memory: the program's data segments plus a small stack
// region. Caches in the timed model are tag-only, so this image is the single
// source of data for both the scalar core and the vector memory unit.
class MemoryImage {
public:
  static constexpr uint64_t kStackTop = 0x7fff0000;
  static constexpr uint64_t kStackBytes = 64 * 1024;

  static MemoryImage from_program(const Program& p);

  void add_segment(const std::string& label, uint64_t base,
                   const std::vector<uint64_t>& words);

  uint64_t read_u64(uint64_t addr) const;
  void write_u64(uint64_t addr, uint64_t value);
  bool contains(uint64_t addr) const; // 8 aligned bytes inside one segment

  struct Segment {
    std::string label;
    uint64_t base;
    std::vector<uint64_t> words;
    bool operator==(const Segment&) const = default;
  };
  const std::vector<Segment>& segments() const { return segs_; }
  const Segment* find(const std::string& label) const;

  bool operator==(const MemoryImage&) const = default;

private:
  const Segment* locate(uint64_t addr) const;
  std::vector<Segment> segs_; // sorted by base, non-overlapping
};

} // namespace vsim
