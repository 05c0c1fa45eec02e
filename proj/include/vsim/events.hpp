#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace vsim {

enum class EvUnit : uint8_t { Core, Engine, Lanes, Net, Vmu, Mem };

enum class EvKind : uint8_t {
  Rename,
  Issue,
  Execute,
  Commit,
  FuStart,
  FuElem,
  WbLine,
  LbLine,
  SbDrain,
  NetHop,
  CombineStep,
  MemReq,
  MemResp,
  ScalarResult,
};

struct EventRec {
  uint64_t tick;
  EvUnit unit;
  EvKind kind;
  uint64_t seq;  // vector instruction sequence number (program order)
  uint64_t a;    // event-specific detail (element, line address, count, ...)
  uint64_t b;
};

const char* to_string(EvUnit u);
const char* to_string(EvKind k);

class EventLog {
 public:
  bool enabled = false;

  void emit(uint64_t tick, EvUnit unit, EvKind kind, uint64_t seq,
            uint64_t a = 0, uint64_t b = 0) {
    if (enabled) records_.push_back({tick, unit, kind, seq, a, b});
  }

  const std::vector<EventRec>& records() const { return records_; }
  void clear() { records_.clear(); }

  // "tick,unit,event,seq,detail" rows; stable across runs.
  std::string to_csv() const;
  // Order-sensitive fnv1a digest of the rendered CSV.
  uint64_t digest() const;

 private:
  std::vector<EventRec> records_;
};

}  // namespace vsim
