#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace vsim {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class IssueScheme : uint8_t { InOrder, OutOfOrder };
enum class Topology : uint8_t { Ring, Crossbar };
enum class VmuAttach : uint8_t { L1d, L2 };

struct CacheConfig {
  uint32_t size_kb = 0;
  uint32_t assoc = 8;
  uint32_t latency = 0;  // ticks, on hit
  uint32_t mshrs = 8;
};

struct FuLatencies {
  // vector cycles
  uint32_t int_alu = 2;
  uint32_t int_mul = 3;
  uint32_t fp_add = 4;
  uint32_t fp_mul = 5;
  uint32_t fp_fma = 6;
  uint32_t fp_div = 12;   // unpipelined
  uint32_t fp_sqrt = 14;  // unpipelined
  uint32_t move_op = 2;
  uint32_t slide = 2;
};

struct EngineConfig {
  // [engine]
  uint32_t lanes = 1;
  uint32_t mvl = 8;  // elements of 64 bits
  uint32_t physical_regs = 40;
  uint32_t rob_depth = 32;
  uint32_t arith_q_depth = 16;
  uint32_t mem_q_depth = 16;
  uint32_t submit_q_depth = 8;
  IssueScheme issue_scheme = IssueScheme::InOrder;
  Topology interconnect = Topology::Ring;
  uint32_t vrf_line_bits = 512;
  uint32_t vrf_read_ports = 1;
  uint32_t vrf_write_ports = 1;
  bool shared_rw_port = false;
  uint32_t clock_ratio = 2;  // ticks per vector cycle (scalar cycle = 1 tick)
  FuLatencies fu;
  uint64_t step_limit = 1000000000ull;
  bool check_mem_discipline = true;

  // [vmu]
  uint32_t vmu_ports = 1;
  VmuAttach vmu_attach = VmuAttach::L2;

  // [memsys]  (latencies in ticks)
  CacheConfig l1d{32, 8, 4, 8};
  CacheConfig l2{256, 8, 12, 8};
  uint32_t dram_latency = 100;
  uint32_t dram_line_interval = 4;  // pipelined line rate

  uint32_t line_bytes() const { return vrf_line_bits / 8; }
  uint32_t elems_per_line() const { return vrf_line_bits / 64; }
};

// Set one "section.key" (or bare engine key) from its textual value.
// Throws ConfigError on unknown keys or unparsable values.
void config_set(EngineConfig& cfg, const std::string& key,
                const std::string& value);

// Layered loaders: later calls override earlier values.
void load_config_ini(EngineConfig& cfg, const std::string& text,
                     const std::string& filename = "<config>");
void load_config_file(EngineConfig& cfg, const std::string& path);

// Throws ConfigError describing the first violated constraint.
void validate(const EngineConfig& cfg);

nlohmann::ordered_json config_to_json(const EngineConfig& cfg);

const char* to_string(IssueScheme s);
const char* to_string(Topology t);
const char* to_string(VmuAttach a);

}  // namespace vsim
