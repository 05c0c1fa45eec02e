#include "vsim/stats.hpp"

#include <cinttypes>
#include <cstdio>

namespace vsim {

std::optional<double> percent_vectorization(const ExecCounters& c) {
  uint64_t denom = c.scalar_instructions + c.vector_operations;
  if (denom == 0) return std::nullopt;
  return 100.0 * static_cast<double>(c.vector_operations) /
         static_cast<double>(denom);
}

std::optional<double> average_vl(const ExecCounters& c) {
  uint64_t n = c.total_vector();
  if (n == 0) return std::nullopt;
  return static_cast<double>(c.vector_operations) / static_cast<double>(n);
}

std::optional<double> instruction_reduction(uint64_t scalar_version_total,
                                            const ExecCounters& vec) {
  uint64_t denom = vec.total();
  if (denom == 0 || scalar_version_total == 0) return std::nullopt;
  return static_cast<double>(scalar_version_total) /
         static_cast<double>(denom);
}

std::optional<double> vao_speedup(uint64_t scalar_version_total,
                                  uint64_t vec_scalar_instructions,
                                  uint64_t vec_vector_operations) {
  uint64_t denom = vec_scalar_instructions + vec_vector_operations;
  if (denom == 0 || scalar_version_total == 0) return std::nullopt;
  return static_cast<double>(scalar_version_total) /
         static_cast<double>(denom);
}

std::optional<double> speedup(uint64_t baseline_ticks, uint64_t ticks) {
  if (ticks == 0 || baseline_ticks == 0) return std::nullopt;
  return static_cast<double>(baseline_ticks) / static_cast<double>(ticks);
}

nlohmann::ordered_json counters_to_json(const ExecCounters& c) {
  nlohmann::ordered_json j;
  j["scalar_instructions"] = c.scalar_instructions;
  j["vector_memory_instructions"] = c.vector_memory;
  j["vector_arithmetic_instructions"] = c.vector_arithmetic;
  j["vector_elem_manipulation_instructions"] = c.vector_elem_manipulation;
  j["total_vector_instructions"] = c.total_vector();
  j["vector_operations"] = c.vector_operations;
  j["total_instructions"] = c.total();
  return j;
}

nlohmann::ordered_json cache_to_json(const CacheStats& c) {
  nlohmann::ordered_json j;
  j["l1d_hits"] = c.l1d_hits;
  j["l1d_misses"] = c.l1d_misses;
  j["l2_hits"] = c.l2_hits;
  j["l2_misses"] = c.l2_misses;
  j["dram_lines"] = c.dram_lines;
  return j;
}

namespace {

nlohmann::ordered_json opt_json(std::optional<double> v) {
  if (!v) return nullptr;
  return *v;
}

}  // namespace

nlohmann::ordered_json make_report(const EngineConfig& cfg,
                                   const SimResult& result,
                                   const std::string& program_name) {
  nlohmann::ordered_json j;
  j["program"] = program_name;
  j["config"] = config_to_json(cfg);
  j["counters"] = counters_to_json(result.counters);
  auto& m = j["metrics"];
  m["percent_vectorization"] = opt_json(percent_vectorization(result.counters));
  m["average_vl"] = opt_json(average_vl(result.counters));
  m["notes"] = "vsetvl counted as a scalar instruction";
  if (result.ticks > 0) {
    auto& cy = j["cycles"];
    cy["ticks"] = result.ticks;
    cy["scalar_cycles"] = result.ticks;  // one scalar cycle per tick
    cy["vector_cycles"] = result.vector_cycles;
    j["memsys"] = cache_to_json(result.cache);
  }
  return j;
}

std::string sweep_csv_header() {
  return "program,config,lanes,mvl,issue_scheme,interconnect,ticks,"
         "scalar_instructions,total_vector_instructions,vector_operations,"
         "percent_vectorization,average_vl,l2_misses,dram_lines,speedup,"
         "vao_speedup\n";
}

std::string sweep_csv_row(const std::string& program_name,
                          const std::string& config_name,
                          const EngineConfig& cfg, const SimResult& result,
                          std::optional<double> speedup_vs_baseline,
                          std::optional<double> vao_vs_baseline) {
  char buf[512];
  auto pv = percent_vectorization(result.counters);
  auto avl = average_vl(result.counters);
  char sp[32] = "";
  if (speedup_vs_baseline)
    std::snprintf(sp, sizeof(sp), "%.4f", *speedup_vs_baseline);
  char vao[32] = "";
  if (vao_vs_baseline) std::snprintf(vao, sizeof(vao), "%.4f", *vao_vs_baseline);
  std::snprintf(buf, sizeof(buf),
                "%s,%s,%u,%u,%s,%s,%" PRIu64 ",%" PRIu64 ",%" PRIu64
                ",%" PRIu64 ",%.4f,%.4f,%" PRIu64 ",%" PRIu64 ",%s,%s\n",
                program_name.c_str(), config_name.c_str(), cfg.lanes, cfg.mvl,
                to_string(cfg.issue_scheme), to_string(cfg.interconnect),
                result.ticks, result.counters.scalar_instructions,
                result.counters.total_vector(),
                result.counters.vector_operations, pv ? *pv : 0.0,
                avl ? *avl : 0.0, result.cache.l2_misses,
                result.cache.dram_lines, sp, vao);
  return buf;
}

std::string trace_csv(const std::vector<TraceEntry>& trace) {
  std::string out = "seq,class,mnemonic,vl\n";
  char buf[128];
  for (const TraceEntry& t : trace) {
    const char* cls = "scalar";
    switch (t.cls) {
      case InstClass::VectorMemory: cls = "vector_memory"; break;
      case InstClass::VectorArithmetic: cls = "vector_arithmetic"; break;
      case InstClass::VectorElemManipulation:
        cls = "vector_elem_manipulation";
        break;
      default: break;
    }
    std::snprintf(buf, sizeof(buf), "%" PRIu64 ",%s,%s,%u\n", t.seq, cls,
                  t.mn.c_str(), t.vl);
    out += buf;
  }
  return out;
}

}  // namespace vsim
