#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "vsim/config.hpp"
#include "vsim/simulator.hpp"

namespace vsim {

// Vectorization metrics. A vector instruction of length vl contributes vl
// operations; vsetvl administers vector state but executes on the scalar
// pipeline, so it counts as a scalar instruction.

// 100 * vector_operations / (scalar_instructions + vector_operations)
std::optional<double> percent_vectorization(const ExecCounters& c);

// vector_operations / total vector instructions
std::optional<double> average_vl(const ExecCounters& c);

// Vector/scalar instruction-stream reduction: total instructions of the
// scalar version over total instructions of the vector version.
std::optional<double> instruction_reduction(uint64_t scalar_version_total,
                                            const ExecCounters& vec);

// Analytical acceleration predictor: total instructions of the scalar
// version over the vector version's scalar instructions plus vector
// operations. A rough forecast of the achievable speedup if every vector
// operation retired in unit time.
std::optional<double> vao_speedup(uint64_t scalar_version_total,
                                  uint64_t vec_scalar_instructions,
                                  uint64_t vec_vector_operations);

// Wall-clock speedup from tick counts.
std::optional<double> speedup(uint64_t baseline_ticks, uint64_t ticks);

nlohmann::ordered_json counters_to_json(const ExecCounters& c);
nlohmann::ordered_json cache_to_json(const CacheStats& c);

// Full run report: config echo, counters, metrics, cycle and memory-system
// sections. Timing fields are omitted for functional-only runs
// (result.ticks == 0). Reports contain no timestamps so identical runs
// produce identical bytes.
nlohmann::ordered_json make_report(const EngineConfig& cfg,
                                   const SimResult& result,
                                   const std::string& program_name);

// Sweep output, one row per run. The speedup and vao_speedup columns are
// left empty when no baseline run is available.
std::string sweep_csv_header();
std::string sweep_csv_row(const std::string& program_name,
                          const std::string& config_name,
                          const EngineConfig& cfg, const SimResult& result,
                          std::optional<double> speedup_vs_baseline = {},
                          std::optional<double> vao_vs_baseline = {});

std::string trace_csv(const std::vector<TraceEntry>& trace);

}  // namespace vsim
