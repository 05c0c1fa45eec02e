#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace vsim {

// One benchmark kernel: a vectorized program and a scalar twin computing the
// same result into the same output arrays, bit for bit. Inputs are generated
// deterministically from the seed and baked into the .data sections.
struct KernelSource {
  std::string name;
  std::string vector_asm;
  std::string scalar_asm;
  std::string description;
  // Labels of the declared output regions (data segments holding results).
  std::vector<std::string> outputs;
  // Scalar-vs-vector tolerance; every kernel here is engineered to "exact"
  // (bit-identical, 0 ulp) by mirroring the rounding sequence in the twin.
  std::string ulp_rule;
  // Trace-checkable tags: unit_stride, strided, indexed, masked, slides,
  // reductions, scalar_comm.
  std::vector<std::string> features;
};

enum class KernelSize { Tiny, Small, Medium };

const char* to_string(KernelSize s);

std::vector<KernelSource> generate_kernels(uint64_t seed,
                                           KernelSize size = KernelSize::Tiny);

// splitmix64: the deterministic generator behind all kernel data
uint64_t splitmix64(uint64_t& state);
// uniform double in [lo, hi) from splitmix64 bits
double splitmix_double(uint64_t& state, double lo, double hi);

}  // namespace vsim
