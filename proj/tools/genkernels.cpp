// genkernels: materializes the benchmark corpus as VASM files plus a
// manifest describing each kernel's output regions, comparison rule and
// exercised vector features. The committed kernels/ directory is the
// output of this tool at its defaults (seed 1, tiny size).

#include <CLI11.hpp>
#include <json.hpp>

#include "vsim/assembler.hpp"
#include "vsim/kernels.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

using namespace vsim;
namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write: " + path.string());
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generate the VASM benchmark corpus"};
  std::string out_dir = "kernels";
  std::string size_name = "tiny";
  uint64_t seed = 1;
  app.add_option("--out", out_dir, "output directory (default kernels)");
  app.add_option("--size", size_name, "tiny | small | medium");
  app.add_option("--seed", seed, "generator seed (default 1)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  KernelSize size;
  if (size_name == "tiny") size = KernelSize::Tiny;
  else if (size_name == "small") size = KernelSize::Small;
  else if (size_name == "medium") size = KernelSize::Medium;
  else {
    std::cerr << "bad --size: " << size_name << "\n";
    return 1;
  }

  try {
    fs::create_directories(out_dir);
    nlohmann::ordered_json manifest;
    manifest["seed"] = seed;
    manifest["size"] = size_name;
    auto kernels = nlohmann::ordered_json::array();
    for (const auto& k : generate_kernels(seed, size)) {
      // both sides must assemble before anything is written
      Program vp = assemble(k.vector_asm);
      Program sp = assemble(k.scalar_asm);
      std::string vfile = k.name + "_" + size_name + ".vasm";
      std::string sfile = k.name + "_" + size_name + "_scalar.vasm";
      write_text(fs::path(out_dir) / vfile, k.vector_asm);
      write_text(fs::path(out_dir) / sfile, k.scalar_asm);

      nlohmann::ordered_json j;
      j["name"] = k.name;
      j["description"] = k.description;
      j["vector"] = vfile;
      j["scalar"] = sfile;
      j["outputs"] = k.outputs;
      j["ulp_rule"] = k.ulp_rule;
      j["features"] = k.features;
      j["vector_instructions"] = vp.text.size();
      j["scalar_instructions"] = sp.text.size();
      kernels.push_back(std::move(j));
      std::cerr << k.name << ": " << vfile << " + " << sfile << "\n";
    }
    manifest["kernels"] = std::move(kernels);
    write_text(fs::path(out_dir) / ("manifest_" + size_name + ".json"),
               manifest.dump(2) + "\n");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
