// vsim: driver for the vector-engine simulator. Subcommands:
//   run    assemble + simulate one program, write report files
//   sweep  run a lanes x MVL configuration grid, emit one CSV row per point
//   asm    assemble and print the canonical form of a program
//   check  compare timed run, reference model and optional golden file
//
// Exit codes: 0 ok, 2 assembly/program error, 3 config error,
//             4 architectural or golden mismatch, 5 step limit exceeded,
//             1 any other failure.

#include <CLI11.hpp>
#include <json.hpp>

#include "vsim/assembler.hpp"
#include "vsim/config.hpp"
#include "vsim/kernels.hpp"
#include "vsim/simulator.hpp"
#include "vsim/stats.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace vsim;
namespace fs = std::filesystem;

namespace {

struct LoadedProgram {
  Program program;
  std::string name;           // report/CSV identifier
  std::string twin_source;    // scalar twin VASM when known (kernel: scheme)
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open program file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string stem_of(const std::string& path) {
  return fs::path(path).stem().string();
}

// Program specifiers are either VASM file paths or the generator scheme
//   kernel:<name>:<size>[:scalar]
// where <size> is tiny, small or medium. The generator seed comes from
// --seed so corpus variants stay reproducible.
LoadedProgram load_program(const std::string& spec, uint64_t seed) {
  LoadedProgram out;
  if (spec.rfind("kernel:", 0) == 0) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() < 3 || parts.size() > 4 ||
        (parts.size() == 4 && parts[3] != "scalar"))
      throw std::runtime_error(
          "bad kernel specifier (want kernel:<name>:<size>[:scalar]): " +
          spec);
    KernelSize size;
    if (parts[2] == "tiny") size = KernelSize::Tiny;
    else if (parts[2] == "small") size = KernelSize::Small;
    else if (parts[2] == "medium") size = KernelSize::Medium;
    else throw std::runtime_error("bad kernel size: " + parts[2]);
    bool scalar = parts.size() == 4;
    for (const auto& k : generate_kernels(seed, size)) {
      if (k.name != parts[1]) continue;
      out.program = assemble(scalar ? k.scalar_asm : k.vector_asm);
      out.name = k.name + "_" + parts[2] + (scalar ? "_scalar" : "");
      out.twin_source = k.scalar_asm;
      return out;
    }
    throw std::runtime_error("unknown kernel: " + parts[1]);
  }
  out.program = assemble(read_file(spec));
  out.name = stem_of(spec);
  return out;
}

EngineConfig build_config(const std::vector<std::string>& files,
                          const std::vector<std::string>& sets) {
  EngineConfig cfg;
  for (const auto& f : files) load_config_file(cfg, f);
  for (const auto& s : sets) {
    auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError("--set expects section.key=value, got: " + s);
    config_set(cfg, s.substr(0, eq), s.substr(eq + 1));
  }
  if (const char* env = std::getenv("VSIM_STEP_LIMIT"))
    config_set(cfg, "engine.step_limit", env);
  validate(cfg);
  return cfg;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write: " + path);
  out << text;
}

nlohmann::ordered_json segments_json(const Program& p, const MemoryImage& m) {
  nlohmann::ordered_json segs = nlohmann::ordered_json::object();
  char buf[32];
  for (const auto& seg : p.data) {
    auto arr = nlohmann::ordered_json::array();
    for (size_t i = 0; i < seg.words.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "0x%016llx",
                    (unsigned long long)m.read_u64(seg.base + 8 * i));
      arr.push_back(buf);
    }
    segs[seg.label] = std::move(arr);
  }
  return segs;
}

// Returns a human-readable description of the first difference, if any.
std::optional<std::string> diff_golden(const nlohmann::ordered_json& got,
                                       const nlohmann::ordered_json& want) {
  for (auto it = want.begin(); it != want.end(); ++it) {
    if (!got.contains(it.key())) return "missing segment " + it.key();
    const auto& g = got[it.key()];
    const auto& w = it.value();
    if (g.size() != w.size())
      return "segment " + it.key() + " size " + std::to_string(g.size()) +
             " != " + std::to_string(w.size());
    for (size_t i = 0; i < g.size(); ++i)
      if (g[i] != w[i])
        return "segment " + it.key() + "[" + std::to_string(i) +
               "]: " + g[i].get<std::string>() + " != " +
               w[i].get<std::string>();
  }
  for (auto it = got.begin(); it != got.end(); ++it)
    if (!want.contains(it.key())) return "extra segment " + it.key();
  return std::nullopt;
}

// Compares output memory against a golden JSON file; creates the golden on
// first use. Returns 0 or the mismatch exit code 4.
int check_against_golden(const std::string& golden_path,
                         const LoadedProgram& lp, const SimResult& result) {
  auto got = segments_json(lp.program, result.memory);
  if (!fs::exists(golden_path)) {
    nlohmann::ordered_json j;
    j["program"] = lp.name;
    j["segments"] = got;
    write_text(golden_path, j.dump(2) + "\n");
    std::cerr << "golden written: " << golden_path << "\n";
    return 0;
  }
  std::ifstream in(golden_path);
  nlohmann::ordered_json j = nlohmann::ordered_json::parse(in);
  if (auto d = diff_golden(got, j["segments"])) {
    std::cerr << "golden mismatch (" << golden_path << "): " << *d << "\n";
    return 4;
  }
  return 0;
}

int check_against_reference(const SimResult& timed, const SimResult& ref) {
  auto diffs = compare_results(timed, ref);
  if (diffs.empty()) return 0;
  std::cerr << "timed run diverges from the reference model:\n";
  for (size_t i = 0; i < diffs.size() && i < 8; ++i)
    std::cerr << "  " << diffs[i] << "\n";
  if (diffs.size() > 8)
    std::cerr << "  ... " << diffs.size() - 8 << " more\n";
  return 4;
}

void append_csv_row(const std::string& path, const std::string& row) {
  bool fresh = !fs::exists(path) || fs::file_size(path) == 0;
  std::ofstream out(path, std::ios::app | std::ios::binary);
  if (!out) throw std::runtime_error("cannot write: " + path);
  if (fresh) out << sweep_csv_header();
  out << row;
}

std::string grid_name(const EngineConfig& cfg) {
  return "mvl" + std::to_string(cfg.mvl) + "_l" + std::to_string(cfg.lanes);
}

// ---------------------------------------------------------------------------

int cmd_run(const std::string& program_spec,
            const std::vector<std::string>& cfg_files,
            const std::vector<std::string>& sets, uint64_t seed,
            bool functional, bool do_check, const std::string& golden,
            bool events, bool trace, const std::string& report_path,
            const std::string& csv_path) {
  LoadedProgram lp = load_program(program_spec, seed);
  EngineConfig cfg = build_config(cfg_files, sets);

  SimOptions opt;
  opt.events = events;
  opt.trace = trace;

  SimResult result = functional ? run_reference(lp.program, cfg, opt)
                                : run_timed(lp.program, cfg, opt);

  write_text(report_path, make_report(cfg, result, lp.name).dump(2) + "\n");
  if (events) write_text("events.csv", result.events.to_csv());
  if (trace) write_text("trace.csv", trace_csv(result.trace));
  if (!csv_path.empty())
    append_csv_row(csv_path,
                   sweep_csv_row(lp.name, grid_name(cfg), cfg, result));

  if (do_check) {
    SimResult ref = result;
    if (!functional) {
      ref = run_reference(lp.program, cfg);
      if (int rc = check_against_reference(result, ref)) return rc;
    }
    if (!golden.empty())
      if (int rc = check_against_golden(golden, lp, ref)) return rc;
    std::cerr << "check ok\n";
  }
  return 0;
}

int cmd_check(const std::string& program_spec,
              const std::vector<std::string>& cfg_files,
              const std::vector<std::string>& sets, uint64_t seed,
              const std::string& golden) {
  LoadedProgram lp = load_program(program_spec, seed);
  EngineConfig cfg = build_config(cfg_files, sets);
  SimResult ref = run_reference(lp.program, cfg);
  SimResult timed = run_timed(lp.program, cfg);
  if (int rc = check_against_reference(timed, ref)) return rc;
  if (!golden.empty())
    if (int rc = check_against_golden(golden, lp, ref)) return rc;
  std::cerr << "check ok\n";
  return 0;
}

int cmd_asm(const std::string& program_spec, uint64_t seed,
            const std::string& out_path) {
  LoadedProgram lp = load_program(program_spec, seed);
  std::string canon = disassemble(lp.program);
  if (out_path.empty())
    std::cout << canon;
  else
    write_text(out_path, canon);
  std::cerr << lp.name << ": " << lp.program.text.size() << " instructions, "
            << lp.program.data.size() << " data segments\n";
  return 0;
}

std::vector<uint32_t> parse_list(const std::string& csv) {
  std::vector<uint32_t> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(static_cast<uint32_t>(std::stoul(item)));
  if (out.empty()) throw ConfigError("empty value list: " + csv);
  return out;
}

// Locates the scalar twin used as the sweep's speedup denominator:
// an explicit --baseline wins; kernel: programs know their twin; file
// programs look for a <stem>_scalar.vasm sibling.
std::optional<Program> find_baseline(const std::string& baseline_flag,
                                     const std::string& program_spec,
                                     const LoadedProgram& lp, uint64_t seed) {
  if (baseline_flag == "none") return std::nullopt;
  if (!baseline_flag.empty())
    return load_program(baseline_flag, seed).program;
  if (!lp.twin_source.empty()) return assemble(lp.twin_source);
  if (program_spec.rfind("kernel:", 0) != 0) {
    fs::path p(program_spec);
    fs::path sib = p.parent_path() / (p.stem().string() + "_scalar.vasm");
    if (fs::exists(sib)) return assemble(read_file(sib.string()));
  }
  return std::nullopt;
}

int cmd_sweep(const std::string& program_spec,
              const std::vector<std::string>& cfg_files,
              const std::vector<std::string>& sets, uint64_t seed,
              const std::string& lanes_csv, const std::string& mvl_csv,
              const std::string& baseline_flag, const std::string& csv_path,
              unsigned jobs) {
  LoadedProgram lp = load_program(program_spec, seed);
  EngineConfig base = build_config(cfg_files, sets);
  std::vector<uint32_t> lanes = parse_list(lanes_csv);
  std::vector<uint32_t> mvls = parse_list(mvl_csv);

  struct Row {
    EngineConfig cfg;
    std::string name;
    SimResult result;
  };
  std::vector<Row> rows;
  for (uint32_t m : mvls)
    for (uint32_t l : lanes) {
      Row r;
      r.cfg = base;
      r.cfg.mvl = m;
      r.cfg.lanes = l;
      validate(r.cfg);
      r.name = grid_name(r.cfg);
      rows.push_back(std::move(r));
    }

  // The scalar baseline always runs under the stock configuration (plus any
  // step-limit override), so speedups from different sweeps share one
  // denominator and stay comparable across presets.
  std::optional<uint64_t> baseline_ticks;
  std::optional<uint64_t> baseline_insts;
  if (auto bp = find_baseline(baseline_flag, program_spec, lp, seed)) {
    EngineConfig bcfg;
    if (const char* env = std::getenv("VSIM_STEP_LIMIT"))
      config_set(bcfg, "engine.step_limit", env);
    SimResult b = run_timed(*bp, bcfg);
    baseline_ticks = b.ticks;
    baseline_insts = b.counters.total();
  }

  if (jobs == 0) jobs = std::thread::hardware_concurrency();
  if (jobs == 0) jobs = 1;
  jobs = std::min<unsigned>(jobs, rows.size());

  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  std::vector<std::string> errors(rows.size());
  std::vector<int> error_codes(rows.size(), 0);
  auto worker = [&] {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= rows.size() || failed.load()) return;
      try {
        rows[i].result = run_timed(lp.program, rows[i].cfg);
      } catch (const StepLimitExceeded& e) {
        errors[i] = e.what();
        error_codes[i] = 5;
        failed.store(true);
        return;
      } catch (const std::exception& e) {
        errors[i] = e.what();
        error_codes[i] = 1;
        failed.store(true);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  for (size_t i = 0; i < rows.size(); ++i)
    if (!errors[i].empty()) {
      std::cerr << "sweep aborted: config " << rows[i].name << ": "
                << errors[i] << "\n";
      return error_codes[i];
    }

  std::string csv = sweep_csv_header();
  for (const auto& r : rows) {
    std::optional<double> sp;
    std::optional<double> vao;
    if (baseline_ticks) sp = speedup(*baseline_ticks, r.result.ticks);
    if (baseline_insts)
      vao = vao_speedup(*baseline_insts, r.result.counters.scalar_instructions,
                        r.result.counters.vector_operations);
    csv += sweep_csv_row(lp.name, r.name, r.cfg, r.result, sp, vao);
  }
  if (csv_path.empty())
    std::cout << csv;
  else
    write_text(csv_path, csv);
  std::cerr << "sweep: " << rows.size() << " configurations of " << lp.name
            << (baseline_ticks ? "" : " (no scalar baseline: speedup empty)")
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cycle-level simulator for a decoupled multi-lane vector "
               "engine attached to an in-order scalar core"};
  app.require_subcommand(1);

  std::string program, golden, report_path = "report.json", csv_path;
  std::string out_path, baseline_flag;
  std::string lanes_csv = "1,2,4,8", mvl_csv = "8,16,32,64,128,256";
  std::vector<std::string> cfg_files, sets;
  uint64_t seed = 1;
  bool functional = false, events = false, trace = false, do_check = false;
  unsigned jobs = 0;

  auto add_common = [&](CLI::App* c, bool with_config) {
    c->add_option("program", program,
                  "VASM file or kernel:<name>:<size>[:scalar]")
        ->required();
    c->add_option("--seed", seed, "kernel generator seed (default 1)");
    if (with_config) {
      c->add_option("-c,--config", cfg_files,
                    "INI config file (repeatable, later files override)");
      c->add_option("--set", sets,
                    "override one key, e.g. --set engine.lanes=4");
    }
  };

  CLI::App* run = app.add_subcommand("run", "simulate one program");
  add_common(run, true);
  run->add_flag("--functional", functional,
                "reference model only (no timing)");
  run->add_flag("--events", events, "write events.csv");
  run->add_flag("--trace", trace, "write trace.csv");
  run->add_option("--report", report_path, "report path (default report.json)");
  run->add_option("--csv", csv_path, "append one sweep-style CSV row here");
  auto* check_opt = run->add_option(
      "--check", golden,
      "verify against the reference model; optional golden JSON path");
  check_opt->expected(0, 1);

  CLI::App* sweep = app.add_subcommand(
      "sweep", "run a lanes x MVL grid and emit CSV");
  add_common(sweep, true);
  sweep->add_option("--lanes", lanes_csv, "lane counts (default 1,2,4,8)");
  sweep->add_option("--mvl", mvl_csv, "MVLs (default 8,16,32,64,128,256)");
  sweep->add_option("--baseline", baseline_flag,
                    "scalar twin VASM for the speedup denominator; 'none' "
                    "disables; default: auto-detect");
  sweep->add_option("--csv", csv_path, "output CSV path (default stdout)");
  sweep->add_option("--jobs", jobs, "worker threads (default: all cores)");

  CLI::App* asm_cmd =
      app.add_subcommand("asm", "assemble and print the canonical form");
  add_common(asm_cmd, false);
  asm_cmd->add_option("-o,--out", out_path, "write instead of stdout");

  CLI::App* check =
      app.add_subcommand("check", "timed vs reference (and optional golden)");
  add_common(check, true);
  check->add_option("golden", golden,
                    "golden JSON (created on first use)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (run->parsed())
      return cmd_run(program, cfg_files, sets, seed, functional,
                     do_check || check_opt->count() > 0, golden, events,
                     trace, report_path, csv_path);
    if (sweep->parsed())
      return cmd_sweep(program, cfg_files, sets, seed, lanes_csv, mvl_csv,
                       baseline_flag, csv_path, jobs);
    if (asm_cmd->parsed()) return cmd_asm(program, seed, out_path);
    if (check->parsed())
      return cmd_check(program, cfg_files, sets, seed, golden);
  } catch (const AsmError& e) {
    std::cerr << "assembly error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  } catch (const StepLimitExceeded& e) {
    std::cerr << "step limit exceeded: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::string what = e.what();
    if (what.find("cannot open program") != std::string::npos ||
        what.find("kernel") != std::string::npos)
      return 2;
    return 1;
  }
  return 0;
}
