#include "vsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace vsim {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    uint64_t v = std::stoull(value, &pos, 0);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an integer, got '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on")
    return true;
  if (value == "false" || value == "0" || value == "no" || value == "off")
    return false;
  throw ConfigError(key + ": expected a boolean, got '" + value + "'");
}

using Setter = std::function<void(EngineConfig&, const std::string&,
                                  const std::string&)>;

Setter u32_setter(uint32_t EngineConfig::* field) {
  return [field](EngineConfig& c, const std::string& k, const std::string& v) {
    c.*field = static_cast<uint32_t>(parse_u64(k, v));
  };
}

Setter u64_setter(uint64_t EngineConfig::* field) {
  return [field](EngineConfig& c, const std::string& k, const std::string& v) {
    c.*field = parse_u64(k, v);
  };
}

Setter bool_setter(bool EngineConfig::* field) {
  return [field](EngineConfig& c, const std::string& k, const std::string& v) {
    c.*field = parse_bool(k, v);
  };
}

Setter fu_setter(uint32_t FuLatencies::* field) {
  return [field](EngineConfig& c, const std::string& k, const std::string& v) {
    c.fu.*field = static_cast<uint32_t>(parse_u64(k, v));
  };
}

Setter cache_setter(CacheConfig EngineConfig::* cache,
                    uint32_t CacheConfig::* field) {
  return [cache, field](EngineConfig& c, const std::string& k,
                        const std::string& v) {
    (c.*cache).*field = static_cast<uint32_t>(parse_u64(k, v));
  };
}

const std::map<std::string, Setter>& setter_table() {
  static const std::map<std::string, Setter> table = {
      {"engine.lanes", u32_setter(&EngineConfig::lanes)},
      {"engine.mvl_elements", u32_setter(&EngineConfig::mvl)},
      {"engine.physical_regs", u32_setter(&EngineConfig::physical_regs)},
      {"engine.rob_depth", u32_setter(&EngineConfig::rob_depth)},
      {"engine.arith_q_depth", u32_setter(&EngineConfig::arith_q_depth)},
      {"engine.mem_q_depth", u32_setter(&EngineConfig::mem_q_depth)},
      {"engine.submit_q_depth", u32_setter(&EngineConfig::submit_q_depth)},
      {"engine.issue_scheme",
       [](EngineConfig& c, const std::string& k, const std::string& v) {
         if (v == "in_order")
           c.issue_scheme = IssueScheme::InOrder;
         else if (v == "out_of_order")
           c.issue_scheme = IssueScheme::OutOfOrder;
         else
           throw ConfigError(k + " must be in_order or out_of_order");
       }},
      {"engine.interconnect",
       [](EngineConfig& c, const std::string& k, const std::string& v) {
         if (v == "ring")
           c.interconnect = Topology::Ring;
         else if (v == "crossbar")
           c.interconnect = Topology::Crossbar;
         else
           throw ConfigError(k + " must be ring or crossbar");
       }},
      {"engine.vrf_line_bits", u32_setter(&EngineConfig::vrf_line_bits)},
      {"engine.vrf_read_ports", u32_setter(&EngineConfig::vrf_read_ports)},
      {"engine.vrf_write_ports", u32_setter(&EngineConfig::vrf_write_ports)},
      {"engine.shared_rw_port", bool_setter(&EngineConfig::shared_rw_port)},
      {"engine.clock_ratio", u32_setter(&EngineConfig::clock_ratio)},
      {"engine.step_limit", u64_setter(&EngineConfig::step_limit)},
      {"engine.check_mem_discipline",
       bool_setter(&EngineConfig::check_mem_discipline)},
      {"engine.fu.int_alu", fu_setter(&FuLatencies::int_alu)},
      {"engine.fu.int_mul", fu_setter(&FuLatencies::int_mul)},
      {"engine.fu.fp_add", fu_setter(&FuLatencies::fp_add)},
      {"engine.fu.fp_mul", fu_setter(&FuLatencies::fp_mul)},
      {"engine.fu.fp_fma", fu_setter(&FuLatencies::fp_fma)},
      {"engine.fu.fp_div", fu_setter(&FuLatencies::fp_div)},
      {"engine.fu.fp_sqrt", fu_setter(&FuLatencies::fp_sqrt)},
      {"engine.fu.move", fu_setter(&FuLatencies::move_op)},
      {"engine.fu.slide", fu_setter(&FuLatencies::slide)},
      {"vmu.ports", u32_setter(&EngineConfig::vmu_ports)},
      {"vmu.attach",
       [](EngineConfig& c, const std::string& k, const std::string& v) {
         if (v == "l1d")
           c.vmu_attach = VmuAttach::L1d;
         else if (v == "l2")
           c.vmu_attach = VmuAttach::L2;
         else
           throw ConfigError(k + " must be l1d or l2");
       }},
      {"memsys.l1d.size_kb", cache_setter(&EngineConfig::l1d,
                                          &CacheConfig::size_kb)},
      {"memsys.l1d.assoc", cache_setter(&EngineConfig::l1d,
                                        &CacheConfig::assoc)},
      {"memsys.l1d.latency", cache_setter(&EngineConfig::l1d,
                                          &CacheConfig::latency)},
      {"memsys.l1d.mshrs", cache_setter(&EngineConfig::l1d,
                                        &CacheConfig::mshrs)},
      {"memsys.l2.size_kb", cache_setter(&EngineConfig::l2,
                                         &CacheConfig::size_kb)},
      {"memsys.l2.assoc", cache_setter(&EngineConfig::l2,
                                       &CacheConfig::assoc)},
      {"memsys.l2.latency", cache_setter(&EngineConfig::l2,
                                         &CacheConfig::latency)},
      {"memsys.l2.mshrs", cache_setter(&EngineConfig::l2,
                                       &CacheConfig::mshrs)},
      {"memsys.dram.latency", u32_setter(&EngineConfig::dram_latency)},
      {"memsys.dram.line_interval",
       u32_setter(&EngineConfig::dram_line_interval)},
  };
  return table;
}

}  // namespace

void config_set(EngineConfig& cfg, const std::string& raw_key,
                const std::string& raw_value) {
  std::string key = trim(raw_key);
  std::string value = trim(raw_value);
  const auto& table = setter_table();
  auto it = table.find(key);
  if (it == table.end() && key.find('.') == std::string::npos) {
    // bare keys belong to [engine]
    it = table.find("engine." + key);
  }
  if (it == table.end()) throw ConfigError("unknown config key: " + key);
  it->second(cfg, it->first, value);
}

void load_config_ini(EngineConfig& cfg, const std::string& text,
                     const std::string& filename) {
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(filename + ": malformed section header, line " +
                          std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(filename + ": expected key = value, line " +
                        std::to_string(lineno));
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (!section.empty()) key = section + "." + key;
    try {
      config_set(cfg, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(filename + ": " + e.what() + ", line " +
                        std::to_string(lineno));
    }
  }
}

void load_config_file(EngineConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  // Accept a JSON config echo (as written into reports) as well as INI.
  std::string stripped = trim(text);
  if (!stripped.empty() && stripped.front() == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
      throw ConfigError(path + ": invalid JSON: " + e.what());
    }
    if (j.contains("config")) j = j["config"];
    std::function<void(const nlohmann::json&, const std::string&)> walk =
        [&](const nlohmann::json& node, const std::string& prefix) {
          for (auto it = node.begin(); it != node.end(); ++it) {
            std::string key = prefix.empty() ? it.key()
                                             : prefix + "." + it.key();
            if (it->is_object()) {
              walk(*it, key);
            } else {
              std::string v;
              if (it->is_string())
                v = it->get<std::string>();
              else if (it->is_boolean())
                v = it->get<bool>() ? "true" : "false";
              else
                v = it->dump();
              config_set(cfg, key, v);
            }
          }
        };
    try {
      walk(j, "");
    } catch (const ConfigError& e) {
      throw ConfigError(path + ": " + e.what());
    }
    return;
  }
  load_config_ini(cfg, text, path);
}

void validate(const EngineConfig& cfg) {
  auto one_of = [](uint32_t v, std::initializer_list<uint32_t> set) {
    return std::find(set.begin(), set.end(), v) != set.end();
  };
  if (!one_of(cfg.lanes, {1, 2, 4, 8}))
    throw ConfigError("lanes must be in {1,2,4,8}");
  if (!one_of(cfg.mvl, {8, 16, 32, 64, 128, 256}))
    throw ConfigError("mvl_elements must be in {8,16,32,64,128,256}");
  if (cfg.physical_regs < 33)
    throw ConfigError("physical_regs must be >= 33");
  if (cfg.rob_depth < 1) throw ConfigError("rob_depth must be >= 1");
  if (cfg.arith_q_depth < 1) throw ConfigError("arith_q_depth must be >= 1");
  if (cfg.mem_q_depth < 1) throw ConfigError("mem_q_depth must be >= 1");
  if (cfg.submit_q_depth < 1) throw ConfigError("submit_q_depth must be >= 1");
  if (cfg.vrf_line_bits == 0 || cfg.vrf_line_bits % 64 != 0)
    throw ConfigError("vrf_line_bits must be a nonzero multiple of 64");
  if (cfg.vrf_read_ports < 1) throw ConfigError("vrf_read_ports must be >= 1");
  if (cfg.vrf_write_ports < 1)
    throw ConfigError("vrf_write_ports must be >= 1");
  if (cfg.clock_ratio < 1) throw ConfigError("clock_ratio must be >= 1");
  if (cfg.vmu_ports < 1) throw ConfigError("vmu.ports must be >= 1");
  auto check_cache = [](const char* name, const CacheConfig& c) {
    if (c.size_kb == 0)
      throw ConfigError(std::string(name) + ".size_kb must be >= 1");
    if (c.assoc == 0)
      throw ConfigError(std::string(name) + ".assoc must be >= 1");
    if (c.mshrs == 0)
      throw ConfigError(std::string(name) + ".mshrs must be >= 1");
  };
  check_cache("l1d", cfg.l1d);
  check_cache("l2", cfg.l2);
  if (cfg.dram_line_interval == 0)
    throw ConfigError("dram.line_interval must be >= 1");
  if (cfg.step_limit == 0) throw ConfigError("step_limit must be >= 1");
  uint32_t fus[] = {cfg.fu.int_alu, cfg.fu.int_mul, cfg.fu.fp_add,
                    cfg.fu.fp_mul,  cfg.fu.fp_fma,  cfg.fu.fp_div,
                    cfg.fu.fp_sqrt, cfg.fu.move_op, cfg.fu.slide};
  for (uint32_t f : fus)
    if (f == 0) throw ConfigError("functional unit latencies must be >= 1");
}

const char* to_string(IssueScheme s) {
  return s == IssueScheme::InOrder ? "in_order" : "out_of_order";
}
const char* to_string(Topology t) {
  return t == Topology::Ring ? "ring" : "crossbar";
}
const char* to_string(VmuAttach a) { return a == VmuAttach::L1d ? "l1d" : "l2"; }

nlohmann::ordered_json config_to_json(const EngineConfig& cfg) {
  nlohmann::ordered_json j;
  auto& e = j["engine"];
  e["lanes"] = cfg.lanes;
  e["mvl_elements"] = cfg.mvl;
  e["physical_regs"] = cfg.physical_regs;
  e["rob_depth"] = cfg.rob_depth;
  e["arith_q_depth"] = cfg.arith_q_depth;
  e["mem_q_depth"] = cfg.mem_q_depth;
  e["submit_q_depth"] = cfg.submit_q_depth;
  e["issue_scheme"] = to_string(cfg.issue_scheme);
  e["interconnect"] = to_string(cfg.interconnect);
  e["vrf_line_bits"] = cfg.vrf_line_bits;
  e["vrf_read_ports"] = cfg.vrf_read_ports;
  e["vrf_write_ports"] = cfg.vrf_write_ports;
  e["shared_rw_port"] = cfg.shared_rw_port;
  e["clock_ratio"] = cfg.clock_ratio;
  e["step_limit"] = cfg.step_limit;
  e["check_mem_discipline"] = cfg.check_mem_discipline;
  auto& fu = e["fu"];
  fu["int_alu"] = cfg.fu.int_alu;
  fu["int_mul"] = cfg.fu.int_mul;
  fu["fp_add"] = cfg.fu.fp_add;
  fu["fp_mul"] = cfg.fu.fp_mul;
  fu["fp_fma"] = cfg.fu.fp_fma;
  fu["fp_div"] = cfg.fu.fp_div;
  fu["fp_sqrt"] = cfg.fu.fp_sqrt;
  fu["move"] = cfg.fu.move_op;
  fu["slide"] = cfg.fu.slide;
  auto& v = j["vmu"];
  v["ports"] = cfg.vmu_ports;
  v["attach"] = to_string(cfg.vmu_attach);
  auto& m = j["memsys"];
  auto cache_json = [](const CacheConfig& c) {
    nlohmann::ordered_json cj;
    cj["size_kb"] = c.size_kb;
    cj["assoc"] = c.assoc;
    cj["latency"] = c.latency;
    cj["mshrs"] = c.mshrs;
    return cj;
  };
  m["l1d"] = cache_json(cfg.l1d);
  m["l2"] = cache_json(cfg.l2);
  m["dram"]["latency"] = cfg.dram_latency;
  m["dram"]["line_interval"] = cfg.dram_line_interval;
  return j;
}

}  // namespace vsim
