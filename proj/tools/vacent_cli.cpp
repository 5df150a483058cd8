// vacent: command-line runner for patch-pair entanglement scans.
//
//   vacent table1 --d 16 --mass 1e-10 --format csv
//   vacent separability --d 16 --mass 0.3
//   vacent scan --d 1 --mass 0.3 --rt 0..5 --protocol traced
//   vacent compare a.csv b.csv --rtol 1e-3

#include "vacent/errors.hpp"
#include "vacent/qubits.hpp"
#include "vacent/scans.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace vacent;
using json = nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;  // compare
  double mass = kMasslessMass;
  bool mass_given = false;
  long d = 16;
  std::string rt_spec;
  std::vector<std::string> protocol_specs;
  long bits = PrecisionContext::kDefaultBits;
  std::string output;
  std::string format = "csv";
  std::uint64_t seed = 1;
  int digits = 6;
  unsigned threads = 1;
  int order = 32;
  std::string sweep_bits = "128,256,512";
  double rtol = 1e-3;
  std::vector<std::string> column_rtol;
};

// Output table: `#` metadata, one header row, string cells.
struct Table {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string to_csv(const Table& t) {
  std::ostringstream os;
  for (const auto& [k, v] : t.metadata) os << "# " << k << ": " << v << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_field(t.columns[i]);
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
    os << "\n";
  }
  return os.str();
}

std::string to_json(const Table& t) {
  json meta = json::object();
  for (const auto& [k, v] : t.metadata) meta[k] = v;
  json recs = json::array();
  for (const auto& row : t.rows) {
    json r = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) r[t.columns[i]] = row[i];
    recs.push_back(std::move(r));
  }
  json doc = {{"metadata", meta}, {"columns", t.columns}, {"records", recs}};
  return doc.dump(2) + "\n";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

Table read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  Table t;
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    json doc;
    try {
      doc = json::parse(text);
      for (auto& [k, v] : doc.at("metadata").items()) t.metadata.emplace_back(k, v.get<std::string>());
      t.columns = doc.at("columns").get<std::vector<std::string>>();
      for (const auto& r : doc.at("records")) {
        std::vector<std::string> row;
        for (const auto& c : t.columns) row.push_back(r.at(c).get<std::string>());
        t.rows.push_back(std::move(row));
      }
    } catch (const json::exception& e) {
      throw ConfigError(path + ": malformed JSON table: " + e.what());
    }
    return t;
  }
  std::istringstream ls(text);
  std::string line;
  while (std::getline(ls, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto colon = line.find(':');
      if (colon != std::string::npos)
        t.metadata.emplace_back(line.substr(2, colon - 2), line.substr(std::min(colon + 2, line.size())));
      continue;
    }
    if (t.columns.empty())
      t.columns = split_csv_line(line);
    else
      t.rows.push_back(split_csv_line(line));
  }
  if (t.columns.empty()) throw ConfigError(path + ": no header row");
  for (const auto& row : t.rows)
    if (row.size() != t.columns.size()) throw ConfigError(path + ": ragged row");
  return t;
}

// "0..5", "0..320:4", "0,5,50" or a mix: "0..3,10,20..40:10".
std::vector<long> parse_rt(const std::string& spec) {
  std::vector<long> out;
  std::stringstream ss(spec);
  std::string item;
  auto to_long = [&](const std::string& s) {
    std::size_t pos = 0;
    long v = 0;
    try {
      v = std::stol(s, &pos);
    } catch (const std::exception&) {
      throw ConfigError("bad gap value '" + s + "'");
    }
    if (pos != s.size()) throw ConfigError("bad gap value '" + s + "'");
    return v;
  };
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(to_long(item));
      continue;
    }
    long step = 1;
    std::string rest = item.substr(dots + 2);
    auto colon = rest.find(':');
    if (colon != std::string::npos) {
      step = to_long(rest.substr(colon + 1));
      rest = rest.substr(0, colon);
    }
    long a = to_long(item.substr(0, dots)), b = to_long(rest);
    if (step < 1 || b < a) throw ConfigError("bad gap range '" + item + "'");
    for (long r = a; r <= b; r += step) out.push_back(r);
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] < 0) throw ConfigError("gaps must be nonnegative");
    if (i > 0 && out[i] <= out[i - 1]) throw ConfigError("gaps must be strictly increasing");
  }
  return out;
}

std::vector<long> parse_long_list(const std::string& spec) {
  std::vector<long> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stol(item));
    } catch (const std::exception&) {
      throw ConfigError("bad integer '" + item + "'");
    }
  }
  return out;
}

std::vector<ObservationProtocol> parse_protocols(const std::vector<std::string>& specs) {
  std::vector<ObservationProtocol> all{ObservationProtocol::MeasuredPhi, ObservationProtocol::MeasuredPi,
                                       ObservationProtocol::Traced};
  if (specs.empty()) return all;
  std::vector<ObservationProtocol> out;
  for (const auto& spec : specs) {
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item == "all") return all;
      try {
        out.push_back(parse_protocol(item));
      } catch (const Error& e) {
        throw ConfigError(e.what());
      }
    }
  }
  return out;
}

void validate(RunConfig& cfg) {
  if (!(cfg.mass > 0.0) || !std::isfinite(cfg.mass)) throw ConfigError("mass must be positive and finite");
  if (cfg.d < 1) throw ConfigError("d must be at least 1");
  if (cfg.digits < 1 || cfg.digits > 60) throw ConfigError("digits must be in 1..60");
  if (cfg.threads < 1) throw ConfigError("threads must be at least 1");
  if (cfg.order < 1) throw ConfigError("order must be positive");
  if (!(cfg.rtol >= 0.0)) throw ConfigError("rtol must be nonnegative");
  PrecisionContext check(cfg.bits);  // ConfigError below the minimum
  (void)check;
  if (cfg.command == "compare" && cfg.inputs.size() != 2) throw ConfigError("compare takes exactly two files");
  if (cfg.command != "compare" && !cfg.inputs.empty()) throw ConfigError("unexpected positional arguments");
}

Table base_table(const RunConfig& cfg) {
  Table t;
  t.metadata = {{"command", cfg.command},
                {"mass", shortest_decimal(cfg.mass)},
                {"d", std::to_string(cfg.d)},
                {"bits", std::to_string(cfg.bits)},
                {"version", std::string("vacent ") + kVersion}};
  return t;
}

std::string fmt(const Real& x, int digits) { return x.is_zero() ? "0" : x.to_string(digits); }

std::string fmt(double x, int digits) {
  if (x == 0.0) return "0";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", digits - 1, x);
  return buf;
}

std::string rt_over_d(long rt, long d) { return shortest_decimal(static_cast<double>(rt) / static_cast<double>(d)); }

std::vector<long> default_table1_rts(long d) {
  if (d % 4 != 0) throw ConfigError("table1 default grid needs d divisible by 4; pass --rt");
  std::vector<long> rts;
  for (long k = 0; k <= 80; ++k) rts.push_back(k * d / 4);
  return rts;
}

Table run_scan(const RunConfig& cfg) {
  if (cfg.rt_spec.empty()) throw ConfigError("scan needs --rt");
  ScanGrid grid{cfg.d, cfg.mass, parse_protocols(cfg.protocol_specs), parse_rt(cfg.rt_spec)};
  CorrelationKernel kernel(LatticeSpec::infinite(cfg.mass), PrecisionContext(cfg.bits));
  Table t = base_table(cfg);
  t.columns = {"rt", "rt_over_d", "protocol", "negativity", "pt_min"};
  for (const auto& r : negativity_scan(grid, kernel, cfg.threads))
    t.rows.push_back({std::to_string(r.rt), rt_over_d(r.rt, cfg.d), to_string(r.protocol),
                      fmt(r.negativity, cfg.digits), fmt(r.pt_min, cfg.digits)});
  return t;
}

Table run_table1(const RunConfig& cfg) {
  std::vector<long> rts = cfg.rt_spec.empty() ? default_table1_rts(cfg.d) : parse_rt(cfg.rt_spec);
  std::vector<ObservationProtocol> protos{ObservationProtocol::MeasuredPhi, ObservationProtocol::MeasuredPi,
                                          ObservationProtocol::Traced};
  ScanGrid grid{cfg.d, cfg.mass, protos, rts};
  CorrelationKernel kernel(LatticeSpec::infinite(cfg.mass), PrecisionContext(cfg.bits));
  auto recs = negativity_scan(grid, kernel, cfg.threads);
  Table t = base_table(cfg);
  t.columns = {"rt_over_d", "neg_m_phi", "neg_m_pi", "neg_traced"};
  for (std::size_t i = 0; i < rts.size(); ++i)
    t.rows.push_back({rt_over_d(rts[i], cfg.d), fmt(recs[3 * i].negativity, cfg.digits),
                      fmt(recs[3 * i + 1].negativity, cfg.digits), fmt(recs[3 * i + 2].negativity, cfg.digits)});
  return t;
}

Table run_two_body(const RunConfig& cfg) {
  std::vector<long> rts = cfg.rt_spec.empty() ? parse_rt("0..10") : parse_rt(cfg.rt_spec);
  CorrelationKernel kernel(LatticeSpec::infinite(cfg.mass), PrecisionContext(cfg.bits));
  Table t = base_table(cfg);
  t.columns = {"rt", "rt_over_d", "neg_m_phi", "sw_m_phi", "neg_traced", "sw_traced", "sn_traced"};
  for (long rt : rts) {
    TwoBodyRow r = two_body_row(kernel, cfg.d, rt);
    t.rows.push_back({std::to_string(rt), rt_over_d(rt, cfg.d), fmt(r.neg_m_phi, cfg.digits),
                      fmt(r.sw_m_phi, cfg.digits), fmt(r.neg_traced, cfg.digits), fmt(r.sw_traced, cfg.digits),
                      fmt(r.sn_traced, cfg.digits)});
  }
  return t;
}

// Wide layout: one row per (protocol, rt), left-patch components c0..c{d-1}
// (or all 2d components when `full`).
Table run_wavefunction(const RunConfig& cfg, const std::vector<long>& rts,
                       const std::vector<ObservationProtocol>& protos, bool full) {
  PrecisionContext ctx(cfg.bits);
  CorrelationKernel kernel(LatticeSpec::infinite(cfg.mass), ctx);
  Table t = base_table(cfg);
  const long n = full ? 2 * cfg.d : cfg.d;
  t.columns = {"protocol", "rt"};
  for (long i = 0; i < n; ++i) t.columns.push_back("c" + std::to_string(i));
  for (auto p : protos)
    for (long rt : rts) {
      PatchPair pair{cfg.d, rt, 0};
      auto v = ghgamma_ground_wavefunction(patch_state(kernel, pair, p), pair, ctx);
      std::vector<std::string> row{to_string(p), std::to_string(rt)};
      for (long i = 0; i < n; ++i) row.push_back(fmt(v[static_cast<std::size_t>(i)], cfg.digits));
      t.rows.push_back(std::move(row));
    }
  return t;
}

Table run_separability(const RunConfig& cfg) {
  auto protos = parse_protocols(cfg.protocol_specs.empty() ? std::vector<std::string>{"traced"} : cfg.protocol_specs);
  if (protos.size() != 1 || protos[0] != ObservationProtocol::Traced)
    throw ConfigError("separability is defined for the traced protocol only");
  CorrelationKernel kernel(LatticeSpec::infinite(cfg.mass), PrecisionContext(cfg.bits));
  long r = separability_radius(kernel, cfg.d);
  Table t = base_table(cfg);
  t.columns = {"radius"};
  t.rows.push_back({std::to_string(r)});
  return t;
}

Table run_qubit_bench(const RunConfig& cfg) {
  Table t = base_table(cfg);
  t.metadata.emplace_back("order", std::to_string(cfg.order));
  t.columns = {"case", "total", "two_body_sum"};
  GhzReport g = ghz_extraction_check();
  t.rows.push_back({"ghz_traced_pair", fmt(g.traced_pair_negativity, cfg.digits), ""});
  t.rows.push_back({"ghz_outcome0", fmt(g.conditioned_negativity[0], cfg.digits), ""});
  t.rows.push_back({"ghz_outcome1", fmt(g.conditioned_negativity[1], cfg.digits), ""});
  Eigen::Matrix4d s1 = Eigen::Matrix4d::Identity() / (0.1 * 0.1);
  CorrelationKernel kernel(LatticeSpec::infinite(1.0), PrecisionContext(cfg.bits));
  Eigen::Matrix4d s2 = kernel_precision_matrix(kernel, 4);
  for (auto [name, sigma] : {std::pair<const char*, Eigen::Matrix4d>{"independent_sigma0.1", s1},
                             std::pair<const char*, Eigen::Matrix4d>{"vacuum_kernel_m1", s2}}) {
    auto rep = correlated_noise_negativity(sigma, cfg.order, cfg.threads);
    for (const auto& w : rep.warnings) std::cerr << "warning: " << w << "\n";
    t.rows.push_back({name, fmt(rep.total, cfg.digits), fmt(rep.two_body_sum, cfg.digits)});
  }
  return t;
}

Table run_bits_sweep(const RunConfig& cfg) {
  std::vector<long> rts = cfg.rt_spec.empty() ? default_table1_rts(cfg.d) : parse_rt(cfg.rt_spec);
  std::vector<long> bits = parse_long_list(cfg.sweep_bits);
  for (long b : bits) PrecisionContext check(b);
  auto rows = precision_sweep(cfg.mass, cfg.d, rts, parse_protocols(cfg.protocol_specs), bits, 1e-3, cfg.threads);
  Table t = base_table(cfg);
  t.metadata[3].second = cfg.sweep_bits;
  t.columns = {"rt_over_d", "protocol", "stable_bits"};
  for (long b : bits) t.columns.push_back("neg_" + std::to_string(b));
  for (const auto& r : rows) {
    std::vector<std::string> row{rt_over_d(r.rt, cfg.d), to_string(r.protocol),
                                 r.stable_bits ? std::to_string(*r.stable_bits) : "none"};
    for (const auto& v : r.values) row.push_back(fmt(v, cfg.digits));
    t.rows.push_back(std::move(row));
  }
  return t;
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

int run_compare(const RunConfig& cfg) {
  Table a = read_table(cfg.inputs[0]);
  Table b = read_table(cfg.inputs[1]);
  std::map<std::string, double> tol;
  for (const auto& spec : cfg.column_rtol) {
    auto eq = spec.find('=');
    double v = 0;
    if (eq == std::string::npos || !parse_number(spec.substr(eq + 1), v))
      throw ConfigError("--column-rtol expects name=value, got '" + spec + "'");
    tol[spec.substr(0, eq)] = v;
  }
  if (a.columns != b.columns) {
    std::cout << "column mismatch\n";
    return kExitMismatch;
  }
  if (a.rows.size() != b.rows.size()) {
    std::cout << "row count mismatch: " << a.rows.size() << " vs " << b.rows.size() << "\n";
    return kExitMismatch;
  }
  std::size_t bad = 0;
  std::vector<double> worst(a.columns.size(), 0.0);
  for (std::size_t i = 0; i < a.rows.size(); ++i)
    for (std::size_t j = 0; j < a.columns.size(); ++j) {
      const std::string &x = a.rows[i][j], &y = b.rows[i][j];
      double rt = tol.count(a.columns[j]) ? tol[a.columns[j]] : cfg.rtol;
      double u, v;
      bool ok;
      if (parse_number(x, u) && parse_number(y, v)) {
        double scale = std::max(std::abs(u), std::abs(v));
        double rel = scale == 0.0 ? 0.0 : std::abs(u - v) / scale;
        worst[j] = std::max(worst[j], rel);
        ok = rel <= rt;
      } else {
        ok = x == y;
      }
      if (!ok) {
        ++bad;
        std::cout << "row " << i << " column " << a.columns[j] << ": " << x << " vs " << y << "\n";
      }
    }
  for (std::size_t j = 0; j < a.columns.size(); ++j)
    std::cout << "# " << a.columns[j] << " max_rel_diff " << fmt(worst[j], 3) << "\n";
  std::cout << (bad ? "MISMATCH " : "MATCH ") << bad << " cells\n";
  return bad ? kExitMismatch : kExitOk;
}

void emit(const RunConfig& cfg, const Table& t) {
  std::string text = cfg.format == "json" ? to_json(t) : to_csv(t);
  if (cfg.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.output, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + cfg.output);
  out << text;
}

int dispatch(RunConfig& cfg) {
  const std::string& c = cfg.command;
  if (c == "compare") return run_compare(cfg);
  if (c == "table3" || c == "table4") {
    if (!cfg.mass_given) cfg.mass = c == "table3" ? kMasslessMass : 0.3;
    std::vector<long> rts = !cfg.rt_spec.empty() ? parse_rt(cfg.rt_spec)
                            : c == "table3"       ? std::vector<long>{0, 5, 50, 150, 300}
                                                  : std::vector<long>{0, 5, 20, 40, 70};
    emit(cfg, run_wavefunction(cfg, rts, {ObservationProtocol::MeasuredPhi, ObservationProtocol::Traced}, false));
    return kExitOk;
  }
  Table t;
  if (c == "scan")
    t = run_scan(cfg);
  else if (c == "separability")
    t = run_separability(cfg);
  else if (c == "wavefunction") {
    if (cfg.rt_spec.empty()) throw ConfigError("wavefunction needs --rt");
    t = run_wavefunction(cfg, parse_rt(cfg.rt_spec), parse_protocols(cfg.protocol_specs), true);
  } else if (c == "two-body" || c == "table2")
    t = run_two_body(cfg);
  else if (c == "qubit-bench")
    t = run_qubit_bench(cfg);
  else if (c == "table1")
    t = run_table1(cfg);
  else if (c == "bits-sweep")
    t = run_bits_sweep(cfg);
  emit(cfg, t);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Entanglement of lattice field patches: scans, tables and checks"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "key=value configuration file (command-line flags win)");
  app.add_option("command", cfg.command, "Command to run")
      ->required()
      ->check(CLI::IsMember({"scan", "separability", "wavefunction", "two-body", "qubit-bench", "table1", "table2",
                             "table3", "table4", "compare", "bits-sweep"}));
  app.add_option("inputs", cfg.inputs, "Files for compare");
  auto* mass = app.add_option("--mass", cfg.mass, "Field mass in lattice units (default 1e-10)");
  app.add_option("--d", cfg.d, "Sites per patch (default 16)");
  app.add_option("--rt", cfg.rt_spec, "Gaps: list and/or ranges, e.g. 0..5 or 0..320:4,400");
  app.add_option("--protocol", cfg.protocol_specs, "traced, m-phi, m-pi or all (comma-separated)");
  app.add_option("--bits", cfg.bits, "Working precision in bits (default 512, env VN_BITS)")->envname("VN_BITS");
  app.add_option("--output,-o", cfg.output, "Output path (default stdout)");
  app.add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", cfg.seed, "Seed for Monte-Carlo checks (accepted; no command samples)");
  app.add_option("--digits", cfg.digits, "Significant digits in output (default 6)");
  app.add_option("--threads", cfg.threads, "Worker cap (default 1)");
  app.add_option("--order", cfg.order, "Gauss-Hermite order per angle for qubit-bench (default 32)");
  app.add_option("--sweep-bits", cfg.sweep_bits, "Precisions for bits-sweep (default 128,256,512)");
  app.add_option("--rtol", cfg.rtol, "Default relative tolerance for compare (default 1e-3)");
  app.add_option("--column-rtol", cfg.column_rtol, "Per-column tolerance for compare, name=value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }
  cfg.mass_given = mass->count() > 0;

  try {
    validate(cfg);
    return dispatch(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const GeometryError& e) {
    std::cerr << "invalid geometry: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "invalid parameter: " << e.what() << "\n";
    return kExitConfig;
  } catch (const PrecisionError& e) {
    std::cerr << "precision failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
