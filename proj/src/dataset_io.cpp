#include "rabi/dataset_io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <initializer_list>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rabi {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void append_number(std::string& s, double v) {
  char buf[40];
  if (std::isnan(v)) {
    s += "nan";
    return;
  }
  std::snprintf(buf, sizeof buf, "%.12g", v);
  s += buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s) {
  if (s == "nan" || s == "NaN" || s == "-nan") return kNaN;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw std::runtime_error("malformed number '" + s + "'");
  return v;
}

int parse_int(const std::string& s) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0') throw std::runtime_error("malformed integer '" + s + "'");
  return static_cast<int>(v);
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument(where + " must be an object");
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw std::invalid_argument("unknown key '" + key + "' in " + where);
  }
}

json axis_to_json(const AxisRange& r) { return {{"min", r.min}, {"max", r.max}, {"steps", r.steps}}; }

AxisRange axis_from_json(const json& j, AxisRange r, const std::string& where) {
  reject_unknown(j, {"min", "max", "steps"}, where);
  if (j.contains("min")) r.min = j.at("min").get<double>();
  if (j.contains("max")) r.max = j.at("max").get<double>();
  if (j.contains("steps")) r.steps = j.at("steps").get<int>();
  return r;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_from(const json& j) { return j.is_null() ? kNaN : j.get<double>(); }

json record_to_json(const SweepRecord& r) {
  json j = {{"lambda", r.lambda},        {"g_over_gs", r.g_over_gs},
            {"E0", number_or_null(r.E0)}, {"E1", number_or_null(r.E1)},
            {"gap", number_or_null(r.gap)}, {"parity", r.parity},
            {"n_Z", r.n_Z},               {"xi", number_or_null(r.xi)},
            {"delta_p", number_or_null(r.delta_p)},
            {"adagger2", number_or_null(r.adagger2)},
            {"AP", number_or_null(r.AP)}, {"cutoff", r.cutoff}};
  if (!r.ok()) j["error"] = r.error;
  return j;
}

SweepRecord record_from_json(const json& j) {
  reject_unknown(j, {"lambda", "g_over_gs", "E0", "E1", "gap", "parity", "n_Z", "xi", "delta_p",
                     "adagger2", "AP", "cutoff", "error"},
                 "record");
  SweepRecord r;
  r.lambda = j.at("lambda").get<double>();
  r.g_over_gs = j.at("g_over_gs").get<double>();
  r.E0 = number_from(j.at("E0"));
  r.E1 = number_from(j.at("E1"));
  r.gap = number_from(j.at("gap"));
  r.parity = j.at("parity").get<int>();
  r.n_Z = j.at("n_Z").get<int>();
  r.xi = number_from(j.at("xi"));
  r.delta_p = number_from(j.at("delta_p"));
  r.adagger2 = number_from(j.at("adagger2"));
  r.AP = number_from(j.at("AP"));
  r.cutoff = j.at("cutoff").get<int>();
  if (j.contains("error")) r.error = j.at("error").get<std::string>();
  return r;
}

json edge_to_json(const Edge& e, const std::vector<SweepRecord>& records) {
  const auto& a = records.at(e.a);
  const auto& b = records.at(e.b);
  return {{"a", {a.lambda, a.g_over_gs}}, {"b", {b.lambda, b.g_over_gs}}};
}

}  // namespace

void write_sweep_csv(const std::vector<SweepRecord>& records, std::ostream& out) {
  out << kSweepCsvHeader << '\n';
  std::string line;
  for (const auto& r : records) {
    line.clear();
    for (double v : {r.lambda, r.g_over_gs, r.E0, r.E1, r.gap}) {
      append_number(line, v);
      line += ',';
    }
    line += std::to_string(r.parity) + ',' + std::to_string(r.n_Z) + ',';
    for (double v : {r.xi, r.delta_p, r.adagger2, r.AP}) {
      append_number(line, v);
      line += ',';
    }
    line += std::to_string(r.cutoff);
    out << line << '\n';
  }
}

std::vector<SweepRecord> read_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty sweep CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kSweepCsvHeader) throw std::runtime_error("sweep CSV header does not match the schema");
  std::vector<SweepRecord> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = split(line, ',');
    if (f.size() != 12)
      throw std::runtime_error("line " + std::to_string(lineno) + ": expected 12 columns");
    SweepRecord r;
    r.lambda = parse_double(f[0]);
    r.g_over_gs = parse_double(f[1]);
    r.E0 = parse_double(f[2]);
    r.E1 = parse_double(f[3]);
    r.gap = parse_double(f[4]);
    r.parity = parse_int(f[5]);
    r.n_Z = parse_int(f[6]);
    r.xi = parse_double(f[7]);
    r.delta_p = parse_double(f[8]);
    r.adagger2 = parse_double(f[9]);
    r.AP = parse_double(f[10]);
    r.cutoff = parse_int(f[11]);
    if (std::isnan(r.E0)) r.error = "failed";
    out.push_back(std::move(r));
  }
  return out;
}

json spec_to_json(const SweepSpec& s) {
  return {{"lambda", axis_to_json(s.lambda)},
          {"g_over_gs", axis_to_json(s.g_over_gs)},
          {"omega", s.omega},
          {"Omega", s.Omega},
          {"analyses", {{"nodes", s.nodes}, {"squeezing", s.squeezing}, {"observables", s.observables}}},
          {"convergence",
           {{"tol", s.convergence.tol},
            {"tail_tol", s.convergence.tail_tol},
            {"max_cutoff", s.convergence.max_cutoff}}}};
}

SweepSpec spec_from_json(const json& j) {
  reject_unknown(j, {"lambda", "g_over_gs", "omega", "Omega", "analyses", "convergence"}, "sweep spec");
  SweepSpec s;
  if (j.contains("lambda")) s.lambda = axis_from_json(j.at("lambda"), s.lambda, "lambda");
  if (j.contains("g_over_gs")) s.g_over_gs = axis_from_json(j.at("g_over_gs"), s.g_over_gs, "g_over_gs");
  if (j.contains("omega")) s.omega = j.at("omega").get<double>();
  if (j.contains("Omega")) s.Omega = j.at("Omega").get<double>();
  if (j.contains("analyses")) {
    const json& a = j.at("analyses");
    reject_unknown(a, {"nodes", "squeezing", "observables"}, "analyses");
    if (a.contains("nodes")) s.nodes = a.at("nodes").get<bool>();
    if (a.contains("squeezing")) s.squeezing = a.at("squeezing").get<bool>();
    if (a.contains("observables")) s.observables = a.at("observables").get<bool>();
  }
  if (j.contains("convergence")) {
    const json& c = j.at("convergence");
    reject_unknown(c, {"tol", "tail_tol", "max_cutoff"}, "convergence");
    if (c.contains("tol")) s.convergence.tol = c.at("tol").get<double>();
    if (c.contains("tail_tol")) s.convergence.tail_tol = c.at("tail_tol").get<double>();
    if (c.contains("max_cutoff")) s.convergence.max_cutoff = c.at("max_cutoff").get<int>();
  }
  return s;
}

std::string utc_timestamp() {
  std::time_t t{};
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
    t = static_cast<std::time_t>(std::strtoll(env, nullptr, 10));
  } else {
    t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_sweep_json(const SweepDataset& data, std::ostream& out) {
  json j;
  j["metadata"] = {{"spec", spec_to_json(data.spec)},
                   {"version", data.version},
                   {"timestamp", data.timestamp.empty() ? utc_timestamp() : data.timestamp},
                   {"columns", std::string(kSweepCsvHeader)}};
  json recs = json::array();
  for (const auto& r : data.records) recs.push_back(record_to_json(r));
  j["records"] = std::move(recs);
  out << j.dump(1) << '\n';
}

SweepDataset read_sweep_json(std::istream& in) {
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed sweep JSON: ") + e.what());
  }
  reject_unknown(j, {"metadata", "records"}, "sweep document");
  SweepDataset d;
  const json& m = j.at("metadata");
  reject_unknown(m, {"spec", "version", "timestamp", "columns"}, "metadata");
  if (m.contains("columns") && m.at("columns").get<std::string>() != kSweepCsvHeader)
    throw std::runtime_error("sweep JSON columns do not match the schema");
  d.spec = spec_from_json(m.at("spec"));
  d.version = m.at("version").get<std::string>();
  d.timestamp = m.at("timestamp").get<std::string>();
  for (const auto& r : j.at("records")) d.records.push_back(record_from_json(r));
  return d;
}

void write_boundaries_json(const BoundarySet& set, const std::vector<SweepRecord>& records,
                           std::ostream& out) {
  json j;
  json flips = json::array();
  for (const auto& f : set.parity_flips) {
    json e = edge_to_json(f.edge, records);
    e["min_gap"] = f.min_gap;
    e["crossing"] = {f.lambda_star, f.g_star};
    flips.push_back(std::move(e));
  }
  j["parity_flips"] = std::move(flips);
  for (const auto& [name, edges] : {std::pair{"nz_jumps", &set.nz_jumps},
                                    std::pair{"unconventional", &set.unconventional},
                                    std::pair{"as_ps", &set.as_ps},
                                    std::pair{"gap_minima", &set.gap_minima}}) {
    json arr = json::array();
    for (const auto& e : *edges) arr.push_back(edge_to_json(e, records));
    j[name] = std::move(arr);
  }
  out << j.dump(1) << '\n';
}

std::string spec_hash(const SweepSpec& spec) {
  const std::string text = spec_to_json(spec).dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::filesystem::path sweep_output_path(const std::filesystem::path& out, const SweepSpec& spec,
                                        DatasetFormat format) {
  const bool is_dir = std::filesystem::is_directory(out) ||
                      (!out.empty() && (out.native().back() == '/' || !out.has_extension()));
  if (!is_dir) return out;
  return out / ("sweep_" + spec_hash(spec) + (format == DatasetFormat::json ? ".json" : ".csv"));
}

void save_sweep(const std::filesystem::path& path, const SweepSpec& spec,
                const std::vector<SweepRecord>& records) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  if (path.extension() == ".json") write_sweep_json({spec, std::string(kToolVersion), {}, records}, f);
  else write_sweep_csv(records, f);
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

std::vector<SweepRecord> load_sweep_records(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  if (path.extension() == ".json") return read_sweep_json(f).records;
  return read_sweep_csv(f);
}

}  // namespace rabi
