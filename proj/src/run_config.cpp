#include "rabi/run_config.hpp"

#include <fstream>
#include <initializer_list>
#include <stdexcept>

namespace rabi {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument(where + " must be an object");
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw std::invalid_argument("unknown key '" + key + "' in " + where);
  }
}

template <class T>
void read_if(const json& j, const char* key, T& target, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    target = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument("wrong type for '" + std::string(key) + "' in " + where);
  }
}

}  // namespace

WignerComponent parse_wigner_component(const std::string& s) {
  if (s == "spin_summed") return WignerComponent::spin_summed;
  if (s == "plus") return WignerComponent::plus;
  throw std::invalid_argument("Wigner component must be 'spin_summed' or 'plus'");
}

std::string to_string(WignerComponent c) {
  return c == WignerComponent::plus ? "plus" : "spin_summed";
}

RunConfig parse_run_config(const json& j) {
  reject_unknown(j, {"model", "sweep", "tolerances", "wigner", "polaron", "output", "threads"}, "config");
  RunConfig cfg;
  SweepSpec& s = cfg.sweep;
  if (j.contains("model")) {
    const json& m = j.at("model");
    reject_unknown(m, {"omega", "Omega"}, "model");
    read_if(m, "omega", s.omega, "model");
    read_if(m, "Omega", s.Omega, "model");
  }
  if (j.contains("sweep")) {
    const json& sw = j.at("sweep");
    reject_unknown(sw, {"lambda", "g_over_gs", "analyses"}, "sweep");
    json partial = json::object();
    for (const char* key : {"lambda", "g_over_gs", "analyses"})
      if (sw.contains(key)) partial[key] = sw.at(key);
    const SweepSpec parsed = spec_from_json(partial);
    s.lambda = parsed.lambda;
    s.g_over_gs = parsed.g_over_gs;
    s.nodes = parsed.nodes;
    s.squeezing = parsed.squeezing;
    s.observables = parsed.observables;
  }
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    reject_unknown(t, {"energy", "tail", "max_cutoff"}, "tolerances");
    read_if(t, "energy", s.convergence.tol, "tolerances");
    read_if(t, "tail", s.convergence.tail_tol, "tolerances");
    read_if(t, "max_cutoff", s.convergence.max_cutoff, "tolerances");
  }
  if (j.contains("wigner")) {
    const json& w = j.at("wigner");
    reject_unknown(w, {"pmax", "dp", "dx", "component"}, "wigner");
    read_if(w, "pmax", cfg.wigner.pmax, "wigner");
    read_if(w, "dp", cfg.wigner.dp, "wigner");
    read_if(w, "dx", cfg.wigner.dx, "wigner");
    if (w.contains("component")) cfg.wigner.component = parse_wigner_component(w.at("component").get<std::string>());
    if (!(cfg.wigner.pmax > 0.0) || !(cfg.wigner.dp > 0.0) || !(cfg.wigner.dx > 0.0))
      throw std::invalid_argument("wigner pmax, dp and dx must be positive");
  }
  if (j.contains("polaron")) {
    const json& p = j.at("polaron");
    reject_unknown(p, {"n_p", "max_polarons", "extremum_fraction", "merge_distance", "max_evaluations"}, "polaron");
    read_if(p, "n_p", cfg.polaron.n_p, "polaron");
    read_if(p, "max_polarons", cfg.polaron.max_polarons, "polaron");
    read_if(p, "extremum_fraction", cfg.polaron.extremum_fraction, "polaron");
    read_if(p, "merge_distance", cfg.polaron.merge_distance, "polaron");
    read_if(p, "max_evaluations", cfg.polaron.max_evaluations, "polaron");
    if (cfg.polaron.n_p < 0 || cfg.polaron.max_polarons < 1)
      throw std::invalid_argument("polaron counts must be non-negative");
  }
  if (j.contains("output")) {
    const json& o = j.at("output");
    reject_unknown(o, {"path", "format"}, "output");
    std::string path = cfg.output.string();
    read_if(o, "path", path, "output");
    cfg.output = path;
    if (o.contains("format")) {
      const auto f = o.at("format").get<std::string>();
      if (f == "csv") cfg.format = DatasetFormat::csv;
      else if (f == "json") cfg.format = DatasetFormat::json;
      else throw std::invalid_argument("output format must be 'csv' or 'json'");
    }
  }
  if (j.contains("threads")) {
    const json& t = j.at("threads");
    if (!t.is_number_integer() || t.get<long>() < 0)
      throw std::invalid_argument("threads must be a non-negative integer");
    cfg.threads = t.get<unsigned>();
  }
  s.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open config " + path.string());
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_run_config(j);
}

json run_config_to_json(const RunConfig& cfg) {
  const json spec = spec_to_json(cfg.sweep);
  return {
      {"model", {{"omega", cfg.sweep.omega}, {"Omega", cfg.sweep.Omega}}},
      {"sweep", {{"lambda", spec["lambda"]}, {"g_over_gs", spec["g_over_gs"]}, {"analyses", spec["analyses"]}}},
      {"tolerances",
       {{"energy", cfg.sweep.convergence.tol},
        {"tail", cfg.sweep.convergence.tail_tol},
        {"max_cutoff", cfg.sweep.convergence.max_cutoff}}},
      {"wigner",
       {{"pmax", cfg.wigner.pmax}, {"dp", cfg.wigner.dp}, {"dx", cfg.wigner.dx},
        {"component", to_string(cfg.wigner.component)}}},
      {"polaron",
       {{"n_p", cfg.polaron.n_p},
        {"max_polarons", cfg.polaron.max_polarons},
        {"extremum_fraction", cfg.polaron.extremum_fraction},
        {"merge_distance", cfg.polaron.merge_distance},
        {"max_evaluations", cfg.polaron.max_evaluations}}},
      {"output", {{"path", cfg.output.string()}, {"format", cfg.format == DatasetFormat::json ? "json" : "csv"}}},
      {"threads", cfg.threads}};
}

}  // namespace rabi
