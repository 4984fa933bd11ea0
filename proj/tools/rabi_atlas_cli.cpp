// rabi-atlas: command-line front end.
//
// Exit codes: 0 success, 1 numerical failure (JSON body on stderr), 2 usage.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "rabi/dataset_io.hpp"
#include "rabi/nonode.hpp"
#include "rabi/polaron.hpp"
#include "rabi/realspace.hpp"
#include "rabi/render.hpp"
#include "rabi/run_config.hpp"
#include "rabi/spectra.hpp"
#include "rabi/squeezing.hpp"
#include "rabi/sweep.hpp"
#include "rabi/wigner.hpp"

using nlohmann::json;
using namespace rabi;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json polaron_set_json(const PolaronSet& set) {
  json arr = json::array();
  for (const auto& p : set.polarons) arr.push_back({{"x_c", p.x_c}, {"w", p.w}, {"xi", p.xi}});
  return {{"polarons", arr},
          {"N_p", set.N_p},
          {"residual", set.residual},
          {"weight_sign_changes", weight_sign_changes(set)}};
}

struct PointArgs {
  double lambda = 0.0;
  double g_over_gs = 0.0;
  double omega = 0.5;
  double Omega = 1.0;
  std::string config;
};

void add_point_options(CLI::App* cmd, PointArgs& a) {
  cmd->add_option("--lambda", a.lambda, "anisotropy")->required();
  cmd->add_option("--g-over-gs", a.g_over_gs, "coupling in units of sqrt(omega Omega)/2")->required();
  cmd->add_option("--omega", a.omega, "cavity frequency")->capture_default_str();
  cmd->add_option("--Omega", a.Omega, "qubit splitting")->capture_default_str();
  cmd->add_option("--config", a.config, "RunConfig JSON file");
}

RunConfig config_for(const PointArgs& a, const CLI::App* cmd) {
  RunConfig cfg = a.config.empty() ? RunConfig{} : load_run_config(a.config);
  if (a.config.empty() || cmd->count("--omega")) cfg.sweep.omega = a.omega;
  if (a.config.empty() || cmd->count("--Omega")) cfg.sweep.Omega = a.Omega;
  return cfg;
}

ModelParams model_for(const PointArgs& a, const RunConfig& cfg) {
  try {
    return params_from_scaled(a.lambda, a.g_over_gs, cfg.sweep.omega, cfg.sweep.Omega);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

int run_point(const PointArgs& a, const CLI::App* cmd) {
  const RunConfig cfg = config_for(a, cmd);
  const ModelParams mp = model_for(a, cfg);
  const SpectralResult r = converge_cutoff(mp, cfg.sweep.convergence);
  const WaveProfile prof = wavefunction(r, mp);
  const QuadratureObservables obs = observables(r, mp);
  const SqueezeReport sq = squeeze_report(prof, obs);
  const DerivedCouplings dc = derive_couplings(mp);
  json out = {
      {"params", {{"lambda", a.lambda}, {"g_over_gs", a.g_over_gs}, {"omega", mp.omega}, {"Omega", mp.Omega}, {"g", mp.g}}},
      {"E0", r.E0},
      {"E1", r.E1},
      {"gap", r.gap},
      {"parity", to_int(r.parity)},
      {"parity_expectation", r.parity_expectation},
      {"cutoff", r.cutoff_used},
      {"n_Z", topological_node_count(mp, prof, cfg.sweep.convergence)},
      {"x_nodes", prof.nodes},
      {"squeezing",
       {{"xi", sq.xi}, {"r_psi", sq.r_psi}, {"peak_x", sq.peak_x}, {"delta_p", sq.delta_p},
        {"class_xi", std::string(to_string(sq.class_xi))}, {"class_delta_p", std::string(to_string(sq.class_dp))}}},
      {"observables",
       {{"x2", obs.x2}, {"p2", obs.p2}, {"delta_p", obs.delta_p}, {"adagger2", obs.adagger2},
        {"A", obs.A}, {"A0", obs.A0}, {"AP", obs.A * to_int(r.parity)}}},
      {"couplings",
       {{"g_s", dc.g_s}, {"g_c_lambda", dc.g_c_lambda},
        {"lambda_T1", dc.lambda_T1 ? json(*dc.lambda_T1) : json(nullptr)},
        {"g_T1", dc.g_T1 ? json(*dc.g_T1) : json(nullptr)}}}};
  std::cout << out.dump(2) << '\n';
  return 0;
}

int run_sweep_cmd(const std::string& config, const std::string& out_path, const std::string& boundaries) {
  const RunConfig cfg = config.empty() ? RunConfig{} : load_run_config(config);
  const std::filesystem::path target = out_path.empty() ? cfg.output : std::filesystem::path(out_path);
  const auto path = sweep_output_path(target, cfg.sweep, cfg.format);
  const auto records = run_sweep(cfg.sweep, cfg.threads);
  save_sweep(path, cfg.sweep, records);
  std::size_t failed = 0;
  for (const auto& r : records) failed += r.ok() ? 0 : 1;
  json summary = {{"output", path.string()}, {"points", records.size()}, {"failed", failed}};
  if (!boundaries.empty()) {
    const BoundarySet bs = extract_boundaries(records, cfg.sweep);
    std::ofstream f(boundaries);
    if (!f) throw std::runtime_error("cannot open " + boundaries);
    write_boundaries_json(bs, records, f);
    summary["boundaries"] = boundaries;
    summary["parity_flips"] = bs.parity_flips.size();
    summary["nz_jumps"] = bs.nz_jumps.size();
    summary["unconventional"] = bs.unconventional.size();
  }
  std::cout << summary.dump(2) << '\n';
  return 0;
}

int run_wigner(const PointArgs& a, const CLI::App* cmd, const std::string& out, bool polaron_fit,
               const std::string& component) {
  RunConfig cfg = config_for(a, cmd);
  if (!component.empty()) cfg.wigner.component = parse_wigner_component(component);
  const ModelParams mp = model_for(a, cfg);
  const SpectralResult r = converge_cutoff(mp, cfg.sweep.convergence);
  const WaveProfile prof = wavefunction(r, mp, default_half_window(mp), cfg.wigner.dx);
  const WignerGrid W = wigner_numeric(prof, cfg.wigner.pmax, cfg.wigner.dp, cfg.wigner.component);

  const json params = {{"lambda", a.lambda}, {"g_over_gs", a.g_over_gs}, {"omega", mp.omega},
                       {"Omega", mp.Omega}, {"component", to_string(cfg.wigner.component)}};
  const std::filesystem::path path(out);
  auto write = [&](const WignerGrid& g, const std::filesystem::path& p, const json& extra) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + p.string() + " for writing");
    if (p.extension() == ".csv") write_wigner_csv(g, f);
    else write_wigner_binary(g, extra.dump(), f);
  };
  write(W, path, params);

  json intervals = json::array();
  for (const auto& iv : central_negative_scan(W)) intervals.push_back({iv.lo, iv.hi});
  json summary = {{"output", path.string()}, {"nx", W.xgrid.size()}, {"np", W.pgrid.size()},
                  {"dp", W.dp()}, {"mass", W.mass()}, {"n_Z", prof.n_Z},
                  {"central_negative_intervals", intervals}};
  if (polaron_fit) {
    const PolaronSet set = fit_polarons(prof, cfg.polaron);
    const WignerGrid Wp = wigner_polaron(set, W.xgrid, W.pgrid);
    auto ppath = path;
    ppath.replace_filename(path.stem().string() + ".polaron" + path.extension().string());
    json extra = params;
    extra["polarons"] = polaron_set_json(set);
    write(Wp, ppath, extra);
    summary["polaron_output"] = ppath.string();
    summary["polaron_fit"] = polaron_set_json(set);
  }
  std::cout << summary.dump(2) << '\n';
  return 0;
}

int run_polarons(const PointArgs& a, const CLI::App* cmd, int n_p) {
  RunConfig cfg = config_for(a, cmd);
  if (cmd->count("--n-p")) cfg.polaron.n_p = n_p;
  const ModelParams mp = model_for(a, cfg);
  const SpectralResult r = converge_cutoff(mp, cfg.sweep.convergence);
  const WaveProfile prof = wavefunction(r, mp);
  const PolaronSet set = fit_polarons(prof, cfg.polaron);
  json out = polaron_set_json(set);
  out["n_Z"] = prof.n_Z;
  out["parity"] = to_int(r.parity);
  std::cout << out.dump(2) << '\n';
  return 0;
}

std::vector<double> read_coefficients(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot open state file " + path);
  const std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  std::vector<double> c;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (text[first] == '[' || text[first] == '{')) {
    try {
      json j = json::parse(text);
      if (j.is_object()) j = j.at("coeffs");
      c = j.get<std::vector<double>>();
    } catch (const json::exception& e) {
      throw UsageError(std::string("state file: ") + e.what());
    }
  } else {
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) {
      if (!tok.empty() && tok.back() == ',') tok.pop_back();
      if (tok.empty()) continue;
      try {
        c.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw UsageError("state file: malformed coefficient '" + tok + "'");
      }
    }
  }
  if (c.empty()) throw UsageError("state file holds no coefficients");
  return c;
}

int run_nonode(const std::string& state, double eps_min, double eps_max, int count, double Omega) {
  const NodalState s{read_coefficients(state)};
  std::vector<double> eps;
  try {
    eps = log_spaced(eps_min, eps_max, count);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  ScalingResult res;
  try {
    res = scaling_experiment(s, eps, Omega);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  json pts = json::array();
  for (const auto& p : res.points)
    pts.push_back({{"epsilon", p.epsilon}, {"diff", p.diff}, {"predicted", p.predicted}, {"residual", p.residual}});
  const json out = {{"k", res.k},
                    {"delta_rho", res.delta_rho},
                    {"slope", res.slope},
                    {"prefactor", res.prefactor},
                    {"predicted_prefactor", res.predicted_prefactor},
                    {"prefactor_ratio", res.prefactor_ratio},
                    {"residual_slope", finite_or_null(res.residual_slope)},
                    {"points", pts}};
  std::cout << out.dump(2) << '\n';
  return 0;
}

int run_render(const std::string& in, const std::string& quantity, const std::string& out, int scale,
               double amplitude) {
  RenderOptions opts;
  try {
    opts.quantity = parse_render_quantity(quantity);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  opts.scale = scale;
  opts.amplitude = amplitude;
  const auto records = load_sweep_records(in);
  const Image img = render_heatmap(records, opts);
  write_png(img, out);
  std::cout << json{{"output", out}, {"width", img.width}, {"height", img.height}}.dump(2) << '\n';
  return 0;
}

void report(const char* kind, const std::string& msg) {
  std::cerr << json{{"error", msg}, {"kind", kind}}.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ground-state atlas of the anisotropic quantum Rabi model"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  PointArgs pa;
  auto* point = app.add_subcommand("point", "spectrum, nodes, squeezing and observables at one point");
  add_point_options(point, pa);

  std::string sweep_config, sweep_out, sweep_boundaries;
  auto* sweep = app.add_subcommand("sweep", "run a (lambda, g) grid sweep");
  sweep->add_option("--config", sweep_config, "RunConfig JSON file");
  sweep->add_option("--out", sweep_out, "output file or directory (default from config)");
  sweep->add_option("--boundaries", sweep_boundaries, "also write extracted boundaries as JSON");

  PointArgs wa;
  std::string wigner_out, wigner_component;
  bool polaron_fit = false;
  auto* wigner = app.add_subcommand("wigner", "Wigner function of the ground state");
  add_point_options(wigner, wa);
  wigner->add_option("--out", wigner_out, "output path (.csv for text, otherwise binary)")->required();
  wigner->add_flag("--polaron-fit", polaron_fit, "also write the analytic Wigner function of the polaron fit");
  wigner->add_option("--component", wigner_component, "spin_summed or plus");

  PointArgs ppa;
  int n_p = 0;
  auto* polarons = app.add_subcommand("polarons", "fit a polaron superposition to psi_+");
  add_point_options(polarons, ppa);
  polarons->add_option("--n-p", n_p, "number of polarons (0 = automatic)");

  std::string state;
  double eps_min = 1e-2, eps_max = std::pow(10.0, -0.5), nonode_Omega = 1.0;
  int eps_count = 12;
  auto* nonode = app.add_subcommand("nonode", "tunneling-energy scaling under node removal");
  nonode->add_option("--state", state, "Fock coefficients (JSON array or whitespace separated)")->required();
  nonode->add_option("--eps-min", eps_min)->capture_default_str();
  nonode->add_option("--eps-max", eps_max)->capture_default_str();
  nonode->add_option("--count", eps_count, "number of log-spaced epsilons")->capture_default_str();
  nonode->add_option("--Omega", nonode_Omega)->capture_default_str();

  std::string render_in, render_quantity, render_out;
  int render_scale = 8;
  double amplitude = 1.0;
  auto* render = app.add_subcommand("render", "PNG heatmap of a sweep dataset");
  render->add_option("--in", render_in, "sweep CSV or JSON")->required()->check(CLI::ExistingFile);
  render->add_option("--quantity", render_quantity, "parity | n_Z | xi | AP | gap")
      ->required()
      ->check(CLI::IsMember({"parity", "n_Z", "xi", "AP", "gap"}));
  render->add_option("--out", render_out, "PNG path")->required();
  render->add_option("--scale", render_scale, "pixels per grid cell")->capture_default_str()->check(CLI::PositiveNumber);
  render->add_option("--amplitude", amplitude, "show sign(v)|v|^a, e.g. 0.5 or 0.25")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*point) return run_point(pa, point);
    if (*sweep) return run_sweep_cmd(sweep_config, sweep_out, sweep_boundaries);
    if (*wigner) return run_wigner(wa, wigner, wigner_out, polaron_fit, wigner_component);
    if (*polarons) return run_polarons(ppa, polarons, n_p);
    if (*nonode) return run_nonode(state, eps_min, eps_max, eps_count, nonode_Omega);
    if (*render) return run_render(render_in, render_quantity, render_out, render_scale, amplitude);
  } catch (const UsageError& e) {
    report("usage", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    report("usage", e.what());
    return 2;
  } catch (const std::exception& e) {
    report("numerical", e.what());
    return 1;
  }
  return 2;
}
