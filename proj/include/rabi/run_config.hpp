#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "rabi/dataset_io.hpp"
#include "rabi/polaron.hpp"
#include "rabi/sweep.hpp"
#include "rabi/wigner.hpp"

namespace rabi {

struct WignerSettings {
  double pmax = kDefaultPmax;
  double dp = kDefaultDp;
  double dx = kDefaultGridStep;
  WignerComponent component = WignerComponent::spin_summed;
};

/// Everything a CLI run can be configured with. The JSON layout is documented
/// in docs/run_config.md; every field is optional.
struct RunConfig {
  SweepSpec sweep;  // carries omega, Omega and the convergence tolerances
  WignerSettings wigner;
  FitOptions polaron;
  std::filesystem::path output = ".";
  DatasetFormat format = DatasetFormat::csv;
  unsigned threads = 0;
};

/// Throws std::invalid_argument on unknown keys, wrong types or invalid values.
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);
nlohmann::json run_config_to_json(const RunConfig& cfg);

WignerComponent parse_wigner_component(const std::string& s);
std::string to_string(WignerComponent c);

}  // namespace rabi
