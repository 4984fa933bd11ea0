#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "rabi/sweep.hpp"

namespace rabi {

inline constexpr std::string_view kSweepCsvHeader =
    "lambda,g_over_gs,E0,E1,gap,parity,n_Z,xi,delta_p,adagger2,AP,cutoff";
inline constexpr std::string_view kToolVersion = "1.0.0";

enum class DatasetFormat { csv, json };

/// Fixed 12-significant-digit text; NaN is written as "nan".
void write_sweep_csv(const std::vector<SweepRecord>& records, std::ostream& out);
/// Throws std::runtime_error on a header or column-count mismatch.
std::vector<SweepRecord> read_sweep_csv(std::istream& in);

struct SweepDataset {
  SweepSpec spec;
  std::string version{kToolVersion};
  std::string timestamp;
  std::vector<SweepRecord> records;
};

/// Lossless JSON (shortest round-trip doubles, NaN as null) with a metadata
/// header. The timestamp comes from SOURCE_DATE_EPOCH when set so repeated
/// runs can be byte-identical; otherwise it is the current UTC time.
void write_sweep_json(const SweepDataset& data, std::ostream& out);
SweepDataset read_sweep_json(std::istream& in);

void write_boundaries_json(const BoundarySet& set, const std::vector<SweepRecord>& records,
                           std::ostream& out);

nlohmann::json spec_to_json(const SweepSpec& spec);
/// Missing keys keep their defaults; unknown keys throw std::invalid_argument.
SweepSpec spec_from_json(const nlohmann::json& j);

/// 64-bit FNV-1a of the canonical spec JSON, as 16 hex digits.
std::string spec_hash(const SweepSpec& spec);

/// `out` itself when it names a file, otherwise out/sweep_<hash>.<ext>.
std::filesystem::path sweep_output_path(const std::filesystem::path& out, const SweepSpec& spec,
                                        DatasetFormat format);

/// UTC ISO-8601 timestamp, honouring SOURCE_DATE_EPOCH.
std::string utc_timestamp();

/// Writes records in the format implied by the path extension (.json or csv).
void save_sweep(const std::filesystem::path& path, const SweepSpec& spec,
                const std::vector<SweepRecord>& records);
/// Reads a .csv or .json sweep file.
std::vector<SweepRecord> load_sweep_records(const std::filesystem::path& path);

}  // namespace rabi
