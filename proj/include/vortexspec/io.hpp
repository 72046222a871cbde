#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "vortexspec/semigroup.hpp"
#include "vortexspec/study.hpp"

namespace vortex::io {

namespace fs = std::filesystem;

inline constexpr const char* kVersion = "0.1.0";

// 17 significant digits, round-trip exact.
std::string num(double x);

// All writers create parent directories, use LF line endings and fixed
// column order.
void write_spectrum_csv(const fs::path& p, int k, double alpha, const RobustSpectrum& s);
void write_sweep_csv(const fs::path& p, const SweepResult& s);
void write_sweep_modes_csv(const fs::path& p, const SweepResult& s);
void write_gap_decay_csv(const fs::path& p, const GapDecayResult& g);
void write_coercivity_csv(const fs::path& p, const std::vector<CoercivityRow>& rows);
void write_trajectory_csv(const fs::path& p, const Trajectory& t);
void write_json(const fs::path& p, const std::string& json_text);

std::string regions_json(const FigureDataset& f);      // array of region records
std::string figure_meta_json(const FigureDataset& f);  // box, delta, containment
std::string scan_json(const std::vector<InequalityScanReport>& reps);
std::string sweep_fit_json(const SweepResult& s);
std::string gap_fit_json(const GapDecayResult& g);

// Lowercase hex SHA-256 of the file contents.
std::string sha256_file(const fs::path& p);

struct Gate {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct RunManifest {
  std::string command;
  std::string config_json;  // echo of the validated config
  std::string started, finished;  // UTC, ISO 8601
  std::vector<Gate> gates;
  std::vector<fs::path> files;  // relative to the output directory

  bool all_passed() const;
};

// ISO 8601 UTC timestamp of now.
std::string utc_now();

// Writes manifest.json in out_dir with a digest for every declared file.
void write_manifest(const fs::path& out_dir, const RunManifest& m);

}  // namespace vortex::io
