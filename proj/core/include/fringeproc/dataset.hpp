#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fringeproc/simulate.hpp"

namespace fringe::sim {

// Object-phase family of a corpus. Gaussians are the training family;
// peaks and blobs give out-of-family test material.
enum class PhaseFamily { gaussians, peaks, blobs };

std::string_view to_string(PhaseFamily family) noexcept;
PhaseFamily phase_family_from_string(std::string_view s);

struct DatasetItem {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::string fringe;    // relative to the dataset directory
  std::string encoding;  // 2 channels: sin 2FO, cos 2FO
  std::string fo;        // 2 channels: angle, validity (1/0)
  std::string phase;     // ground-truth unwrapped phase
};

// Seeded description of a simulated corpus. Item seeds come from
// derive_seed(base_seed, index); regenerating from the same manifest is
// byte-identical.
struct DatasetManifest {
  std::uint64_t base_seed = 1;
  std::size_t count = 200;
  std::size_t rows = 64;
  std::size_t cols = 64;
  PhaseFamily family = PhaseFamily::gaussians;
  PhaseRanges ranges;
  Range peaks_coeff{0.0, 10.0};     // peaks family
  Range blob_amplitude{0.0, 3.0};   // blobs family
  double noise_std = 0.0;
  std::vector<DatasetItem> items;

  void validate() const;
  // Fill `items` from count/base_seed.
  void plan_items();
};

nlohmann::json to_json(const DatasetManifest& m);
DatasetManifest manifest_from_json(const nlohmann::json& j);

// Desk-scale defaults: 200 train + 50 validation images at 64 x 64.
DatasetManifest default_training_manifest(std::uint64_t seed);
DatasetManifest default_validation_manifest(std::uint64_t seed);

struct Sample {
  RealImage fringe;
  PhaseMap phase;
  OrientationMap fo;
  OrientationEncoding encoding;
};

// Deterministic generation of item `index` of the manifest.
Sample generate_item(const DatasetManifest& m, std::size_t index);

// Writes manifest.json plus item_<idx>_{fringe,encoding,fo,phase}.fpai.
void make_dataset(DatasetManifest m, const std::filesystem::path& dir);

DatasetManifest load_manifest(const std::filesystem::path& dir);
// Reads every item's files back from disk.
std::vector<Sample> load_dataset(const std::filesystem::path& dir);

// Orientation maps travel as two channels (angle, validity).
void write_orientation(const std::filesystem::path& path, const OrientationMap& fo);
OrientationMap read_orientation(const std::filesystem::path& path);
void write_encoding(const std::filesystem::path& path, const OrientationEncoding& enc);
OrientationEncoding read_encoding(const std::filesystem::path& path);

}  // namespace fringe::sim
