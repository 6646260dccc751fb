#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pseudodiag/hard_samples.hpp"
#include "pseudodiag/loss.hpp"
#include "pseudodiag/synthesis.hpp"

namespace pseudodiag {

enum class Mode { Pseudo, Gran, CropCaptions, LossFixtures };

const char* mode_name(Mode m) noexcept;
std::optional<Mode> parse_mode(std::string_view s);

// Process exit statuses shared by the library entry points and the CLI.
enum class RunStatus : int {
  Ok = 0,
  Usage = 1,
  EmptyOutput = 2,
  Io = 3,
  CheckFailed = 4,  // loss-fixtures: a threshold was missed
};

struct PipelineConfig {
  Mode mode = Mode::Pseudo;
  // Files or directories. Directories contribute their direct children with
  // an extension the mode accepts (.tsv/.json for OCR modes, .mmd for gran,
  // .jsonl for loss-fixtures), in name order.
  std::vector<std::filesystem::path> inputs;
  std::filesystem::path out_dir = "out";
  std::optional<std::uint64_t> seed;  // required by pseudo, and by gran with hard sets

  SynthesisConfig synthesis;
  HardSampleConfig hard;
  LossConfig loss;

  double y_tolerance = 10.0;    // word grouping, pixels
  std::size_t jobs = 1;         // worker threads
  std::size_t max_records = 0;  // 0 = no cap; otherwise keep the first records by id
  std::size_t batch_size = 4;   // loss-fixtures rows per batch
  std::size_t feature_dim = 64; // loss-fixtures toy encoder width
  double grad_epsilon = 1e-5;
  double grad_tolerance = 1e-4;

  bool emit_svg = true;
  bool emit_codes = true;
  bool emit_captions = true;
  bool emit_hard_sets = true;

  // Receives one logfmt line per event. Defaults to standard error.
  std::function<void(const std::string&)> log;
};

struct RunSummary {
  RunStatus status = RunStatus::Ok;
  std::size_t records = 0;
  std::size_t failures = 0;  // inputs or records skipped
  std::filesystem::path manifest;
  std::string message;  // set when status != Ok
};

RunSummary run_pseudo(const PipelineConfig& cfg);
RunSummary run_gran(const PipelineConfig& cfg);
RunSummary run_crop_captions(const PipelineConfig& cfg);
RunSummary run_loss_fixtures(const PipelineConfig& cfg);
RunSummary run_pipeline(const PipelineConfig& cfg);

// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

// key=value pairs, values quoted when they contain spaces, quotes or '='.
std::string logfmt(const std::vector<std::pair<std::string, std::string>>& fields);

}  // namespace pseudodiag
