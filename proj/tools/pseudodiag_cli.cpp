// pseudodiag: build contrastive training data for flowchart diagrams.
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pseudodiag/pseudodiag.h"

namespace {

struct Options {
  std::string mode = "pseudo";
  std::vector<std::string> inputs;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::size_t node_size = 3;
  std::size_t sampling_size = 5;
  std::size_t max_diagrams = 4;
  std::size_t pos_images = 2;
  std::size_t pos_captions = 2;
  std::size_t neg_images = 8;
  std::size_t neg_captions = 6;
  double lambda_sc = 0.1;
  double temperature = 0.07;
  double y_tolerance = 10.0;
  double move_range = 40.0;
  std::size_t jobs = 1;
  std::size_t max_records = 0;
  std::size_t batch_size = 4;
  std::size_t feature_dim = 64;
  bool no_svg = false;
  bool no_codes = false;
  bool no_captions = false;
  bool no_hard_sets = false;
};

// Every flag can also come from PSEUDODIAG_<FLAG>, e.g. PSEUDODIAG_NEG_IMAGES.
template <class Opt>
Opt* env(Opt* opt, const std::string& flag) {
  std::string name = "PSEUDODIAG_";
  for (char c : flag) name += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return opt->envname(name);
}

int fail_usage(const char* what) {
  std::fprintf(stderr, "level=error msg=\"%s: %s\"\n", what, pd_last_error());
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthesize pseudo flowcharts, hard samples and loss fixtures from OCR output"};
  Options o;
  std::uint64_t seed = 0;

  env(app.add_option("--mode", o.mode, "pseudo, gran, crop-captions or loss-fixtures")
          ->check(CLI::IsMember({"pseudo", "gran", "crop-captions", "loss-fixtures"}))
          ->capture_default_str(),
      "mode");
  app.add_option("inputs", o.inputs, "input files or directories")->required();
  env(app.add_option("--out", o.out, "output directory")->capture_default_str(), "out");
  auto* seed_opt = env(app.add_option("--seed", seed, "run seed (required for pseudo)"), "seed");
  env(app.add_option("--node-size", o.node_size, "nodes per pseudo diagram")->capture_default_str(), "node-size");
  env(app.add_option("--sampling-size", o.sampling_size, "combinations kept per image")->capture_default_str(), "sampling-size");
  env(app.add_option("--max-diagrams", o.max_diagrams, "connection patterns per combination")->capture_default_str(), "max-diagrams");
  env(app.add_option("--pos-images", o.pos_images, "hard positive images per record")->capture_default_str(), "pos-images");
  env(app.add_option("--pos-captions", o.pos_captions, "hard positive captions per record")->capture_default_str(), "pos-captions");
  env(app.add_option("--neg-images", o.neg_images, "hard negative images per record")->capture_default_str(), "neg-images");
  env(app.add_option("--neg-captions", o.neg_captions, "hard negative captions per record")->capture_default_str(), "neg-captions");
  env(app.add_option("--lambda-sc", o.lambda_sc, "weight of the structure-aware term")->capture_default_str(), "lambda-sc");
  env(app.add_option("--temperature", o.temperature, "similarity temperature")->capture_default_str(), "temperature");
  env(app.add_option("--y-tolerance", o.y_tolerance, "word grouping line tolerance, pixels")->capture_default_str(), "y-tolerance");
  env(app.add_option("--move-range", o.move_range, "max node displacement per axis")->capture_default_str(), "move-range");
  env(app.add_option("--jobs", o.jobs, "worker threads")->capture_default_str(), "jobs");
  env(app.add_option("--max-records", o.max_records, "keep at most this many records (0 = all)")->capture_default_str(), "max-records");
  env(app.add_option("--batch-size", o.batch_size, "loss-fixtures rows per batch")->capture_default_str(), "batch-size");
  env(app.add_option("--feature-dim", o.feature_dim, "loss-fixtures feature width")->capture_default_str(), "feature-dim");
  env(app.add_flag("--no-svg", o.no_svg, "do not write svg files"), "no-svg");
  env(app.add_flag("--no-codes", o.no_codes, "do not write code files"), "no-codes");
  env(app.add_flag("--no-captions", o.no_captions, "do not write caption files"), "no-captions");
  env(app.add_flag("--no-hard-sets", o.no_hard_sets, "skip hard sample sets"), "no-hard-sets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  if (*seed_opt) o.seed = seed;

  pd_config* cfg = nullptr;
  if (pd_config_new(&cfg) != PD_OK) return fail_usage("config");
  struct Free {
    pd_config* c;
    ~Free() { pd_config_free(c); }
  } guard{cfg};

  bool ok = pd_config_set_mode(cfg, o.mode.c_str()) == PD_OK &&
            pd_config_set_output(cfg, o.out.c_str()) == PD_OK;
  for (const auto& in : o.inputs) ok = ok && pd_config_add_input(cfg, in.c_str()) == PD_OK;
  if (o.seed) ok = ok && pd_config_set_seed(cfg, *o.seed) == PD_OK;
  const std::pair<const char*, std::size_t> sizes[] = {
      {"node-size", o.node_size},       {"sampling-size", o.sampling_size},
      {"max-diagrams", o.max_diagrams}, {"pos-images", o.pos_images},
      {"pos-captions", o.pos_captions}, {"neg-images", o.neg_images},
      {"neg-captions", o.neg_captions}, {"jobs", o.jobs},
      {"max-records", o.max_records},   {"batch-size", o.batch_size},
      {"feature-dim", o.feature_dim}};
  for (const auto& [name, v] : sizes) ok = ok && pd_config_set_size(cfg, name, v) == PD_OK;
  const std::pair<const char*, double> reals[] = {{"lambda-sc", o.lambda_sc},
                                                  {"temperature", o.temperature},
                                                  {"y-tolerance", o.y_tolerance},
                                                  {"move-range", o.move_range}};
  for (const auto& [name, v] : reals) ok = ok && pd_config_set_real(cfg, name, v) == PD_OK;
  ok = ok && pd_config_set_emit(cfg, "svg", !o.no_svg) == PD_OK &&
       pd_config_set_emit(cfg, "codes", !o.no_codes) == PD_OK &&
       pd_config_set_emit(cfg, "captions", !o.no_captions) == PD_OK &&
       pd_config_set_emit(cfg, "hard-sets", !o.no_hard_sets) == PD_OK;
  if (!ok) return fail_usage("bad option");

  pd_run_result result{};
  if (pd_run(cfg, &result) != PD_OK) {
    std::fprintf(stderr, "level=error msg=\"%s\"\n", pd_last_error());
    return 3;
  }
  return result.exit_code;
}
