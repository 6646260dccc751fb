#include "pseudodiag/pipeline.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "pseudodiag/describe.hpp"
#include "pseudodiag/dsl.hpp"
#include "pseudodiag/error.hpp"
#include "pseudodiag/render.hpp"
#include "text_util.hpp"

namespace pseudodiag {

namespace fs = std::filesystem;
using json = nlohmann::json;

const char* mode_name(Mode m) noexcept {
  switch (m) {
    case Mode::Pseudo: return "pseudo";
    case Mode::Gran: return "gran";
    case Mode::CropCaptions: return "crop-captions";
    case Mode::LossFixtures: return "loss-fixtures";
  }
  return "?";
}

std::optional<Mode> parse_mode(std::string_view s) {
  for (Mode m : {Mode::Pseudo, Mode::Gran, Mode::CropCaptions, Mode::LossFixtures}) {
    if (s == mode_name(m)) return m;
  }
  return std::nullopt;
}

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::Io, "SHA-256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string logfmt(const std::vector<std::pair<std::string, std::string>>& fields) {
  std::string out;
  for (const auto& [k, v] : fields) {
    if (!out.empty()) out += ' ';
    out += k;
    out += '=';
    const bool quote = v.empty() || v.find_first_of(" \t\"=\n\r\\") != std::string::npos;
    if (!quote) {
      out += v;
      continue;
    }
    out += '"';
    for (char c : v) {
      if (c == '"' || c == '\\') {
        out += '\\';
        out += c;
      } else if (c == '\n') {
        out += "\\n";
      } else if (c == '\r') {
        out += "\\r";
      } else {
        out += c;
      }
    }
    out += '"';
  }
  return out;
}

namespace {

struct Artifact {
  std::string path;  // relative to the output directory
  std::string content;
};

struct Record {
  std::string id;
  json data;
  std::vector<Artifact> artifacts;

  json add_file(std::string path, std::string content) {
    json f = {{"path", path}, {"sha256", sha256_hex(content)}};
    artifacts.push_back({std::move(path), std::move(content)});
    return f;
  }
};

struct DocResult {
  std::vector<Record> records;
  std::vector<std::string> logs;
  std::size_t failures = 0;
};

using Fields = std::vector<std::pair<std::string, std::string>>;

class Logger {
 public:
  explicit Logger(const PipelineConfig& cfg) : sink_(cfg.log) {}

  void operator()(const Fields& f) const { emit(logfmt(f)); }

  void emit(const std::string& line) const {
    if (sink_) {
      sink_(line);
    } else {
      std::cerr << line << '\n';
    }
  }

 private:
  std::function<void(const std::string&)> sink_;
};

Fields error_fields(const std::string& level, const std::string& input, const std::exception& e) {
  Fields f{{"level", level}, {"input", input}};
  if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
    f.emplace_back("code", error_code_name(pe->code()));
    f.emplace_back("line", std::to_string(pe->line()));
    f.emplace_back("column", std::to_string(pe->column()));
  } else if (const auto* err = dynamic_cast<const Error*>(&e)) {
    f.emplace_back("code", error_code_name(err->code()));
  }
  f.emplace_back("msg", e.what());
  return f;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, std::string_view content) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::Io, "cannot write " + p.string());
}

std::string lower_ext(const fs::path& p) {
  std::string e = p.extension().string();
  std::transform(e.begin(), e.end(), e.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return e;
}

// Expands directories and drops files the mode must not read.
std::vector<fs::path> collect_inputs(const PipelineConfig& cfg,
                                     const std::set<std::string>& exts, const Logger& log,
                                     std::size_t& failures) {
  if (cfg.inputs.empty()) throw Error(ErrorCode::InvalidArgument, "no inputs given");
  std::vector<fs::path> out;
  for (const auto& in : cfg.inputs) {
    std::error_code ec;
    if (!fs::exists(in, ec)) throw Error(ErrorCode::Io, "input not found: " + in.string());
    if (fs::is_directory(in, ec)) {
      std::vector<fs::path> children;
      for (const auto& entry : fs::directory_iterator(in)) {
        if (entry.is_regular_file() && exts.count(lower_ext(entry.path()))) {
          children.push_back(entry.path());
        }
      }
      std::sort(children.begin(), children.end());
      out.insert(out.end(), children.begin(), children.end());
    } else if (exts.count(lower_ext(in))) {
      out.push_back(in);
    } else {
      log({{"level", "warn"}, {"input", in.string()}, {"mode", mode_name(cfg.mode)},
           {"msg", "extension not read in this mode; skipped"}});
      ++failures;
    }
  }
  return out;
}

template <class Fn>
std::vector<DocResult> run_pool(const std::vector<fs::path>& inputs, std::size_t jobs, Fn fn) {
  std::vector<DocResult> out(inputs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < inputs.size();) {
      try {
        out[i] = fn(inputs[i]);
      } catch (const std::exception& e) {
        out[i] = DocResult{};
        out[i].logs.push_back(logfmt(error_fields("error", inputs[i].string(), e)));
        ++out[i].failures;
      }
    }
  };
  const std::size_t n = std::max<std::size_t>(1, std::min(jobs, inputs.size()));
  std::vector<std::thread> threads;
  for (std::size_t t = 1; t < n; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  return out;
}

const char* direction_name(Direction d) { return d == Direction::TopDown ? "TD" : "BT"; }

json edit_record_json(const EditRecord& r) {
  json j = {{"kind", sample_kind_name(r.kind)},
            {"index", r.index},
            {"key", r.key.to_string()},
            {"attempts", r.attempts}};
  if (r.kind == SampleKind::PositiveImage || r.kind == SampleKind::NegativeImage) {
    j["reversed"] = r.reversed;
    j["removed"] = r.removed;
    j["flipped"] = r.flipped;
    json moves = json::array();
    for (const auto& m : r.moves) moves.push_back({{"node", m.node_id}, {"dx", m.dx}, {"dy", m.dy}});
    j["moves"] = moves;
  } else {
    j["caption_source"] = r.caption_source == CaptionSource::Description ? "description" : "code";
    if (!r.swapped.first.empty()) j["swapped"] = {r.swapped.first, r.swapped.second};
    j["direction"] = direction_name(r.caption_direction);
  }
  return j;
}

// One dataset record for a diagram: code, svg, caption and optionally the
// hard sample set.
Record diagram_record(const PipelineConfig& cfg, const std::string& id, const std::string& source,
                      const DiagramGraph& g, const Description& desc, const RngKey* hard_key,
                      std::vector<std::string>& logs) {
  Record r;
  r.id = id;
  const SceneGraph scene = layout(g);
  const std::string code = emit_code(g).text;
  json files = json::object();
  if (cfg.emit_codes) files["code"] = r.add_file("codes/" + id + ".mmd", code + "\n");
  if (cfg.emit_svg) files["svg"] = r.add_file("svg/" + id + ".svg", to_svg(scene));
  if (cfg.emit_captions) {
    files["caption"] = r.add_file("captions/" + id + ".txt", desc.joined_text + "\n");
  }
  r.data = {{"id", id},
            {"source_id", source},
            {"mode", mode_name(cfg.mode)},
            {"direction", direction_name(g.direction)},
            {"nodes", g.nodes.size()},
            {"edges", g.edges.size()},
            {"caption", desc.joined_text},
            {"code", code},
            {"files", files}};
  if (hard_key) r.data["key"] = hard_key->to_string();
  if (!hard_key || !cfg.emit_hard_sets) return r;

  try {
    const HardSampleSet set = make_hard_sample_set(g, scene, desc, cfg.hard, *hard_key);
    const std::string dir = "hard/" + id + "/";
    json hard = json::object();
    auto images = [&](const std::vector<SceneGraph>& v, const char* stem) {
      json arr = json::array();
      for (std::size_t k = 0; k < v.size(); ++k) {
        arr.push_back(r.add_file(dir + stem + std::to_string(k) + ".svg", to_svg(v[k])));
      }
      return arr;
    };
    auto captions = [&](const std::vector<std::string>& v, const char* stem) {
      json arr = json::array();
      for (std::size_t k = 0; k < v.size(); ++k) {
        arr.push_back(r.add_file(dir + stem + std::to_string(k) + ".txt", v[k] + "\n"));
      }
      return arr;
    };
    hard["positive_images"] = images(set.positive_images, "pos_image_");
    hard["negative_images"] = images(set.negative_images, "neg_image_");
    hard["positive_captions"] = captions(set.positive_captions, "pos_caption_");
    hard["negative_captions"] = captions(set.negative_captions, "neg_caption_");
    json prov = json::array();
    for (const auto& e : set.provenance) prov.push_back(edit_record_json(e));
    hard["provenance"] = prov;
    hard["resample_events"] = set.resample_events;
    hard["skipped"] = set.skipped;
    r.data["hard"] = hard;
    if (set.resample_events > 0 || set.skipped > 0) {
      logs.push_back(logfmt({{"level", "info"},
                             {"record", id},
                             {"resample_events", std::to_string(set.resample_events)},
                             {"skipped", std::to_string(set.skipped)},
                             {"msg", "hard samples redrawn"}}));
    }
  } catch (const Error& e) {
    // The record stays usable without its hard set.
    r.data["hard"] = nullptr;
    logs.push_back(logfmt(error_fields("warn", id, e)));
  }
  return r;
}

RunStatus status_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::Io: return RunStatus::Io;
    default: return RunStatus::Usage;
  }
}

RunSummary fail(RunStatus s, std::string msg, const Logger& log) {
  log({{"level", "error"}, {"msg", msg}});
  RunSummary out;
  out.status = s;
  out.message = std::move(msg);
  return out;
}

// Merges per-input results, writes the files and the manifest.
RunSummary finish(const PipelineConfig& cfg, std::vector<DocResult> results,
                  std::size_t failures, const Logger& log) {
  std::vector<Record> records;
  std::set<std::string> ids;
  for (auto& res : results) {
    for (const auto& line : res.logs) log.emit(line);
    failures += res.failures;
    for (auto& rec : res.records) {
      if (!ids.insert(rec.id).second) {
        log({{"level", "warn"}, {"record", rec.id}, {"msg", "duplicate record id; dropped"}});
        ++failures;
        continue;
      }
      records.push_back(std::move(rec));
    }
  }
  std::sort(records.begin(), records.end(),
            [](const Record& a, const Record& b) { return a.id < b.id; });
  if (cfg.max_records > 0 && records.size() > cfg.max_records) records.resize(cfg.max_records);

  RunSummary out;
  out.failures = failures;
  if (records.empty()) {
    out.status = RunStatus::EmptyOutput;
    out.message = "no records produced";
    log({{"level", "error"}, {"mode", mode_name(cfg.mode)}, {"msg", out.message}});
    return out;
  }
  std::string manifest;
  for (const auto& rec : records) {
    for (const auto& a : rec.artifacts) write_file(cfg.out_dir / a.path, a.content);
    manifest += rec.data.dump();
    manifest += '\n';
  }
  out.manifest = cfg.out_dir / "manifest.jsonl";
  write_file(out.manifest, manifest);
  out.records = records.size();
  log({{"level", "info"},
       {"mode", mode_name(cfg.mode)},
       {"records", std::to_string(out.records)},
       {"failures", std::to_string(failures)},
       {"manifest", out.manifest.string()},
       {"msg", "done"}});
  return out;
}

void check_common(const PipelineConfig& cfg) {
  if (cfg.jobs == 0) throw Error(ErrorCode::InvalidArgument, "jobs must be >= 1");
  if (!(cfg.y_tolerance >= 0.0)) throw Error(ErrorCode::InvalidArgument, "y tolerance must be >= 0");
  if (cfg.out_dir.empty()) throw Error(ErrorCode::InvalidArgument, "output directory not set");
}

const std::set<std::string> kOcrExts = {".tsv", ".json"};

template <class Body>
RunSummary guarded(const PipelineConfig& cfg, Body body) {
  const Logger log(cfg);
  try {
    check_common(cfg);
    return body(log);
  } catch (const Error& e) {
    return fail(status_for(e), e.what(), log);
  } catch (const fs::filesystem_error& e) {
    return fail(RunStatus::Io, e.what(), log);
  }
}

}  // namespace

RunSummary run_pseudo(const PipelineConfig& in) {
  PipelineConfig cfg = in;
  cfg.mode = Mode::Pseudo;
  return guarded(cfg, [&](const Logger& log) {
    if (!cfg.seed) throw Error(ErrorCode::InvalidArgument, "pseudo mode requires a seed");
    SynthesisConfig syn = cfg.synthesis;
    syn.seed = *cfg.seed;
    syn.check();
    std::size_t failures = 0;
    const auto inputs = collect_inputs(cfg, kOcrExts, log, failures);
    auto results = run_pool(inputs, cfg.jobs, [&](const fs::path& p) {
      DocResult res;
      const OcrDocument doc = group_words(load_ocr_file(p), cfg.y_tolerance);
      const std::uint64_t image = detail::fnv1a64(doc.source_id);
      for (const auto& d : synthesize(doc, syn, image)) {
        char suffix[48];
        std::snprintf(suffix, sizeof suffix, "-c%02zu-d%02zu", d.combo_index, d.variant_index);
        res.records.push_back(diagram_record(cfg, doc.source_id + suffix, doc.source_id, d.graph,
                                             d.description, &d.key, res.logs));
      }
      return res;
    });
    return finish(cfg, std::move(results), failures, log);
  });
}

RunSummary run_gran(const PipelineConfig& in) {
  PipelineConfig cfg = in;
  cfg.mode = Mode::Gran;
  return guarded(cfg, [&](const Logger& log) {
    if (cfg.emit_hard_sets && !cfg.seed) {
      throw Error(ErrorCode::InvalidArgument, "hard sample sets require a seed");
    }
    std::size_t failures = 0;
    const auto inputs = collect_inputs(cfg, {".mmd"}, log, failures);
    auto results = run_pool(inputs, cfg.jobs, [&](const fs::path& p) {
      DocResult res;
      const std::string source = p.stem().string();
      const ParsedCode parsed = parse_code_with_diagnostics(read_file(p));
      for (const auto& w : parsed.warnings) {
        res.logs.push_back(logfmt({{"level", "warn"},
                                   {"input", p.string()},
                                   {"line", std::to_string(w.line)},
                                   {"column", std::to_string(w.column)},
                                   {"msg", w.message}}));
      }
      const auto triples = weakly_connected_triples(parsed.graph);
      const std::uint64_t image = detail::fnv1a64(source);
      for (std::size_t k = 0; k < triples.size(); ++k) {
        char suffix[32];
        std::snprintf(suffix, sizeof suffix, "-t%03zu", k);
        const RngKey key{cfg.seed.value_or(0), image, k, 1, 0};
        res.records.push_back(diagram_record(cfg, source + suffix, source, triples[k],
                                             describe(triples[k]),
                                             cfg.emit_hard_sets ? &key : nullptr, res.logs));
      }
      return res;
    });
    return finish(cfg, std::move(results), failures, log);
  });
}

RunSummary run_crop_captions(const PipelineConfig& in) {
  PipelineConfig cfg = in;
  cfg.mode = Mode::CropCaptions;
  return guarded(cfg, [&](const Logger& log) {
    std::size_t failures = 0;
    const auto inputs = collect_inputs(cfg, kOcrExts, log, failures);
    auto results = run_pool(inputs, cfg.jobs, [&](const fs::path& p) {
      DocResult res;
      const OcrDocument doc = group_words(load_ocr_file(p), cfg.y_tolerance);
      Record r;
      r.id = doc.source_id;
      const std::string caption = crop_caption(doc);
      json files = json::object();
      if (cfg.emit_captions) {
        files["caption"] = r.add_file("captions/" + r.id + ".txt", caption + "\n");
      }
      r.data = {{"id", r.id},
                {"source_id", doc.source_id},
                {"mode", mode_name(cfg.mode)},
                {"elements", doc.elements.size()},
                {"caption", caption},
                {"files", files}};
      res.records.push_back(std::move(r));
      return res;
    });
    return finish(cfg, std::move(results), failures, log);
  });
}

namespace {

struct LossRow {
  std::string id;
  Vector image, text;
  std::vector<Vector> pos_image, pos_text, neg_image, neg_text;
};

std::string load_verified(const fs::path& base, const json& file, const std::string& record) {
  const std::string rel = file.at("path").get<std::string>();
  std::string content;
  try {
    content = read_file(base / rel);
  } catch (const Error&) {
    throw Error(ErrorCode::Io, "record " + record + ": missing file " + rel);
  }
  if (sha256_hex(content) != file.at("sha256").get<std::string>()) {
    throw Error(ErrorCode::Io, "record " + record + ": digest mismatch for " + rel);
  }
  return content;
}

std::optional<LossRow> load_row(const fs::path& base, const json& rec, std::size_t dim,
                                const Logger& log) {
  LossRow row;
  row.id = rec.at("id").get<std::string>();
  if (!rec.contains("hard") || rec["hard"].is_null() || !rec["files"].contains("svg")) {
    log({{"level", "info"}, {"record", row.id}, {"msg", "no svg or hard set; not batched"}});
    return std::nullopt;
  }
  auto scene_vec = [&](const json& f) {
    const std::string svg = load_verified(base, f, row.id);
    try {
      return toy_encode_scene(parse_svg_scene(svg), dim);
    } catch (const Error& e) {
      throw Error(ErrorCode::Io, "record " + row.id + ": unreadable svg: " + e.what());
    }
  };
  auto caption_vec = [&](const json& f) {
    return toy_encode_caption(detail::trim(load_verified(base, f, row.id)), dim);
  };
  row.image = scene_vec(rec["files"]["svg"]);
  row.text = toy_encode_caption(rec.at("caption").get<std::string>(), dim);
  const json& hard = rec["hard"];
  for (const auto& f : hard.at("positive_images")) row.pos_image.push_back(scene_vec(f));
  for (const auto& f : hard.at("negative_images")) row.neg_image.push_back(scene_vec(f));
  for (const auto& f : hard.at("positive_captions")) row.pos_text.push_back(caption_vec(f));
  for (const auto& f : hard.at("negative_captions")) row.neg_text.push_back(caption_vec(f));
  if (row.pos_image.empty() || row.neg_image.empty() || row.pos_text.empty() ||
      row.neg_text.empty()) {
    log({{"level", "info"}, {"record", row.id}, {"msg", "incomplete hard set; not batched"}});
    return std::nullopt;
  }
  return row;
}

}  // namespace

RunSummary run_loss_fixtures(const PipelineConfig& in) {
  PipelineConfig cfg = in;
  cfg.mode = Mode::LossFixtures;
  return guarded(cfg, [&](const Logger& log) {
    cfg.loss.check();
    if (cfg.batch_size < 2) throw Error(ErrorCode::InvalidArgument, "batch size must be >= 2");
    if (cfg.feature_dim < 8) throw Error(ErrorCode::InvalidArgument, "feature dim must be >= 8");
    std::size_t failures = 0;
    const auto inputs = collect_inputs(cfg, {".jsonl"}, log, failures);
    std::vector<LossRow> rows;
    for (const auto& manifest : inputs) {
      std::istringstream lines(read_file(manifest));
      std::string line;
      std::size_t lineno = 0;
      while (std::getline(lines, line)) {
        ++lineno;
        if (detail::trim(line).empty()) continue;
        json rec;
        try {
          rec = json::parse(line);
          rec.at("id").get<std::string>();
          rec.at("files");
        } catch (const json::exception& e) {
          throw Error(ErrorCode::Io, manifest.string() + ":" + std::to_string(lineno) +
                                         ": bad manifest line: " + e.what());
        }
        if (auto row = load_row(manifest.parent_path(), rec, cfg.feature_dim, log)) {
          rows.push_back(std::move(*row));
        }
      }
    }
    if (rows.size() < 2) {
      RunSummary out;
      out.status = RunStatus::EmptyOutput;
      out.failures = failures;
      out.message = "fewer than 2 records with hard sets";
      log({{"level", "error"}, {"msg", out.message}});
      return out;
    }
    std::sort(rows.begin(), rows.end(),
              [](const LossRow& a, const LossRow& b) { return a.id < b.id; });

    std::vector<std::pair<std::size_t, std::size_t>> spans;  // [begin, end)
    for (std::size_t b = 0; b < rows.size(); b += cfg.batch_size) {
      spans.emplace_back(b, std::min(rows.size(), b + cfg.batch_size));
    }
    if (spans.size() > 1 && spans.back().second - spans.back().first < 2) {
      spans[spans.size() - 2].second = spans.back().second;
      spans.pop_back();
    }

    std::string report;
    bool all_pass = true;
    for (std::size_t k = 0; k < spans.size(); ++k) {
      EmbeddingBatch batch;
      json ids = json::array();
      for (std::size_t i = spans[k].first; i < spans[k].second; ++i) {
        const LossRow& r = rows[i];
        ids.push_back(r.id);
        batch.image_features.push_back(r.image);
        batch.text_features.push_back(r.text);
        batch.pos_image.push_back(r.pos_image);
        batch.pos_text.push_back(r.pos_text);
        batch.neg_image.push_back(r.neg_image);
        batch.neg_text.push_back(r.neg_text);
      }
      const double l_cl = info_nce(batch, cfg.loss);
      const double l_sc = sc_loss(batch, cfg.loss);
      const double total = total_loss(batch, cfg.loss);
      const GradCheckReport gc = grad_check(batch, cfg.loss, cfg.grad_epsilon);
      const bool finite = std::isfinite(l_cl) && std::isfinite(l_sc) && std::isfinite(total) &&
                          l_cl >= 0.0 && l_sc >= 0.0;
      const bool grad_ok = gc.max_relative_error < cfg.grad_tolerance;
      all_pass = all_pass && finite && grad_ok;
      json line = {{"batch", k},
                   {"records", ids},
                   {"info_nce", l_cl},
                   {"sc_loss", l_sc},
                   {"total", total},
                   {"lambda_sc", cfg.loss.lambda_sc},
                   {"temperature", cfg.loss.temperature},
                   {"grad_max_relative_error", gc.max_relative_error},
                   {"grad_checked_entries", gc.checked_entries},
                   {"grad_skipped_entries", gc.skipped_entries},
                   {"grad_skipped_pairs", gc.skipped_pairs},
                   {"pass", {{"finite", finite}, {"grad", grad_ok}}}};
      report += line.dump();
      report += '\n';
      log({{"level", finite && grad_ok ? "info" : "error"},
           {"batch", std::to_string(k)},
           {"total", std::to_string(total)},
           {"grad_error", std::to_string(gc.max_relative_error)},
           {"msg", "loss batch"}});
    }
    RunSummary out;
    out.manifest = cfg.out_dir / "loss_report.jsonl";
    write_file(out.manifest, report);
    out.records = spans.size();
    out.failures = failures;
    if (!all_pass) {
      out.status = RunStatus::CheckFailed;
      out.message = "a loss batch missed its thresholds";
    }
    return out;
  });
}

RunSummary run_pipeline(const PipelineConfig& cfg) {
  switch (cfg.mode) {
    case Mode::Pseudo: return run_pseudo(cfg);
    case Mode::Gran: return run_gran(cfg);
    case Mode::CropCaptions: return run_crop_captions(cfg);
    case Mode::LossFixtures: return run_loss_fixtures(cfg);
  }
  return run_pseudo(cfg);
}

}  // namespace pseudodiag
