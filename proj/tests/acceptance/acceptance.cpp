// One line per acceptance criterion; exit status is the number of failures.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "pseudodiag/describe.hpp"
#include "pseudodiag/dsl.hpp"
#include "pseudodiag/error.hpp"
#include "pseudodiag/hard_samples.hpp"
#include "pseudodiag/loss.hpp"
#include "pseudodiag/pipeline.hpp"
#include "pseudodiag/render.hpp"
#include "pseudodiag/synthesis.hpp"

using namespace pseudodiag;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("[%s] %2d %s: %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  failures += !pass;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void criterion_1() {
  std::mt19937_64 rng(1001);
  int ok = 0;
  const auto t0 = Clock::now();
  for (int i = 0; i < 1000; ++i) {
    const auto g = oracle::random_graph(rng, 2, 6);
    try {
      ok += parse_code(emit_code(g).text) == g;
    } catch (const Error&) {
    }
  }
  const double t = seconds_since(t0);
  report(1, "dsl round-trip", ok == 1000 && t < 5.0,
         fmt("%d/1000 exact in %.3f s (limit 5 s)", ok, t));
}

void criterion_2() {
  std::mt19937_64 rng(2002);
  int agree = 0, docs = 0;
  while (docs < 100) {
    const auto doc = oracle::random_document(rng, 3, 10);
    SynthesisConfig cfg;  // node size 3
    cfg.sampling_size = 1 + rng() % 10;
    ++docs;
    const auto got = select_combinations(doc, cfg);
    const auto want = oracle::exhaustive_combinations(doc, cfg.node_size, cfg.sampling_size);
    bool same = got.size() == want.size();
    for (std::size_t i = 0; same && i < got.size(); ++i) {
      same = got[i].indices == want[i].indices && got[i].dist == want[i].dist;
    }
    agree += same;
  }
  report(2, "combination selection vs exhaustive enumeration", agree == docs,
         fmt("%d/%d documents agree (node size 3, up to 10 elements)", agree, docs));
}

void criterion_3() {
  DiagramGraph a;
  a.nodes = {make_node("n1", "Start"), make_node("n2", "Is valid?"), make_node("n3", "End")};
  a.edges = {{"n1", "n2"}, {"n2", "n3"}};
  const std::vector<std::string> want_a = {"From Start: Proceed to Is valid?",
                                           "From Is valid?: If **Yes**, proceed to End"};
  DiagramGraph b;
  b.nodes = {make_node("n1", "Ok?"), make_node("n2", "A"), make_node("n3", "B"), make_node("n4", "C")};
  b.edges = {{"n1", "n2"}, {"n1", "n3"}, {"n1", "n4"}};
  const std::vector<std::string> want_b = {"From Ok?: If **Yes**, proceed to A",
                                           "From Ok?: If **No**, proceed to B",
                                           "From Ok?: If ****, proceed to C"};
  const bool pa = describe(a).sentences == want_a;
  const bool pb = describe(b).sentences == want_b;
  report(3, "description fixtures", pa && pb,
         fmt("chain fixture %s, three-branch fixture %s", pa ? "exact" : "differs", pb ? "exact" : "differs"));
}

// Every pair of differently labelled nodes swapped, checked by brute force.
bool no_swap_changes_graph(const DiagramGraph& g) {
  for (std::size_t x = 0; x < g.nodes.size(); ++x) {
    for (std::size_t y = x + 1; y < g.nodes.size(); ++y) {
      auto s = g;
      std::swap(s.nodes[x].label, s.nodes[y].label);
      std::swap(s.nodes[x].kind, s.nodes[y].kind);
      if (!oracle::brute_isomorphic(s, g)) return false;
    }
  }
  return true;
}

void criterion_4() {
  std::size_t sets = 0, errors = 0, refused = 0, bad_pos = 0, bad_neg_img = 0, bad_neg_cap = 0;
  std::size_t neg_images = 0, neg_captions = 0, events = 0, wrong_size = 0;
  const std::vector<std::string> words = {"Start", "Check input", "Valid?", "Retry?", "Save",
                                          "Report error", "Done", "Load data", "Is empty?", "Notify"};
  for (std::uint64_t seed = 0; sets < 500 && seed < 2000; ++seed) {
    std::mt19937_64 rng(seed);
    OcrDocument doc;
    doc.source_id = "gen";
    for (int i = 0; i < 4; ++i) {
      doc.elements.push_back({words[(seed + 3 * i) % words.size()] + (i ? "" : " " + std::to_string(seed)),
                              static_cast<double>(rng() % 400), static_cast<double>(rng() % 400), 1, 0, 0, {}});
    }
    SynthesisConfig cfg;
    cfg.seed = seed;
    cfg.sampling_size = 1;
    cfg.max_diagrams = 1;
    const auto d = synthesize(doc, cfg, seed).front();
    const auto s = layout(d.graph);
    HardSampleSet set;
    try {
      set = make_hard_sample_set(d.graph, s, d.description, HardSampleConfig{}, d.key);
    } catch (const Error& e) {
      // Refusing is right only when no label swap can change the graph.
      if (e.code() == ErrorCode::IndistinguishableSwap && no_swap_changes_graph(d.graph)) {
        ++refused;
      } else {
        ++errors;
      }
      continue;
    }
    ++sets;
    wrong_size += set.negative_images.size() != 8 || set.negative_captions.size() != 6;
    for (const auto& p : set.positive_images) bad_pos += !is_isomorphic(scene_to_graph(p), d.graph);
    for (const auto& n : set.negative_images) bad_neg_img += is_isomorphic(scene_to_graph(n), d.graph);
    const std::string code = hard_positive_caption(d.graph);
    for (const auto& c : set.negative_captions) {
      bool distinct = c != d.description.joined_text && c != code;
      if (distinct && c.rfind("flowchart", 0) == 0) distinct = !is_isomorphic(parse_code(c), d.graph);
      bad_neg_cap += !distinct;
    }
    neg_images += set.negative_images.size();
    neg_captions += set.negative_captions.size();
    events += set.resample_events;
  }
  const double rate = static_cast<double>(events) / static_cast<double>(neg_images + neg_captions);
  const bool pass = sets == 500 && errors == 0 && bad_pos == 0 && bad_neg_img == 0 && bad_neg_cap == 0 &&
                    wrong_size == 0 && rate <= 0.01 && HardSampleConfig{}.negative_images == 8 &&
                    HardSampleConfig{}.negative_captions == 6;
  report(4, "hard sample guarantees", pass,
         fmt("%zu sets, %zu errors, %zu correctly refused (no distinguishing swap exists); positives not "
             "isomorphic %zu; negative images isomorphic %zu; negative captions indistinct %zu; resample "
             "events %zu/%zu negatives = %.3f%% (limit 1%%); default sizes 8 images / 6 captions",
             sets, errors, refused, bad_pos, bad_neg_img, bad_neg_cap, events, neg_images + neg_captions,
             100 * rate));
}

EmbeddingBatch identical_batch(std::size_t n, const Vector& v) {
  EmbeddingBatch b;
  for (std::size_t i = 0; i < n; ++i) {
    b.image_features.push_back(v);
    b.text_features.push_back(v);
    b.pos_image.push_back({v});
    b.pos_text.push_back({v});
    b.neg_image.push_back({v});
    b.neg_text.push_back({v});
  }
  return b;
}

void criterion_5() {
  LossConfig cfg;
  const auto same = identical_batch(4, {0.2, -0.4, 0.8, 0.4});
  const double e1 = std::abs(info_nce(same, cfg) - std::log(4.0));
  // Positives and negatives share the same vectors, so S+ = S- on every row.
  std::mt19937_64 rng(5005);
  auto bal = oracle::random_batch(rng, 4, 8, 2);
  bal.neg_image = bal.pos_image;
  bal.neg_text = bal.pos_text;
  const double e2 = std::abs(sc_loss(bal, cfg) - std::log(2.0));
  const auto b = oracle::random_batch(rng, 4, 8, 2);
  const double hand = oracle::scalar_info_nce(b, cfg.temperature) + 0.1 * oracle::scalar_sc(b, cfg.temperature);
  const double e3 = std::abs(total_loss(b, cfg) - hand);
  const bool pass = e1 <= 1e-12 && e2 <= 1e-12 && e3 <= 1e-12 && cfg.lambda_sc == 0.1;
  report(5, "loss identities", pass,
         fmt("|info_nce - ln 4| = %.2e, |sc - ln 2| = %.2e, |total - hand| = %.2e (limit 1e-12, lambda_sc %.1f)",
             e1, e2, e3, cfg.lambda_sc));
}

void criterion_6() {
  std::mt19937_64 rng(6006);
  LossConfig cfg;
  double worst = 0;
  std::size_t checked = 0, skipped = 0;
  const auto t0 = Clock::now();
  for (int i = 0; i < 20; ++i) {
    const auto b = oracle::random_batch(rng, 4, 8, 2);
    const auto r = grad_check(b, cfg, 1e-5);
    worst = std::max(worst, r.max_relative_error);
    checked += r.checked_entries;
    skipped += r.skipped_entries;
  }
  const double t = seconds_since(t0);
  report(6, "gradient check", worst < 1e-4 && t < 10.0,
         fmt("max relative error %.2e over %zu entries (%zu skipped), %.2f s (limits 1e-4, 10 s)", worst,
             checked, skipped, t));
}

void criterion_7() {
  std::mt19937_64 rng(7007);
  LossConfig cfg;
  const auto b = oracle::random_batch(rng, 4, 8, 2);
  const double l0 = info_nce(b, cfg), s0 = sc_loss(b, cfg), t0 = total_loss(b, cfg);
  double worst = 0;
  std::size_t variants = 0;
  auto check = [&](const EmbeddingBatch& c) {
    worst = std::max({worst, std::abs(info_nce(c, cfg) - l0), std::abs(sc_loss(c, cfg) - s0),
                      std::abs(total_loss(c, cfg) - t0)});
    ++variants;
  };
  for (double f : {3.7, -1.0}) {
    for (std::size_t i = 0; i < b.size(); ++i) {
      for (auto member : {&EmbeddingBatch::image_features, &EmbeddingBatch::text_features}) {
        auto c = b;
        for (auto& x : (c.*member)[i]) x *= f;
        check(c);
      }
      for (auto list : {&EmbeddingBatch::pos_image, &EmbeddingBatch::pos_text, &EmbeddingBatch::neg_image,
                        &EmbeddingBatch::neg_text}) {
        for (std::size_t k = 0; k < (b.*list)[i].size(); ++k) {
          auto c = b;
          for (auto& x : (c.*list)[i][k]) x *= f;
          check(c);
        }
      }
    }
  }
  report(7, "scale and sign invariance", worst <= 1e-12,
         fmt("%zu scaled/negated variants, max change %.2e (limit 1e-12)", variants, worst));
}

std::map<std::string, std::string> digest_tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    out[fs::relative(e.path(), root).string()] = sha256_hex(ss.str());
  }
  return out;
}

fs::path fresh(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("pseudodiag_acceptance_" + name);
  fs::remove_all(p);
  return p;
}

void criterion_8() {
  PipelineConfig cfg;
  cfg.inputs = {fs::path(FIXTURE_DIR) / "docs"};
  cfg.seed = 20240;
  cfg.log = [](const std::string&) {};
  double worst = 0;
  RunSummary runs[2];
  std::map<std::string, std::string> trees[2];
  for (int k = 0; k < 2; ++k) {
    cfg.out_dir = fresh(k ? "run_b" : "run_a");
    const auto t0 = Clock::now();
    runs[k] = run_pseudo(cfg);
    worst = std::max(worst, seconds_since(t0));
    trees[k] = digest_tree(cfg.out_dir);
  }
  const bool ok = runs[0].status == RunStatus::Ok && runs[1].status == RunStatus::Ok;
  report(8, "end-to-end determinism", ok && trees[0] == trees[1] && !trees[0].empty() && worst < 30.0,
         fmt("%zu records, %zu files, trees %s, slowest run %.2f s (limit 30 s)", runs[0].records,
             trees[0].size(), trees[0] == trees[1] ? "identical" : "differ", worst));
}

void criterion_9() {
  PipelineConfig cfg;
  cfg.inputs = {fs::path(FIXTURE_DIR) / "gran" / "star4.mmd"};
  cfg.seed = 9;
  cfg.out_dir = fresh("gran");
  cfg.log = [](const std::string&) {};
  const auto r = run_gran(cfg);
  report(9, "granulation count", r.status == RunStatus::Ok && r.records == 3,
         fmt("4-node star gave %zu records (expected 3)", r.records));
}

void criterion_10() {
  std::mt19937_64 rng(10010);
  const std::string alphabet = "flowchartTDBn0123456789[]{}\\-> \n\r\t?";
  std::size_t parsed = 0, structured = 0, crashed = 0;
  const auto t0 = Clock::now();
  for (int i = 0; i < 100000; ++i) {
    std::string s;
    const std::size_t len = rng() % 96;
    const bool bytes = i % 2 == 0;
    for (std::size_t k = 0; k < len; ++k) {
      s += bytes ? static_cast<char>(rng() & 0xff) : alphabet[rng() % alphabet.size()];
    }
    if (i % 3 == 0) s = (rng() % 2 ? "flowchart TD\n" : "flowchart BT\n") + s;
    try {
      parse_code(s);
      ++parsed;
    } catch (const Error&) {
      ++structured;
    } catch (...) {
      ++crashed;
    }
  }
  const double t = seconds_since(t0);
  report(10, "parser fuzz", crashed == 0 && t < 60.0,
         fmt("100000 inputs: %zu parsed, %zu structured errors, %zu other exceptions, %.2f s (limit 60 s)",
             parsed, structured, crashed, t));
}

}  // namespace

int main() {
  const std::function<void()> all[] = {criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                                       criterion_6, criterion_7, criterion_8, criterion_9, criterion_10};
  for (std::size_t i = 0; i < std::size(all); ++i) {
    try {
      all[i]();
    } catch (const std::exception& e) {
      report(static_cast<int>(i + 1), "unexpected exception", false, e.what());
    }
  }
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
