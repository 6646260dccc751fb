#include "pseudodiag/pseudodiag.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "pseudodiag/describe.hpp"
#include "pseudodiag/dsl.hpp"
#include "pseudodiag/error.hpp"
#include "pseudodiag/graph.hpp"
#include "pseudodiag/ocr.hpp"
#include "pseudodiag/pipeline.hpp"
#include "pseudodiag/render.hpp"

struct pd_graph {
  pseudodiag::DiagramGraph g;
};

struct pd_config {
  pseudodiag::PipelineConfig cfg;
};

namespace {

using pseudodiag::ErrorCode;

struct LastError {
  std::string message;
  std::string code;
  std::size_t line = 0;
  std::size_t column = 0;
};

thread_local LastError last_error;

void clear_error() { last_error = LastError{}; }

pd_status set_error(pd_status s, std::string message, std::string code = {}) {
  last_error = LastError{std::move(message), std::move(code), 0, 0};
  return s;
}

pd_status status_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::DimensionMismatch:
      return PD_ERR_INVALID_ARGUMENT;
    case ErrorCode::MalformedHeader:
    case ErrorCode::MalformedRow:
    case ErrorCode::SyntaxError:
    case ErrorCode::UnknownNodeReference:
    case ErrorCode::DuplicateNodeId:
    case ErrorCode::DuplicateEdge:
      return PD_ERR_SYNTAX;
    case ErrorCode::InvalidGraph:
      return PD_ERR_INVALID_GRAPH;
    case ErrorCode::UnknownId:
      return PD_ERR_NOT_FOUND;
    case ErrorCode::Io:
      return PD_ERR_IO;
    case ErrorCode::EmptyDocument:
    case ErrorCode::TooFewNodes:
    case ErrorCode::TooFewElements:
    case ErrorCode::NoEdges:
    case ErrorCode::EmptyItem:
      return PD_ERR_EMPTY;
    case ErrorCode::OverlapUnresolvable:
    case ErrorCode::DegenerateNegative:
    case ErrorCode::IndistinguishableSwap:
    case ErrorCode::TooFewLabels:
      return PD_ERR_GENERATION;
    case ErrorCode::ZeroVector:
    case ErrorCode::BatchTooSmall:
    case ErrorCode::NoSamples:
      return PD_ERR_NUMERIC;
    case ErrorCode::Unsupported:
      return PD_ERR_UNSUPPORTED;
  }
  return PD_ERR_INTERNAL;
}

template <class F>
pd_status guard(F&& f) noexcept {
  try {
    clear_error();
    f();
    return PD_OK;
  } catch (const pseudodiag::ParseError& e) {
    const pd_status s = set_error(status_for(e.code()), e.what(), pseudodiag::error_code_name(e.code()));
    last_error.line = e.line();
    last_error.column = e.column();
    return s;
  } catch (const pseudodiag::Error& e) {
    return set_error(status_for(e.code()), e.what(), pseudodiag::error_code_name(e.code()));
  } catch (const std::bad_alloc&) {
    return set_error(PD_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(PD_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(PD_ERR_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.data(), s.size() + 1);
  return p;
}

void require(bool ok, const char* what) {
  if (!ok) throw pseudodiag::Error(ErrorCode::InvalidArgument, what);
}

}  // namespace

extern "C" {

const char* pd_version(void) { return "0.1.0"; }

const char* pd_last_error(void) { return last_error.message.c_str(); }

const char* pd_last_error_code(void) { return last_error.code.c_str(); }

void pd_last_error_position(size_t* line, size_t* column) {
  if (line) *line = last_error.line;
  if (column) *column = last_error.column;
}

void pd_string_free(char* s) { std::free(s); }

pd_status pd_graph_parse(const char* code, size_t len, pd_graph** out) {
  return guard([&] {
    require(out != nullptr, "out is null");
    *out = nullptr;
    require(code != nullptr || len == 0, "code is null");
    auto* g = new pd_graph{pseudodiag::parse_code(std::string_view(code ? code : "", len))};
    *out = g;
  });
}

void pd_graph_free(pd_graph* g) { delete g; }

pd_status pd_graph_node_count(const pd_graph* g, size_t* out) {
  return guard([&] {
    require(g && out, "null argument");
    *out = g->g.nodes.size();
  });
}

pd_status pd_graph_edge_count(const pd_graph* g, size_t* out) {
  return guard([&] {
    require(g && out, "null argument");
    *out = g->g.edges.size();
  });
}

pd_status pd_graph_emit_code(const pd_graph* g, char** out) {
  return guard([&] {
    require(g && out, "null argument");
    *out = dup_string(pseudodiag::emit_code(g->g).text);
  });
}

pd_status pd_graph_describe(const pd_graph* g, char** out) {
  return guard([&] {
    require(g && out, "null argument");
    *out = dup_string(pseudodiag::describe(g->g).joined_text);
  });
}

pd_status pd_graph_render_svg(const pd_graph* g, char** out) {
  return guard([&] {
    require(g && out, "null argument");
    *out = dup_string(pseudodiag::to_svg(pseudodiag::layout(g->g)));
  });
}

pd_status pd_graph_is_isomorphic(const pd_graph* a, const pd_graph* b, int* out) {
  return guard([&] {
    require(a && b && out, "null argument");
    *out = pseudodiag::is_isomorphic(a->g, b->g) ? 1 : 0;
  });
}

pd_status pd_crop_caption_file(const char* path, double y_tolerance, char** out) {
  return guard([&] {
    require(path && out, "null argument");
    require(y_tolerance >= 0.0, "y tolerance must be >= 0");
    const auto doc = pseudodiag::group_words(pseudodiag::load_ocr_file(path), y_tolerance);
    *out = dup_string(pseudodiag::crop_caption(doc));
  });
}

pd_status pd_config_new(pd_config** out) {
  return guard([&] {
    require(out != nullptr, "out is null");
    *out = new pd_config{};
  });
}

void pd_config_free(pd_config* c) { delete c; }

pd_status pd_config_set_mode(pd_config* c, const char* mode) {
  return guard([&] {
    require(c && mode, "null argument");
    const auto m = pseudodiag::parse_mode(mode);
    require(m.has_value(), "unknown mode");
    c->cfg.mode = *m;
  });
}

pd_status pd_config_add_input(pd_config* c, const char* path) {
  return guard([&] {
    require(c && path && *path, "null or empty argument");
    c->cfg.inputs.emplace_back(path);
  });
}

pd_status pd_config_set_output(pd_config* c, const char* dir) {
  return guard([&] {
    require(c && dir && *dir, "null or empty argument");
    c->cfg.out_dir = dir;
  });
}

pd_status pd_config_set_seed(pd_config* c, uint64_t seed) {
  return guard([&] {
    require(c != nullptr, "null argument");
    c->cfg.seed = seed;
  });
}

pd_status pd_config_set_size(pd_config* c, const char* name, size_t value) {
  return guard([&] {
    require(c && name, "null argument");
    auto& cfg = c->cfg;
    const std::string_view n = name;
    if (n == "node-size") cfg.synthesis.node_size = value;
    else if (n == "sampling-size") cfg.synthesis.sampling_size = value;
    else if (n == "max-diagrams") cfg.synthesis.max_diagrams = value;
    else if (n == "pos-images") cfg.hard.positive_images = value;
    else if (n == "pos-captions") cfg.hard.positive_captions = value;
    else if (n == "neg-images") cfg.hard.negative_images = value;
    else if (n == "neg-captions") cfg.hard.negative_captions = value;
    else if (n == "jobs") cfg.jobs = value;
    else if (n == "max-records") cfg.max_records = value;
    else if (n == "batch-size") cfg.batch_size = value;
    else if (n == "feature-dim") cfg.feature_dim = value;
    else require(false, "unknown size setting");
  });
}

pd_status pd_config_set_real(pd_config* c, const char* name, double value) {
  return guard([&] {
    require(c && name, "null argument");
    auto& cfg = c->cfg;
    const std::string_view n = name;
    if (n == "lambda-sc") cfg.loss.lambda_sc = value;
    else if (n == "temperature") cfg.loss.temperature = value;
    else if (n == "y-tolerance") cfg.y_tolerance = value;
    else if (n == "move-range") cfg.hard.move_range = value;
    else require(false, "unknown real setting");
  });
}

pd_status pd_config_set_emit(pd_config* c, const char* what, int enabled) {
  return guard([&] {
    require(c && what, "null argument");
    auto& cfg = c->cfg;
    const std::string_view w = what;
    const bool on = enabled != 0;
    if (w == "svg") cfg.emit_svg = on;
    else if (w == "codes") cfg.emit_codes = on;
    else if (w == "captions") cfg.emit_captions = on;
    else if (w == "hard-sets") cfg.emit_hard_sets = on;
    else require(false, "unknown emit flag");
  });
}

pd_status pd_config_set_log(pd_config* c, pd_log_fn fn, void* user) {
  return guard([&] {
    require(c != nullptr, "null argument");
    if (fn) {
      c->cfg.log = [fn, user](const std::string& line) { fn(line.c_str(), user); };
    } else {
      c->cfg.log = nullptr;
    }
  });
}

pd_status pd_run(const pd_config* c, pd_run_result* result) {
  return guard([&] {
    require(c && result, "null argument");
    const auto summary = pseudodiag::run_pipeline(c->cfg);
    result->exit_code = static_cast<int>(summary.status);
    result->records = summary.records;
    result->failures = summary.failures;
    if (summary.status != pseudodiag::RunStatus::Ok) {
      set_error(PD_OK, summary.message);
    }
  });
}

}  // extern "C"
