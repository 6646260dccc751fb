#include "pseudodiag/loss.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>

#include "pseudodiag/error.hpp"
#include "pseudodiag/rng.hpp"
#include "text_util.hpp"

namespace pseudodiag {

void LossConfig::check() const {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw Error(ErrorCode::InvalidArgument, "temperature must be positive");
  }
  if (!(lambda_sc >= 0.0) || !std::isfinite(lambda_sc)) {
    throw Error(ErrorCode::InvalidArgument, "lambda_sc must be non-negative");
  }
  if (lambda_do != 0.0) {
    throw Error(ErrorCode::Unsupported, "the DO loss is not implemented; lambda_do must be 0");
  }
}

namespace {

template <class Batch, class F>
void for_each_vector(Batch& b, F&& f) {
  for (auto& v : b.image_features) f(v);
  for (auto& v : b.text_features) f(v);
  for (auto* lists : {&b.pos_image, &b.pos_text, &b.neg_image, &b.neg_text}) {
    for (auto& l : *lists) {
      for (auto& v : l) f(v);
    }
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void check_batch(const EmbeddingBatch& b, bool need_pairs, bool need_samples) {
  const std::size_t n = b.size();
  if (b.text_features.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "image and text row counts differ");
  }
  if (need_pairs && n < 2) {
    throw Error(ErrorCode::BatchTooSmall, "InfoNCE needs at least 2 rows");
  }
  if (n == 0) throw Error(ErrorCode::BatchTooSmall, "empty batch");
  const std::size_t d = b.dim();
  if (d < 2) throw Error(ErrorCode::DimensionMismatch, "feature dimension must be >= 2");
  for_each_vector(b, [&](const Vector& v) {
    if (v.size() != d) throw Error(ErrorCode::DimensionMismatch, "feature dimensions differ");
    for (double x : v) {
      if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "non-finite feature");
    }
    if (norm(v) == 0.0) throw Error(ErrorCode::ZeroVector, "zero feature vector");
  });
  if (need_samples) {
    for (const auto* lists : {&b.pos_image, &b.pos_text, &b.neg_image, &b.neg_text}) {
      if (lists->size() != n) {
        throw Error(ErrorCode::NoSamples, "hard sample lists must have one entry per row");
      }
      for (const auto& l : *lists) {
        if (l.empty()) throw Error(ErrorCode::NoSamples, "a row has no hard samples");
      }
    }
  }
}

EmbeddingBatch normalized(const EmbeddingBatch& b) {
  EmbeddingBatch u = b;
  for_each_vector(u, [](Vector& v) {
    const double n = norm(v);
    for (double& x : v) x /= n;
  });
  return u;
}

EmbeddingBatch zeros_like(const EmbeddingBatch& b) {
  EmbeddingBatch z = b;
  for_each_vector(z, [](Vector& v) { std::fill(v.begin(), v.end(), 0.0); });
  return z;
}

double sign(double c) { return c < 0.0 ? -1.0 : 1.0; }

// sim(a, b) = |a.b| / T on unit vectors; accumulates coeff * dsim into ga, gb.
double unit_sim(const Vector& a, const Vector& b, double inv_t) {
  return std::abs(dot(a, b)) * inv_t;
}

void add_sim_grad(const Vector& a, const Vector& b, double inv_t, double coeff, Vector* ga,
                  Vector* gb) {
  const double k = coeff * sign(dot(a, b)) * inv_t;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (ga) (*ga)[i] += k * b[i];
    if (gb) (*gb)[i] += k * a[i];
  }
}

double logsumexp(const std::vector<double>& v) {
  const double m = *std::max_element(v.begin(), v.end());
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

double info_nce_unit(const EmbeddingBatch& u, double inv_t, EmbeddingBatch* g) {
  const std::size_t n = u.size();
  std::vector<std::vector<double>> s(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      s[i][j] = unit_sim(u.image_features[i], u.text_features[j], inv_t);
    }
  }
  std::vector<double> row_lse(n), col_lse(n);
  double i2t = 0.0, t2i = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> col(n);
    for (std::size_t j = 0; j < n; ++j) col[j] = s[j][i];
    row_lse[i] = logsumexp(s[i]);
    col_lse[i] = logsumexp(col);
    i2t += row_lse[i] - s[i][i];
    t2i += col_lse[i] - s[i][i];
  }
  const double nn = static_cast<double>(n);
  const double loss = 0.5 * (i2t / nn + t2i / nn);
  if (g) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double p = std::exp(s[i][j] - row_lse[i]);  // softmax over texts for image i
        const double q = std::exp(s[i][j] - col_lse[j]);  // softmax over images for text j
        const double delta = i == j ? 1.0 : 0.0;
        const double coeff = 0.5 / nn * ((p - delta) + (q - delta));
        add_sim_grad(u.image_features[i], u.text_features[j], inv_t, coeff,
                     &g->image_features[i], &g->text_features[j]);
      }
    }
  }
  return loss;
}

// One of the four mean-of-exp terms: anchor against every vector in samples.
double mean_exp_term(const Vector& anchor, const std::vector<Vector>& samples, double inv_t,
                     double coeff, Vector* g_anchor, std::vector<Vector>* g_samples) {
  const double k = static_cast<double>(samples.size());
  double sum = 0.0;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const double e = std::exp(unit_sim(anchor, samples[s], inv_t));
    sum += e;
    if (g_anchor) {
      add_sim_grad(anchor, samples[s], inv_t, coeff * e / k, g_anchor, &(*g_samples)[s]);
    }
  }
  return sum / k;
}

double aggregate_similarity(const EmbeddingBatch& u, std::size_t row, bool positive,
                            double inv_t, double coeff, EmbeddingBatch* g) {
  const auto& imgs = positive ? u.pos_image[row] : u.neg_image[row];
  const auto& txts = positive ? u.pos_text[row] : u.neg_text[row];
  Vector* gv = g ? &g->image_features[row] : nullptr;
  Vector* gt = g ? &g->text_features[row] : nullptr;
  auto* g_imgs = g ? &(positive ? g->pos_image[row] : g->neg_image[row]) : nullptr;
  auto* g_txts = g ? &(positive ? g->pos_text[row] : g->neg_text[row]) : nullptr;
  const Vector& v = u.image_features[row];
  const Vector& t = u.text_features[row];
  return mean_exp_term(v, imgs, inv_t, coeff, gv, g_imgs) +
         mean_exp_term(t, txts, inv_t, coeff, gt, g_txts) +
         mean_exp_term(v, txts, inv_t, coeff, gv, g_txts) +
         mean_exp_term(t, imgs, inv_t, coeff, gt, g_imgs);
}

double sc_unit(const EmbeddingBatch& u, double inv_t, double weight, EmbeddingBatch* g) {
  const std::size_t n = u.size();
  const double nn = static_cast<double>(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sp = aggregate_similarity(u, i, true, inv_t, 0.0, nullptr);
    const double sn = aggregate_similarity(u, i, false, inv_t, 0.0, nullptr);
    total += std::log(sp + sn) - std::log(sp);
    if (g) {
      const double d_sp = weight / nn * (1.0 / (sp + sn) - 1.0 / sp);
      const double d_sn = weight / nn * (1.0 / (sp + sn));
      aggregate_similarity(u, i, true, inv_t, d_sp, g);
      aggregate_similarity(u, i, false, inv_t, d_sn, g);
    }
  }
  return total / nn;
}

// Gradient w.r.t. unit vectors -> gradient w.r.t. the raw vectors.
void project_to_raw(const EmbeddingBatch& raw, const EmbeddingBatch& unit, EmbeddingBatch& g) {
  std::vector<const Vector*> raws, units;
  for_each_vector(raw, [&](const Vector& v) { raws.push_back(&v); });
  for_each_vector(unit, [&](const Vector& v) { units.push_back(&v); });
  std::size_t k = 0;
  for_each_vector(g, [&](Vector& gv) {
    const Vector& uv = *units[k];
    const double n = norm(*raws[k]);
    const double along = dot(gv, uv);
    for (std::size_t i = 0; i < gv.size(); ++i) gv[i] = (gv[i] - along * uv[i]) / n;
    ++k;
  });
}

}  // namespace

double abs_cos_sim(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "vector sizes differ");
  const double na = norm(a), nb = norm(b);
  if (na == 0.0 || nb == 0.0) throw Error(ErrorCode::ZeroVector, "zero vector in similarity");
  return std::min(1.0, std::abs(dot(a, b)) / (na * nb));
}

double info_nce(const EmbeddingBatch& batch, const LossConfig& cfg) {
  cfg.check();
  check_batch(batch, true, false);
  return info_nce_unit(normalized(batch), 1.0 / cfg.temperature, nullptr);
}

double positive_similarity(std::size_t row, const EmbeddingBatch& batch, const LossConfig& cfg) {
  cfg.check();
  check_batch(batch, false, true);
  if (row >= batch.size()) throw Error(ErrorCode::InvalidArgument, "row out of range");
  return aggregate_similarity(normalized(batch), row, true, 1.0 / cfg.temperature, 0.0, nullptr);
}

double negative_similarity(std::size_t row, const EmbeddingBatch& batch, const LossConfig& cfg) {
  cfg.check();
  check_batch(batch, false, true);
  if (row >= batch.size()) throw Error(ErrorCode::InvalidArgument, "row out of range");
  return aggregate_similarity(normalized(batch), row, false, 1.0 / cfg.temperature, 0.0, nullptr);
}

double sc_loss(const EmbeddingBatch& batch, const LossConfig& cfg) {
  cfg.check();
  check_batch(batch, false, true);
  return sc_unit(normalized(batch), 1.0 / cfg.temperature, 1.0, nullptr);
}

double total_loss(const EmbeddingBatch& batch, const LossConfig& cfg) {
  return info_nce(batch, cfg) + cfg.lambda_sc * sc_loss(batch, cfg);
}

LossGradient total_loss_gradient(const EmbeddingBatch& batch, const LossConfig& cfg) {
  cfg.check();
  check_batch(batch, true, true);
  const EmbeddingBatch unit = normalized(batch);
  const double inv_t = 1.0 / cfg.temperature;
  LossGradient out;
  out.grad = zeros_like(batch);
  out.value = info_nce_unit(unit, inv_t, &out.grad) +
              cfg.lambda_sc * sc_unit(unit, inv_t, cfg.lambda_sc, &out.grad);
  project_to_raw(batch, unit, out.grad);
  return out;
}

// Central differences carry roughly 1e-16 * |loss| / epsilon of rounding
// noise, so gradients smaller than this are compared in absolute terms.
constexpr double kGradFloor = 1e-6;

GradCheckReport grad_check(const EmbeddingBatch& batch, const LossConfig& cfg, double epsilon) {
  if (!(epsilon >= 1e-7 && epsilon <= 1e-3)) {
    throw Error(ErrorCode::InvalidArgument, "epsilon must lie in [1e-7, 1e-3]");
  }
  const auto analytic = total_loss_gradient(batch, cfg);

  // Vector ids follow for_each_vector order.
  const std::size_t n = batch.size();
  std::vector<const Vector*> vecs;
  for_each_vector(batch, [&](const Vector& v) { vecs.push_back(&v); });
  std::vector<std::vector<std::size_t>> list_ids[4];
  {
    std::size_t id = 2 * n;
    const std::vector<std::vector<Vector>>* lists[4] = {&batch.pos_image, &batch.pos_text,
                                                        &batch.neg_image, &batch.neg_text};
    for (int l = 0; l < 4; ++l) {
      for (const auto& row : *lists[l]) {
        list_ids[l].emplace_back();
        for (std::size_t k = 0; k < row.size(); ++k) list_ids[l].back().push_back(id++);
      }
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) pairs.emplace_back(i, n + j);
    for (int l = 0; l < 4; ++l) {
      for (std::size_t id : list_ids[l][i]) {
        pairs.emplace_back(i, id);
        pairs.emplace_back(n + i, id);
      }
    }
  }

  // Perturbing a[e] by +-epsilon moves <a, b> by epsilon * b[e]; entries where
  // that could cross zero sit on the kink of |cos| and are not compared.
  GradCheckReport report;
  std::vector<std::vector<char>> skip(vecs.size());
  for (std::size_t id = 0; id < vecs.size(); ++id) skip[id].assign(vecs[id]->size(), 0);
  for (const auto& [a, b] : pairs) {
    const double ab = std::abs(dot(*vecs[a], *vecs[b]));
    bool flagged = abs_cos_sim(*vecs[a], *vecs[b]) < 10.0 * epsilon;
    for (std::size_t e = 0; e < vecs[a]->size(); ++e) {
      if (ab < 10.0 * epsilon * std::abs((*vecs[b])[e])) skip[a][e] = flagged = true;
      if (ab < 10.0 * epsilon * std::abs((*vecs[a])[e])) skip[b][e] = flagged = true;
    }
    if (flagged) ++report.skipped_pairs;
  }

  std::vector<const Vector*> grads;
  for_each_vector(analytic.grad, [&](const Vector& v) { grads.push_back(&v); });

  EmbeddingBatch work = batch;
  std::vector<Vector*> slots;
  for_each_vector(work, [&](Vector& v) { slots.push_back(&v); });
  for (std::size_t id = 0; id < slots.size(); ++id) {
    for (std::size_t e = 0; e < slots[id]->size(); ++e) {
      if (skip[id][e]) {
        ++report.skipped_entries;
        continue;
      }
      double& x = (*slots[id])[e];
      const double saved = x;
      x = saved + epsilon;
      const double up = total_loss(work, cfg);
      x = saved - epsilon;
      const double down = total_loss(work, cfg);
      x = saved;
      const double numeric = (up - down) / (2.0 * epsilon);
      const double exact = (*grads[id])[e];
      const double scale = std::max({std::abs(numeric), std::abs(exact), kGradFloor});
      report.max_relative_error =
          std::max(report.max_relative_error, std::abs(numeric - exact) / scale);
      ++report.checked_entries;
    }
  }
  return report;
}

std::vector<std::string_view> tokenize(std::string_view text) {
  std::vector<std::string_view> out;
  auto word_char = [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '_' || u >= 0x80;
  };
  std::size_t i = 0;
  while (i < text.size()) {
    if (detail::is_space(text[i])) {
      ++i;
    } else if (word_char(text[i])) {
      const std::size_t start = i;
      while (i < text.size() && word_char(text[i])) ++i;
      out.push_back(text.substr(start, i - start));
    } else {
      out.push_back(text.substr(i++, 1));
    }
  }
  return out;
}

namespace {

class HashedFeatures {
 public:
  explicit HashedFeatures(std::size_t dim) : v_(dim, 0.0) {
    if (dim < 8) throw Error(ErrorCode::InvalidArgument, "toy encoder needs dim >= 8");
  }

  void add(std::string_view token) {
    const std::uint64_t h = detail::fnv1a64(token);
    const std::size_t slot = 1 + static_cast<std::size_t>(h % (v_.size() - 1));
    v_[slot] += (splitmix64(h) & 1) ? 1.0 : -1.0;
    ++count_;
  }

  void set_direction(Direction d) {
    v_[0] = d == Direction::TopDown ? 1.0 : -1.0;
    ++count_;
  }

  Vector finish(std::string_view what) && {
    if (count_ == 0) throw Error(ErrorCode::EmptyItem, std::string("empty ") + std::string(what));
    const double n = norm(v_);
    if (n == 0.0) throw Error(ErrorCode::ZeroVector, "hashed features cancel out");
    for (double& x : v_) x /= n;
    return std::move(v_);
  }

 private:
  Vector v_;
  std::size_t count_ = 0;
};

}  // namespace

Vector toy_encode_code(std::string_view code, std::size_t dim) {
  HashedFeatures f(dim);
  const auto tokens = tokenize(code);
  std::size_t start = 0;
  if (tokens.size() >= 2 && tokens[0] == "flowchart" && (tokens[1] == "TD" || tokens[1] == "BT")) {
    f.add(tokens[0]);
    f.set_direction(tokens[1] == "TD" ? Direction::TopDown : Direction::BottomUp);
    start = 2;
  }
  for (std::size_t i = start; i < tokens.size(); ++i) f.add(tokens[i]);
  return std::move(f).finish("code");
}

Vector toy_encode_description(std::string_view text, std::size_t dim) {
  HashedFeatures f(dim);
  for (auto t : tokenize(text)) f.add(t);
  return std::move(f).finish("description");
}

Vector toy_encode_scene(const SceneGraph& scene, std::size_t dim) {
  HashedFeatures f(dim);
  if (scene.shapes.empty()) throw Error(ErrorCode::EmptyItem, "empty scene");
  f.set_direction(scene.direction);
  for (const auto& s : scene.shapes) {
    f.add(s.form == ShapeForm::Diamond ? "shape:diamond" : "shape:rect");
  }
  for (const auto& a : scene.arrows) f.add("arrow:" + a.from + ">" + a.to);
  return std::move(f).finish("scene");
}

Vector toy_encode_caption(std::string_view text, std::size_t dim) {
  const auto t = detail::trim(text);
  if (t.substr(0, 9) == "flowchart") return toy_encode_code(text, dim);
  return toy_encode_description(text, dim);
}

}  // namespace pseudodiag
