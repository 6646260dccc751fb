#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "pseudodiag/render.hpp"

namespace pseudodiag {

using Vector = std::vector<double>;

// Row i pairs image_features[i] with text_features[i]; the four sample lists
// hold hard positives/negatives for that row. Rows need not be normalized:
// every vector is scaled to unit length before similarities are taken.
struct EmbeddingBatch {
  std::vector<Vector> image_features;
  std::vector<Vector> text_features;
  std::vector<std::vector<Vector>> pos_image;
  std::vector<std::vector<Vector>> pos_text;
  std::vector<std::vector<Vector>> neg_image;
  std::vector<std::vector<Vector>> neg_text;

  std::size_t size() const { return image_features.size(); }
  std::size_t dim() const { return image_features.empty() ? 0 : image_features.front().size(); }
};

struct LossConfig {
  double lambda_sc = 0.1;
  double lambda_do = 0.0;  // only 0 is supported
  double temperature = 0.07;

  void check() const;
};

// |<a, b>| / (|a| |b|). Throws Error{ZeroVector}.
double abs_cos_sim(std::span<const double> a, std::span<const double> b);

// Symmetric InfoNCE over the batch with logits abs_cos_sim / temperature,
// averaging the image->text and text->image cross-entropies.
// Throws Error{BatchTooSmall} for fewer than 2 rows.
double info_nce(const EmbeddingBatch& batch, const LossConfig& cfg);

// Mean over the row's samples of exp(sim/T) for image-image, text-text,
// image-text and text-image pairs with the hard positives (resp. negatives).
double positive_similarity(std::size_t row, const EmbeddingBatch& batch, const LossConfig& cfg);
double negative_similarity(std::size_t row, const EmbeddingBatch& batch, const LossConfig& cfg);

// Mean over rows of -log(S+ / (S+ + S-)). Throws Error{NoSamples}.
double sc_loss(const EmbeddingBatch& batch, const LossConfig& cfg);

// info_nce + lambda_sc * sc_loss.
double total_loss(const EmbeddingBatch& batch, const LossConfig& cfg);

// Gradients with the same layout as the batch.
struct LossGradient {
  double value = 0.0;
  EmbeddingBatch grad;
};

LossGradient total_loss_gradient(const EmbeddingBatch& batch, const LossConfig& cfg);

struct GradCheckReport {
  double max_relative_error = 0.0;
  std::size_t checked_entries = 0;
  std::size_t skipped_entries = 0;
  std::size_t skipped_pairs = 0;  // pairs that caused a skip, or with |cos| < 10 * epsilon
};

// Central finite differences against total_loss_gradient. |cos| has a kink
// where a pair is orthogonal: an entry is skipped when a step of 10 * epsilon
// in it could change the sign of one of its pairs' inner products.
// epsilon must lie in [1e-7, 1e-3].
GradCheckReport grad_check(const EmbeddingBatch& batch, const LossConfig& cfg, double epsilon);

// Feature hashing stand-ins for the image and text encoders. Coordinate 0 is
// reserved for the flow direction (+1 top-down, -1 bottom-up); every other
// token is hashed with a sign into [1, dim). Results have unit length.
// Throws Error{EmptyItem} when there is nothing to encode, Error{InvalidArgument}
// for dim < 8.
Vector toy_encode_code(std::string_view code, std::size_t dim);
Vector toy_encode_description(std::string_view text, std::size_t dim);
Vector toy_encode_scene(const SceneGraph& scene, std::size_t dim);
// Code when the text starts with a flowchart header, description otherwise.
Vector toy_encode_caption(std::string_view text, std::size_t dim);

std::vector<std::string_view> tokenize(std::string_view text);

}  // namespace pseudodiag
