#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pseudodiag {

// One OCR word box. Width/height of 0 mean "unknown" (hand-written fixtures).
struct WordBox {
  std::string text;
  double x = 0.0;
  double y = 0.0;
  double width = 0.0;
  double height = 0.0;
  double confidence = 1.0;

  bool operator==(const WordBox&) const = default;
};

// A positioned text token. (x, y) is the box center in pixels. After
// group_words an element may stand for several words, listed in `words`;
// a plain word leaves `words` empty.
struct TextElement {
  std::string text;
  double x = 0.0;
  double y = 0.0;
  double confidence = 1.0;
  double width = 0.0;
  double height = 0.0;
  std::vector<WordBox> words;

  bool operator==(const TextElement&) const = default;
};

struct OcrDocument {
  std::string source_id;
  std::vector<TextElement> elements;  // OCR reading order
  std::optional<double> image_width;
  std::optional<double> image_height;

  bool operator==(const OcrDocument&) const = default;
};

// Tesseract `tesseract img out tsv` output. Keeps level-5 rows with non-empty
// text and conf >= 0. Throws Error{MalformedHeader|MalformedRow|EmptyDocument}.
OcrDocument parse_tesseract_tsv(std::string_view raw, std::string source_id);

// Writes the retained rows back out as Tesseract TSV (one level-5 row per
// element, plus a level-1 page row when the image size is known).
std::string to_tesseract_tsv(const OcrDocument& doc);

// Fixture schema: [{"text": str, "x": num, "y": num, "confidence": num?,
// "width": num?, "height": num?}].
OcrDocument parse_fixture_json(std::string_view raw, std::string source_id);

// Dispatches on extension (.tsv or .json); source_id is the file stem.
OcrDocument load_ocr_file(const std::filesystem::path& path);

// Merges runs of consecutive words on one text line into phrases. Two words
// join when their vertical centers differ by at most y_tolerance and the
// horizontal gap from the left word's right edge to the right word's left edge
// is at most 1.5x the median word width. Operates on the underlying words, so
// grouping an already grouped document is a no-op.
OcrDocument group_words(const OcrDocument& doc, double y_tolerance);

// Space-joined element texts in document order.
std::string crop_caption(const OcrDocument& doc);

// Width used for a word whose box width is unknown.
double effective_word_width(const WordBox& w);

// The words behind each element, in order.
std::vector<WordBox> flatten_words(const OcrDocument& doc);

}  // namespace pseudodiag
