#include "pseudodiag/ocr.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pseudodiag/error.hpp"
#include "text_util.hpp"

namespace pseudodiag {

namespace {

constexpr std::array<std::string_view, 12> kTsvColumns = {
    "level", "page_num", "block_num", "par_num", "line_num", "word_num",
    "left",  "top",      "width",     "height",  "conf",     "text"};

constexpr double kFallbackCharWidth = 8.0;
constexpr double kGapFactor = 1.5;

double parse_number(std::string_view field, std::size_t line_no,
                    const char* column) {
  field = detail::trim(field);
  double v = 0.0;
  const auto* end = field.data() + field.size();
  const auto res = std::from_chars(field.data(), end, v);
  if (field.empty() || res.ec != std::errc() || res.ptr != end ||
      !std::isfinite(v)) {
    throw Error(ErrorCode::MalformedRow,
                "line " + std::to_string(line_no) + ": bad " + column +
                    " value '" + std::string(field) + "'");
  }
  return v;
}

void check_position(double x, double y, const std::string& where) {
  if (!std::isfinite(x) || !std::isfinite(y) || x < 0.0 || y < 0.0) {
    throw Error(ErrorCode::MalformedRow,
                where + ": position must be finite and non-negative");
  }
}

TextElement element_from_word(const WordBox& w) {
  TextElement e;
  e.text = w.text;
  e.x = w.x;
  e.y = w.y;
  e.confidence = w.confidence;
  e.width = w.width;
  e.height = w.height;
  return e;
}

WordBox word_from_element(const TextElement& e) {
  return WordBox{e.text, e.x, e.y, e.width, e.height, e.confidence};
}

bool joins(const WordBox& left, const WordBox& right, double y_tolerance,
           double max_gap) {
  if (std::abs(right.y - left.y) > y_tolerance) return false;
  if (right.x <= left.x) return false;
  const double gap = (right.x - effective_word_width(right) / 2.0) -
                     (left.x + effective_word_width(left) / 2.0);
  return gap <= max_gap;
}

TextElement merge_run(const std::vector<WordBox>& run) {
  if (run.size() == 1) return element_from_word(run.front());
  TextElement e;
  std::vector<std::string> texts;
  double sx = 0.0, sy = 0.0;
  double left = run.front().x, right = run.front().x;
  double top = run.front().y, bottom = run.front().y;
  e.confidence = run.front().confidence;
  for (const auto& w : run) {
    texts.push_back(w.text);
    sx += w.x;
    sy += w.y;
    const double hw = effective_word_width(w) / 2.0;
    left = std::min(left, w.x - hw);
    right = std::max(right, w.x + hw);
    top = std::min(top, w.y - w.height / 2.0);
    bottom = std::max(bottom, w.y + w.height / 2.0);
    e.confidence = std::min(e.confidence, w.confidence);
  }
  const auto n = static_cast<double>(run.size());
  e.text = detail::join(texts, " ");
  e.x = sx / n;
  e.y = sy / n;
  e.width = right - left;
  e.height = bottom - top;
  e.words = run;
  return e;
}

}  // namespace

double effective_word_width(const WordBox& w) {
  if (w.width > 0.0) return w.width;
  return kFallbackCharWidth * static_cast<double>(detail::utf8_length(w.text));
}

OcrDocument parse_tesseract_tsv(std::string_view raw, std::string source_id) {
  auto lines = detail::split(raw, '\n');
  if (lines.empty()) {
    throw Error(ErrorCode::MalformedHeader, "empty input");
  }
  {
    auto header = detail::split(detail::rtrim(lines.front()), '\t');
    bool ok = header.size() == kTsvColumns.size();
    for (std::size_t i = 0; ok && i < header.size(); ++i) {
      ok = detail::trim(header[i]) == kTsvColumns[i];
    }
    if (!ok) {
      throw Error(ErrorCode::MalformedHeader,
                  "expected Tesseract TSV header 'level\\tpage_num\\t...\\ttext'");
    }
  }

  OcrDocument doc;
  doc.source_id = std::move(source_id);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (detail::trim(line).empty()) continue;
    auto f = detail::split(line, '\t');
    if (f.size() == 11) f.emplace_back();
    const std::size_t line_no = i + 1;
    if (f.size() != 12) {
      throw Error(ErrorCode::MalformedRow,
                  "line " + std::to_string(line_no) + ": expected 12 columns, got " +
                      std::to_string(f.size()));
    }
    const double level = parse_number(f[0], line_no, "level");
    const double left = parse_number(f[6], line_no, "left");
    const double top = parse_number(f[7], line_no, "top");
    const double width = parse_number(f[8], line_no, "width");
    const double height = parse_number(f[9], line_no, "height");
    if (level == 1.0) {
      doc.image_width = width;
      doc.image_height = height;
      continue;
    }
    if (level != 5.0) continue;
    const double conf = parse_number(f[10], line_no, "conf");
    const auto text = detail::trim(f[11]);
    if (text.empty() || conf < 0.0) continue;

    TextElement e;
    e.text = std::string(text);
    e.x = left + width / 2.0;
    e.y = top + height / 2.0;
    e.width = width;
    e.height = height;
    e.confidence = std::clamp(conf / 100.0, 0.0, 1.0);
    check_position(e.x, e.y, "line " + std::to_string(line_no));
    doc.elements.push_back(std::move(e));
  }
  if (doc.elements.empty()) {
    throw Error(ErrorCode::EmptyDocument,
                "no word rows with text and conf >= 0 in '" + doc.source_id + "'");
  }
  return doc;
}

std::string to_tesseract_tsv(const OcrDocument& doc) {
  std::ostringstream os;
  for (std::size_t i = 0; i < kTsvColumns.size(); ++i) {
    os << (i ? "\t" : "") << kTsvColumns[i];
  }
  os << '\n';
  if (doc.image_width && doc.image_height) {
    os << "1\t1\t0\t0\t0\t0\t0\t0\t" << detail::format_decimal(*doc.image_width, 6)
       << '\t' << detail::format_decimal(*doc.image_height, 6) << "\t-1\t\n";
  }
  std::size_t word = 0;
  for (const auto& e : doc.elements) {
    ++word;
    os << "5\t1\t1\t1\t1\t" << word << '\t'
       << detail::format_decimal(e.x - e.width / 2.0, 6) << '\t'
       << detail::format_decimal(e.y - e.height / 2.0, 6) << '\t'
       << detail::format_decimal(e.width, 6) << '\t'
       << detail::format_decimal(e.height, 6) << '\t'
       << detail::format_decimal(e.confidence * 100.0, 6) << '\t' << e.text
       << '\n';
  }
  return os.str();
}

OcrDocument parse_fixture_json(std::string_view raw, std::string source_id) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(raw);
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::MalformedRow, std::string("fixture JSON: ") + ex.what());
  }
  if (!j.is_array()) {
    throw Error(ErrorCode::MalformedHeader, "fixture JSON must be an array");
  }
  OcrDocument doc;
  doc.source_id = std::move(source_id);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& item = j[i];
    const std::string where = "element " + std::to_string(i);
    if (!item.is_object() || !item.contains("text") || !item["text"].is_string() ||
        !item.contains("x") || !item["x"].is_number() || !item.contains("y") ||
        !item["y"].is_number()) {
      throw Error(ErrorCode::MalformedRow, where + ": needs text, x and y");
    }
    TextElement e;
    e.text = std::string(detail::trim(item["text"].get<std::string>()));
    if (e.text.empty()) {
      throw Error(ErrorCode::MalformedRow, where + ": empty text");
    }
    e.x = item["x"].get<double>();
    e.y = item["y"].get<double>();
    check_position(e.x, e.y, where);
    if (item.contains("confidence")) {
      e.confidence = std::clamp(item["confidence"].get<double>(), 0.0, 1.0);
    }
    if (item.contains("width")) e.width = std::max(0.0, item["width"].get<double>());
    if (item.contains("height")) e.height = std::max(0.0, item["height"].get<double>());
    doc.elements.push_back(std::move(e));
  }
  if (doc.elements.empty()) {
    throw Error(ErrorCode::EmptyDocument, "fixture '" + doc.source_id + "' has no elements");
  }
  return doc;
}

OcrDocument load_ocr_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::Io, "cannot open " + path.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  const auto ext = path.extension().string();
  if (ext == ".tsv") return parse_tesseract_tsv(buf.str(), path.stem().string());
  if (ext == ".json") return parse_fixture_json(buf.str(), path.stem().string());
  throw Error(ErrorCode::Unsupported,
              "OCR input must be .tsv or .json: " + path.string());
}

std::vector<WordBox> flatten_words(const OcrDocument& doc) {
  std::vector<WordBox> words;
  for (const auto& e : doc.elements) {
    if (e.words.empty()) {
      words.push_back(word_from_element(e));
    } else {
      words.insert(words.end(), e.words.begin(), e.words.end());
    }
  }
  return words;
}

OcrDocument group_words(const OcrDocument& doc, double y_tolerance) {
  if (!(y_tolerance >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "y_tolerance must be >= 0");
  }
  const auto words = flatten_words(doc);
  OcrDocument out;
  out.source_id = doc.source_id;
  out.image_width = doc.image_width;
  out.image_height = doc.image_height;
  if (words.empty()) return out;

  std::vector<double> widths;
  widths.reserve(words.size());
  for (const auto& w : words) widths.push_back(effective_word_width(w));
  std::sort(widths.begin(), widths.end());
  const std::size_t mid = widths.size() / 2;
  const double median = widths.size() % 2 ? widths[mid]
                                           : (widths[mid - 1] + widths[mid]) / 2.0;
  const double max_gap = kGapFactor * median;

  std::vector<WordBox> run{words.front()};
  for (std::size_t i = 1; i < words.size(); ++i) {
    if (joins(run.back(), words[i], y_tolerance, max_gap)) {
      run.push_back(words[i]);
    } else {
      out.elements.push_back(merge_run(run));
      run = {words[i]};
    }
  }
  out.elements.push_back(merge_run(run));
  return out;
}

std::string crop_caption(const OcrDocument& doc) {
  if (doc.elements.empty()) {
    throw Error(ErrorCode::EmptyDocument, "no text to caption");
  }
  std::string out;
  for (const auto& e : doc.elements) {
    if (!out.empty()) out += ' ';
    out += e.text;
  }
  return out;
}

}  // namespace pseudodiag
