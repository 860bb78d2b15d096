#include <charconv>
#include <cmath>
#include <set>

#include "voxflow/tensor_io.hpp"

namespace voxflow::io {

namespace {

struct Line {
  std::size_t number;  // 1-based
  std::string_view text;
};

/// Splits into lines; tolerates CRLF and one trailing newline, rejects other blank lines.
std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t start = 0, number = 1;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view l = text.substr(start, end - start);
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    if (l.empty()) throw Error(ErrorCode::SchemaError, "line " + std::to_string(number) + ": blank line");
    lines.push_back({number, l});
    start = end + 1;
    ++number;
  }
  return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

[[noreturn]] void fail(ErrorCode code, std::size_t line, const std::string& what) {
  throw Error(code, "line " + std::to_string(line) + ": " + what);
}

double parse_probability(std::string_view field, std::size_t line, const char* name) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), x);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size())
    fail(ErrorCode::SchemaError, line, std::string(name) + " '" + std::string(field) + "' is not a number");
  if (!std::isfinite(x) || x < 0.0 || x > 1.0)
    fail(ErrorCode::RangeError, line, std::string(name) + " " + std::string(field) + " outside [0, 1]");
  return x;
}

int parse_label(std::string_view field, std::size_t line) {
  if (field == "0") return 0;
  if (field == "1") return 1;
  fail(ErrorCode::SchemaError, line, "label '" + std::string(field) + "' must be 0 or 1");
}

std::string parse_id(std::string_view field, std::size_t line) {
  if (field.empty()) fail(ErrorCode::SchemaError, line, "empty sample_id");
  if (field.find('"') != std::string_view::npos) fail(ErrorCode::SchemaError, line, "quoted fields are not supported");
  return std::string(field);
}

void check_id_writable(const std::string& id) {
  if (id.empty() || id.find_first_of(",\"\r\n") != std::string::npos)
    throw Error(ErrorCode::SchemaError, "sample id '" + id + "' cannot be written to CSV");
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

PredictionSet parse_predictions(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw Error(ErrorCode::SchemaError, "line 1: missing header");
  const bool with_fold = lines[0].text == "sample_id,score,label,fold";
  if (!with_fold && lines[0].text != "sample_id,score,label")
    fail(ErrorCode::SchemaError, 1, "header must be 'sample_id,score,label[,fold]'");
  const std::size_t n_fields = with_fold ? 4 : 3;
  PredictionSet out;
  std::set<std::pair<std::string, int>> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto [number, line] = lines[i];
    const auto f = split_fields(line);
    if (f.size() != n_fields)
      fail(ErrorCode::SchemaError, number, "expected " + std::to_string(n_fields) + " fields, got " + std::to_string(f.size()));
    Prediction p;
    p.sample_id = parse_id(f[0], number);
    p.score = parse_probability(f[1], number, "score");
    p.label = parse_label(f[2], number);
    if (with_fold) {
      int fold = 0;
      const auto [ptr, ec] = std::from_chars(f[3].data(), f[3].data() + f[3].size(), fold);
      if (f[3].empty() || ec != std::errc() || ptr != f[3].data() + f[3].size() || fold < 0)
        fail(ErrorCode::SchemaError, number, "fold '" + std::string(f[3]) + "' must be a non-negative integer");
      p.fold = fold;
    }
    if (!seen.emplace(p.sample_id, p.fold.value_or(-1)).second)
      fail(ErrorCode::SchemaError, number, "duplicate sample_id '" + p.sample_id + "' within a fold");
    out.push_back(std::move(p));
  }
  return out;
}

std::string format_predictions(const PredictionSet& p) {
  validate(p);
  const bool with_fold = !p.empty() && p.front().fold.has_value();
  for (const auto& r : p)
    if (r.fold.has_value() != with_fold) throw Error(ErrorCode::SchemaError, "fold column must be present for all records or none");
  std::string out = with_fold ? "sample_id,score,label,fold\n" : "sample_id,score,label\n";
  for (const auto& r : p) {
    check_id_writable(r.sample_id);
    out += r.sample_id + "," + format_double(r.score) + "," + std::to_string(r.label);
    if (with_fold) out += "," + std::to_string(*r.fold);
    out += "\n";
  }
  return out;
}

PredictionSet read_predictions(const fs::path& path) {
  try {
    return parse_predictions(read_text(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::IoError) throw;
    throw e.with_context(path.string());
  }
}

reliability::ProbMatrix parse_probmatrix(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw Error(ErrorCode::SchemaError, "line 1: missing header");
  const auto header = split_fields(lines[0].text);
  if (header.size() < 4 || header[0] != "sample_id" || header[1] != "label")
    fail(ErrorCode::SchemaError, 1, "header must be 'sample_id,label,p_0,...,p_{T-1}' with T >= 2");
  for (std::size_t c = 2; c < header.size(); ++c)
    if (header[c] != "p_" + std::to_string(c - 2)) fail(ErrorCode::SchemaError, 1, "column " + std::to_string(c) + " must be p_" + std::to_string(c - 2));
  reliability::ProbMatrix m;
  m.columns = header.size() - 2;
  std::set<std::string> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto [number, line] = lines[i];
    const auto f = split_fields(line);
    if (f.size() != header.size())
      fail(ErrorCode::SchemaError, number, "expected " + std::to_string(header.size()) + " fields, got " + std::to_string(f.size()));
    std::string id = parse_id(f[0], number);
    if (!seen.insert(id).second) fail(ErrorCode::SchemaError, number, "duplicate sample_id '" + id + "'");
    m.ids.push_back(std::move(id));
    m.labels.push_back(parse_label(f[1], number));
    for (std::size_t c = 2; c < f.size(); ++c) m.values.push_back(parse_probability(f[c], number, "probability"));
  }
  return m;
}

std::string format_probmatrix(const reliability::ProbMatrix& m) {
  m.validate();
  std::string out = "sample_id,label";
  for (std::size_t c = 0; c < m.columns; ++c) out += ",p_" + std::to_string(c);
  out += "\n";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    check_id_writable(m.ids[r]);
    out += m.ids[r] + "," + std::to_string(m.labels[r]);
    for (std::size_t c = 0; c < m.columns; ++c) out += "," + format_double(m.at(r, c));
    out += "\n";
  }
  return out;
}

reliability::ProbMatrix read_probmatrix(const fs::path& path) {
  try {
    return parse_probmatrix(read_text(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::IoError) throw;
    throw e.with_context(path.string());
  }
}

std::string format_reliability(const std::vector<reliability::ReliabilityBin>& bins) {
  std::string out = "bin_lo,bin_hi,mean_pred,pos_rate,count\n";
  for (const auto& b : bins) {
    out += format_double(b.lo) + "," + format_double(b.hi) + ",";
    out += (b.mean_pred ? format_double(*b.mean_pred) : "") + ",";
    out += (b.pos_rate ? format_double(*b.pos_rate) : "") + ",";
    out += std::to_string(b.count) + "\n";
  }
  return out;
}

}  // namespace voxflow::io
