#include "pocket/dataset.hpp"

#include "pocket/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <string_view>
#include <unordered_map>

namespace pocket {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool is_missing_token(std::string_view tok) {
  if (tok.empty() || tok == "?") return true;
  std::string lower(tok);
  for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return lower == "nan" || lower == "na";
}

double parse_value(std::string_view tok, const std::string& where) {
  if (is_missing_token(tok)) return 0.0;
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec == std::errc::result_out_of_range) return 0.0;
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw DataError(where + ": unparseable value '" + std::string(tok) + "'");
  return std::isfinite(v) ? v : 0.0;
}

// Canonicalises numeric label tokens so that "1", "1.0" and "1.0000000e+00"
// name the same class; anything else is kept verbatim.
std::string canonical_label(std::string_view tok, const std::string& where) {
  if (tok.empty()) throw DataError(where + ": empty label");
  std::string_view t = tok;
  if (t.front() == '+') t.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec == std::errc() && ptr == t.data() + t.size()) {
    if (!std::isfinite(v)) throw DataError(where + ": non-finite label");
    if (v == std::floor(v) && std::abs(v) < 1e15)
      return std::to_string(static_cast<long long>(v));
  }
  return std::string(tok);
}

struct RawRecords {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> values;
};

RawRecords read_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());

  RawRecords raw;
  char delim = '\0';
  std::size_t width = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty()) continue;
    if (delim == '\0') delim = body.find('\t') != std::string_view::npos ? '\t' : ',';
    const std::string where = path.string() + ":" + std::to_string(line_no);
    const auto fields = split(body, delim);
    if (fields.size() < 3)
      throw DataError(where + ": a record needs a label and at least two values");
    if (width == 0) width = fields.size();
    if (fields.size() != width)
      throw DataError(where + ": expected " + std::to_string(width - 1) + " values, found " +
                      std::to_string(fields.size() - 1) + " (unequal-length series are not supported)");
    raw.labels.push_back(canonical_label(fields[0], where));
    std::vector<double> row(width - 1);
    for (std::size_t j = 1; j < width; ++j) row[j - 1] = parse_value(fields[j], where);
    raw.values.push_back(std::move(row));
  }
  if (raw.values.empty()) throw DataError(path.string() + ": empty file");
  return raw;
}

TimeSeriesDataset assemble(const std::filesystem::path& path, RawRecords raw,
                           std::vector<std::string> tokens, bool extend) {
  TimeSeriesDataset ds;
  ds.name = path.stem().string();
  const auto n = static_cast<Index>(raw.values.size());
  const auto l = static_cast<Index>(raw.values.front().size());
  ds.series.resize(n, l);
  std::unordered_map<std::string, int> index;
  for (std::size_t c = 0; c < tokens.size(); ++c) index.emplace(tokens[c], static_cast<int>(c));
  ds.labels.reserve(raw.labels.size());
  for (Index i = 0; i < n; ++i) {
    const auto& tok = raw.labels[static_cast<std::size_t>(i)];
    auto it = index.find(tok);
    if (it == index.end()) {
      if (!extend)
        throw DataError(path.string() + ": label '" + tok + "' does not occur in the training split");
      it = index.emplace(tok, static_cast<int>(tokens.size())).first;
      tokens.push_back(tok);
    }
    ds.labels.push_back(it->second);
    const auto& row = raw.values[static_cast<std::size_t>(i)];
    for (Index j = 0; j < l; ++j) ds.series(i, j) = row[static_cast<std::size_t>(j)];
  }
  ds.label_tokens = std::move(tokens);
  ds.num_classes = static_cast<int>(ds.label_tokens.size());
  return ds;
}

} // namespace

TimeSeriesDataset load_ucr_tsv(const std::filesystem::path& path) {
  return assemble(path, read_records(path), {}, true);
}

TimeSeriesDataset load_ucr_tsv(const std::filesystem::path& path,
                               const std::vector<std::string>& label_tokens) {
  return assemble(path, read_records(path), label_tokens, false);
}

std::pair<TimeSeriesDataset, TimeSeriesDataset>
train_test_pair(const std::filesystem::path& dir, const std::string& name) {
  const auto base = dir / name;
  const auto train_path = base / (name + "_TRAIN.tsv");
  const auto test_path = base / (name + "_TEST.tsv");
  for (const auto& p : {train_path, test_path})
    if (!std::filesystem::exists(p)) throw DataError("missing file " + p.string());
  auto train = load_ucr_tsv(train_path);
  auto test = load_ucr_tsv(test_path, train.label_tokens);
  if (train.length() != test.length())
    throw DataError(name + ": train and test series lengths differ");
  train.name = name;
  test.name = name;
  return {std::move(train), std::move(test)};
}

void znormalize_rows(Matrix& series) {
  for (Index i = 0; i < series.rows(); ++i) {
    auto row = series.row(i);
    const double mean = row.mean();
    row.array() -= mean;
    const double sd = std::sqrt(row.squaredNorm() / static_cast<double>(row.size()));
    if (sd > 1e-8) row /= sd;
  }
}

} // namespace pocket
