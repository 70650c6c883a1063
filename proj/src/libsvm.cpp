#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <string_view>

#include "adaprox/data.hpp"

namespace adaprox {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f'; }

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

double parse_double(std::string_view tok, std::size_t line) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v))
    throw ParseError(line, "malformed number '" + std::string(tok) + "'");
  return v;
}

std::size_t parse_index(std::string_view tok, std::size_t line) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || v == 0)
    throw ParseError(line, "malformed feature index '" + std::string(tok) + "'");
  return v;
}

}  // namespace

LabeledDataset parse_libsvm(std::istream& in) {
  std::vector<double> raw_labels;
  std::vector<std::size_t> offsets{0};
  std::vector<std::size_t> cols;
  std::vector<double> vals;
  std::size_t dim = 0;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    const auto tokens = split_tokens(view);
    if (tokens.empty()) continue;

    raw_labels.push_back(parse_double(tokens[0], lineno));
    std::size_t last = 0;
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      const auto colon = tokens[t].find(':');
      if (colon == std::string_view::npos) throw ParseError(lineno, "expected idx:val, got '" + std::string(tokens[t]) + "'");
      const std::size_t idx = parse_index(tokens[t].substr(0, colon), lineno);
      if (idx <= last) throw ParseError(lineno, "feature indices must be strictly increasing");
      last = idx;
      cols.push_back(idx - 1);
      vals.push_back(parse_double(tokens[t].substr(colon + 1), lineno));
      dim = std::max(dim, idx);
    }
    offsets.push_back(vals.size());
  }

  const std::set<double> distinct(raw_labels.begin(), raw_labels.end());
  if (distinct.size() > 2) throw std::invalid_argument("libsvm: more than two label values");
  LabeledDataset out;
  out.labels.resize(static_cast<Eigen::Index>(raw_labels.size()));
  for (std::size_t j = 0; j < raw_labels.size(); ++j) {
    double l;
    if (distinct.size() == 2)
      l = raw_labels[j] == *distinct.begin() ? -1.0 : 1.0;
    else
      l = raw_labels[j] > 0.0 ? 1.0 : -1.0;
    out.labels[static_cast<Eigen::Index>(j)] = l;
  }
  out.features = SparseMatrixCSR(raw_labels.size(), dim, std::move(offsets), std::move(cols), std::move(vals));
  return out;
}

LabeledDataset load_libsvm(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset " + path.string());
  return parse_libsvm(in);
}

void write_libsvm(const LabeledDataset& data, std::ostream& out) {
  const auto& f = data.features;
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t i = 0; i < f.rows(); ++i) {
    os << (data.labels[static_cast<Eigen::Index>(i)] > 0 ? "+1" : "-1");
    for (std::size_t p = f.row_offsets()[i]; p < f.row_offsets()[i + 1]; ++p)
      os << ' ' << f.col_indices()[p] + 1 << ':' << f.values()[p];
    os << '\n';
  }
  out << os.str();
}

}  // namespace adaprox
