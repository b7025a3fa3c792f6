#include "unisgd/data.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "unisgd/errors.hpp"

namespace unisgd {

Dataset::Dataset(SparseRowMatrix features, Vector labels) : features_(std::move(features)), labels_(std::move(labels)) {
  if (static_cast<Eigen::Index>(n()) != labels_.size()) throw std::invalid_argument("label count mismatch");
  std::get<SparseRowMatrix>(features_).makeCompressed();
  choose_storage();
}

Dataset::Dataset(RowMatrix features, Vector labels) : features_(std::move(features)), labels_(std::move(labels)) {
  if (static_cast<Eigen::Index>(n()) != labels_.size()) throw std::invalid_argument("label count mismatch");
  choose_storage();
}

void Dataset::choose_storage() {
  const double cells = static_cast<double>(n()) * static_cast<double>(d());
  if (auto* sp = std::get_if<SparseRowMatrix>(&features_)) {
    if (static_cast<double>(sp->nonZeros()) > 0.5 * cells) features_ = RowMatrix(sp->toDense());
  } else {
    const auto& dn = std::get<RowMatrix>(features_);
    const double nnz = static_cast<double>((dn.array() != 0.0).count());
    if (nnz <= 0.5 * cells) {
      SparseRowMatrix sp = dn.sparseView();
      sp.makeCompressed();
      features_ = std::move(sp);
    }
  }
}

std::size_t Dataset::n() const {
  return std::visit([](const auto& m) { return static_cast<std::size_t>(m.rows()); }, features_);
}

std::size_t Dataset::d() const {
  return std::visit([](const auto& m) { return static_cast<std::size_t>(m.cols()); }, features_);
}

double Dataset::row_norm_sq(std::size_t i) const {
  const auto r = static_cast<Eigen::Index>(i);
  return std::visit([r](const auto& m) { return m.row(r).squaredNorm(); }, features_);
}

void Dataset::scale_row(std::size_t i, double factor) {
  const auto r = static_cast<Eigen::Index>(i);
  std::visit([r, factor](auto& m) { m.row(r) *= factor; }, features_);
}

void Dataset::scale(double factor) {
  std::visit([factor](auto& m) { m *= factor; }, features_);
}

RowMatrix Dataset::dense() const {
  if (auto* sp = std::get_if<SparseRowMatrix>(&features_)) return RowMatrix(sp->toDense());
  return std::get<RowMatrix>(features_);
}

SparseRowMatrix Dataset::sparse() const {
  if (auto* sp = std::get_if<SparseRowMatrix>(&features_)) return *sp;
  SparseRowMatrix out = std::get<RowMatrix>(features_).sparseView();
  out.makeCompressed();
  return out;
}

namespace {

double parse_number(std::string_view token, std::size_t line, const char* what) {
  double v = 0.0;
  const auto* end = token.data() + token.size();
  // from_chars rejects an explicit plus sign.
  const auto* begin = token.size() > 1 && token[0] == '+' && token[1] != '-' ? token.data() + 1 : token.data();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
    throw ParseError(line, std::string("invalid ") + what + " '" + std::string(token) + "'");
  return v;
}

void normalize_labels(Vector& labels) {
  std::set<double> distinct(labels.data(), labels.data() + labels.size());
  if (distinct.size() != 2) return;
  const double lo = *distinct.begin();
  const double hi = *distinct.rbegin();
  if ((lo == 0.0 && hi == 1.0) || (lo == 1.0 && hi == 2.0))
    for (double& y : labels) y = (y == hi) ? 1.0 : -1.0;
}

}  // namespace

Dataset parse_libsvm(std::istream& in, std::optional<std::size_t> dimension) {
  using Triplet = Eigen::Triplet<double>;
  std::vector<Triplet> entries;
  std::vector<double> labels;
  std::size_t max_index = 0;
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    std::istringstream tokens(text);
    std::string token;
    if (!(tokens >> token)) continue;
    labels.push_back(parse_number(token, line_no, "label"));
    const auto row = static_cast<int>(labels.size() - 1);
    long previous = 0;
    while (tokens >> token) {
      const auto colon = token.find(':');
      if (colon == std::string::npos) throw ParseError(line_no, "expected index:value, got '" + token + "'");
      long index = 0;
      auto [ptr, ec] = std::from_chars(token.data(), token.data() + colon, index);
      if (ec != std::errc() || ptr != token.data() + colon || index < 1)
        throw ParseError(line_no, "invalid feature index '" + token.substr(0, colon) + "'");
      if (index <= previous) throw ParseError(line_no, "feature indices must be strictly ascending");
      previous = index;
      const double value = parse_number(std::string_view(token).substr(colon + 1), line_no, "feature value");
      max_index = std::max(max_index, static_cast<std::size_t>(index));
      if (value != 0.0) entries.emplace_back(row, static_cast<int>(index - 1), value);
    }
  }
  if (labels.empty()) throw ParseError(line_no, "no rows");
  std::size_t d = max_index;
  if (dimension) {
    if (*dimension < max_index)
      throw ParseError(line_no, "feature index " + std::to_string(max_index) + " exceeds dimension " +
                                    std::to_string(*dimension));
    d = *dimension;
  }
  if (d == 0) throw ParseError(line_no, "no features");
  SparseRowMatrix a(static_cast<Eigen::Index>(labels.size()), static_cast<Eigen::Index>(d));
  a.setFromTriplets(entries.begin(), entries.end());
  Vector y = Eigen::Map<Vector>(labels.data(), static_cast<Eigen::Index>(labels.size()));
  normalize_labels(y);
  return Dataset(std::move(a), std::move(y));
}

Dataset load_libsvm(const std::string& path, std::optional<std::size_t> dimension) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_libsvm(in, dimension);
}

void write_libsvm(const Dataset& data, std::ostream& out) {
  const SparseRowMatrix a = data.sparse();
  char buf[64];
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", data.labels()(i));
    out << buf;
    for (SparseRowMatrix::InnerIterator it(a, i); it; ++it) {
      if (it.value() == 0.0) continue;
      std::snprintf(buf, sizeof buf, "%.17g", it.value());
      out << ' ' << (it.col() + 1) << ':' << buf;
    }
    out << '\n';
  }
}

std::vector<int> draw_rescale_factors(std::size_t n, RandomSource& rng) {
  std::vector<int> u(n);
  for (auto& v : u) v = static_cast<int>(rng.uniform_index(1000, Stream::index)) + 1;
  return u;
}

Dataset rescale_rows(Dataset data, const std::vector<int>& factors) {
  if (factors.size() != data.n()) throw std::invalid_argument("one factor per row required");
  double mean_norm = 0.0;
  for (std::size_t i = 0; i < data.n(); ++i) {
    const double u = factors[i];
    data.scale_row(i, u * u);
    mean_norm += std::sqrt(data.row_norm_sq(i));
  }
  mean_norm /= static_cast<double>(data.n());
  if (!(mean_norm > 0.0)) throw std::invalid_argument("cannot rescale an all-zero dataset");
  data.scale(1.0 / mean_norm);
  return data;
}

Dataset rescale_rows(Dataset data, RandomSource& rng) {
  const auto factors = draw_rescale_factors(data.n(), rng);
  return rescale_rows(std::move(data), factors);
}

LeastSquaresData generate_least_squares(SyntheticType type, std::size_t n, std::size_t d, RandomSource& rng,
                                        const std::optional<Vector>& column_scales) {
  if (n == 0 || d == 0) throw std::invalid_argument("empty synthetic problem");
  const auto rows = static_cast<Eigen::Index>(n);
  const auto cols = static_cast<Eigen::Index>(d);
  LeastSquaresData out{RowMatrix(rows, cols), Vector::Ones(rows)};
  const bool columns = type == SyntheticType::column_scaled || type == SyntheticType::column_scaled_scaled;
  Vector scales = Vector::Ones(cols);
  if (columns) {
    if (column_scales) {
      if (column_scales->size() != cols) throw std::invalid_argument("column scale size mismatch");
      scales = *column_scales;
    } else {
      for (Eigen::Index j = 0; j < cols; ++j) scales(j) = rng.normal(Stream::noise);
    }
  }
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) out.features(i, j) = rng.normal(Stream::noise) * scales(j);
  if (type == SyntheticType::gaussian_scaled || type == SyntheticType::column_scaled_scaled) {
    const double top = largest_eigenvalue_gram(out.features, 1e-13);
    if (top > 0.0) out.features /= std::sqrt(top);
  }
  return out;
}

RowMatrix normalize_rows(RowMatrix a) {
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const double norm = a.row(i).norm();
    if (norm > 0.0) a.row(i) /= norm;
  }
  return a;
}

}  // namespace unisgd
