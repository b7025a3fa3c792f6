#pragma once

#include <Eigen/SparseCore>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>

#include "unisgd/problem.hpp"
#include "unisgd/random.hpp"

namespace unisgd {

using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Row-oriented feature matrix with labels. Stored sparse unless more than
// half of the entries are non-zero.
class Dataset {
 public:
  Dataset(SparseRowMatrix features, Vector labels);
  Dataset(RowMatrix features, Vector labels);

  std::size_t n() const;
  std::size_t d() const;
  bool is_dense() const { return std::holds_alternative<RowMatrix>(features_); }
  const Vector& labels() const { return labels_; }

  double row_norm_sq(std::size_t i) const;
  void scale_row(std::size_t i, double factor);
  void scale(double factor);
  RowMatrix dense() const;
  SparseRowMatrix sparse() const;

 private:
  void choose_storage();
  std::variant<SparseRowMatrix, RowMatrix> features_;
  Vector labels_;
};

// LIBSVM text: "label idx:val idx:val ..." with 1-based ascending indices.
// Labels {0,1} and {1,2} are mapped to {-1,+1}.
Dataset parse_libsvm(std::istream& in, std::optional<std::size_t> dimension = std::nullopt);
Dataset load_libsvm(const std::string& path, std::optional<std::size_t> dimension = std::nullopt);
void write_libsvm(const Dataset& data, std::ostream& out);

// u_i uniform on {1,...,1000}, drawn in row order from the index stream.
std::vector<int> draw_rescale_factors(std::size_t n, RandomSource& rng);
// Row i scaled by c u_i^2, with c making the mean row norm equal to one.
Dataset rescale_rows(Dataset data, RandomSource& rng);
Dataset rescale_rows(Dataset data, const std::vector<int>& factors);

enum class SyntheticType { gaussian = 1, gaussian_scaled = 2, column_scaled = 3, column_scaled_scaled = 4 };

struct LeastSquaresData {
  RowMatrix features;
  Vector labels;
};

// Synthetic least-squares generators; labels are all ones. Types 2 and 4 are rescaled so
// that the largest eigenvalue of A^T A is one.
LeastSquaresData generate_least_squares(SyntheticType type, std::size_t n, std::size_t d, RandomSource& rng,
                                        const std::optional<Vector>& column_scales = std::nullopt);

RowMatrix normalize_rows(RowMatrix a);

}  // namespace unisgd
