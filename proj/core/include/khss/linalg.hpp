// Exact matrices over GF(2), GF(p) and Q with rank / kernel / image.
//
// Entries are stored as Rational regardless of field; for GF(p) they are the
// canonical residues 0..p-1. Matrices act on column vectors: an r x c matrix
// maps F^c to F^r.
#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "khss/detail/sparse_elimination.hpp"
#include "khss/field.hpp"
#include "khss/rational.hpp"

namespace khss {

class LinalgError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Vector = std::vector<Rational>;

class ExactMatrix {
 public:
  ExactMatrix() = default;
  ExactMatrix(Field field, std::size_t rows, std::size_t cols);

  static ExactMatrix identity(Field field, std::size_t n);
  static ExactMatrix from_dense(Field field, const std::vector<std::vector<std::int64_t>>& rows);
  static ExactMatrix from_dense(Field field, const std::vector<Vector>& rows);

  [[nodiscard]] const Field& field() const { return field_; }
  [[nodiscard]] std::size_t rows() const { return n_rows_; }
  [[nodiscard]] std::size_t cols() const { return n_cols_; }
  [[nodiscard]] std::size_t nonzeros() const;
  [[nodiscard]] bool is_zero() const { return nonzeros() == 0; }

  // Reduces v into the field; a zero value erases the entry.
  void set(std::size_t r, std::size_t c, const Rational& v);
  void add_to(std::size_t r, std::size_t c, const Rational& v);
  [[nodiscard]] Rational at(std::size_t r, std::size_t c) const;
  [[nodiscard]] const detail::SparseVec<Rational>& row(std::size_t r) const { return data_[r]; }

  [[nodiscard]] std::vector<Vector> to_dense() const;
  [[nodiscard]] ExactMatrix transpose() const;
  [[nodiscard]] Vector apply(const Vector& v) const;

  friend bool operator==(const ExactMatrix& a, const ExactMatrix& b);

 private:
  void check_index(std::size_t r, std::size_t c) const;

  Field field_ = Field::rationals();
  std::size_t n_rows_ = 0;
  std::size_t n_cols_ = 0;
  std::vector<detail::SparseVec<Rational>> data_;
};

struct RankKernelImage {
  std::size_t rank = 0;
  std::vector<Vector> kernel;  // vectors of length cols, M v = 0
  std::vector<Vector> image;   // pivot columns of M, vectors of length rows
  std::vector<std::size_t> pivot_columns;
};

// Deterministic: columns are scanned left to right and the first row (in the
// current order) with a nonzero entry becomes the pivot. GF(2) runs on
// bit-packed rows, Q on fraction-free integer elimination.
RankKernelImage rank_kernel_image(const ExactMatrix& m);
std::size_t matrix_rank(const ExactMatrix& m);

// Same result as rank_kernel_image(m).rank via the generic sparse eliminator.
std::size_t sparse_rank(const ExactMatrix& m);

// a * b; requires a.cols() == b.rows() and equal fields.
ExactMatrix compose(const ExactMatrix& a, const ExactMatrix& b);

Rational reduce_into(const Field& field, const Rational& v);

}  // namespace khss
