#include "khss/linalg.hpp"

#include <algorithm>
#include <string>

namespace khss {
namespace {

using detail::SparseVec;

template <class Row>
auto find_entry(Row& row, std::size_t c) {
  return std::lower_bound(row.begin(), row.end(), c, [](const auto& e, std::size_t key) { return e.first < key; });
}

std::string dims(std::size_t r, std::size_t c) { return std::to_string(r) + "x" + std::to_string(c); }

// GF(2): dense bit rows.
RankKernelImage rki_gf2(const ExactMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  const std::size_t words = (cols + 63) / 64;
  std::vector<std::vector<std::uint64_t>> a(rows, std::vector<std::uint64_t>(words, 0));
  for (std::size_t r = 0; r < rows; ++r) {
    for (const auto& [c, v] : m.row(r)) a[r][c / 64] |= std::uint64_t{1} << (c % 64);
  }
  RankKernelImage out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    const std::size_t w = c / 64;
    const std::uint64_t bit = std::uint64_t{1} << (c % 64);
    std::size_t p = r;
    while (p < rows && !(a[p][w] & bit)) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    for (std::size_t k = 0; k < rows; ++k) {
      if (k != r && (a[k][w] & bit)) {
        for (std::size_t t = 0; t < words; ++t) a[k][t] ^= a[r][t];
      }
    }
    out.pivot_columns.push_back(c);
    ++r;
  }
  out.rank = r;
  std::vector<char> is_pivot(cols, 0);
  for (std::size_t c : out.pivot_columns) is_pivot[c] = 1;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    Vector v(cols, Rational(0));
    v[f] = Rational(1);
    for (std::size_t k = 0; k < out.rank; ++k) {
      if (a[k][f / 64] & (std::uint64_t{1} << (f % 64))) v[out.pivot_columns[k]] = Rational(1);
    }
    out.kernel.push_back(std::move(v));
  }
  return out;
}

// GF(p), p odd: dense reduced row echelon form.
RankKernelImage rki_gfp(const ExactMatrix& m) {
  const fields::Gfp f{m.field().characteristic};
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::vector<std::vector<std::uint32_t>> a(rows, std::vector<std::uint32_t>(cols, 0));
  for (std::size_t r = 0; r < rows; ++r) {
    for (const auto& [c, v] : m.row(r)) a[r][c] = f.from_rational(v);
  }
  RankKernelImage out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    const std::uint32_t inv = f.inv(a[r][c]);
    for (std::size_t t = c; t < cols; ++t) a[r][t] = f.mul(a[r][t], inv);
    for (std::size_t k = 0; k < rows; ++k) {
      if (k == r || a[k][c] == 0) continue;
      const std::uint32_t factor = a[k][c];
      for (std::size_t t = c; t < cols; ++t) a[k][t] = f.sub(a[k][t], f.mul(factor, a[r][t]));
    }
    out.pivot_columns.push_back(c);
    ++r;
  }
  out.rank = r;
  std::vector<char> is_pivot(cols, 0);
  for (std::size_t c : out.pivot_columns) is_pivot[c] = 1;
  for (std::size_t fc = 0; fc < cols; ++fc) {
    if (is_pivot[fc]) continue;
    Vector v(cols, Rational(0));
    v[fc] = Rational(1);
    for (std::size_t k = 0; k < out.rank; ++k) {
      if (a[k][fc] != 0) v[out.pivot_columns[k]] = Rational(static_cast<std::int64_t>(f.neg(a[k][fc])));
    }
    out.kernel.push_back(std::move(v));
  }
  return out;
}

// Q: fraction-free (Bareiss) forward elimination on an integer copy, then
// rational back substitution for the kernel.
RankKernelImage rki_q(const ExactMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::vector<std::vector<mpz_class>> a(rows, std::vector<mpz_class>(cols, 0));
  for (std::size_t r = 0; r < rows; ++r) {
    mpz_class lcm = 1;
    for (const auto& [c, v] : m.row(r)) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), v.denominator().get_mpz_t());
    for (const auto& [c, v] : m.row(r)) a[r][c] = v.numerator() * (lcm / v.denominator());
  }
  RankKernelImage out;
  mpz_class prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    for (std::size_t k = r + 1; k < rows; ++k) {
      for (std::size_t t = c + 1; t < cols; ++t) {
        a[k][t] = (a[r][c] * a[k][t] - a[k][c] * a[r][t]);
        mpz_divexact(a[k][t].get_mpz_t(), a[k][t].get_mpz_t(), prev.get_mpz_t());
      }
      a[k][c] = 0;
    }
    prev = a[r][c];
    out.pivot_columns.push_back(c);
    ++r;
  }
  out.rank = r;
  std::vector<char> is_pivot(cols, 0);
  for (std::size_t c : out.pivot_columns) is_pivot[c] = 1;
  for (std::size_t fc = 0; fc < cols; ++fc) {
    if (is_pivot[fc]) continue;
    std::vector<mpq_class> v(cols, 0);
    v[fc] = 1;
    for (std::size_t k = out.rank; k-- > 0;) {
      const std::size_t pc = out.pivot_columns[k];
      mpq_class s = 0;
      for (std::size_t t = pc + 1; t < cols; ++t) {
        if (a[k][t] != 0 && v[t] != 0) s += mpq_class(a[k][t]) * v[t];
      }
      v[pc] = -s / mpq_class(a[k][pc]);
    }
    Vector out_v;
    out_v.reserve(cols);
    for (auto& x : v) {
      x.canonicalize();
      out_v.emplace_back(x);
    }
    out.kernel.push_back(std::move(out_v));
  }
  return out;
}

}  // namespace

Rational reduce_into(const Field& field, const Rational& v) {
  switch (field.kind) {
    case Field::Kind::gf2:
      return Rational(static_cast<std::int64_t>(v.mod(2)));
    case Field::Kind::gfp:
      return Rational(static_cast<std::int64_t>(v.mod(field.characteristic)));
    case Field::Kind::rational:
      break;
  }
  return v;
}

ExactMatrix::ExactMatrix(Field field, std::size_t rows, std::size_t cols)
    : field_(field), n_rows_(rows), n_cols_(cols), data_(rows) {}

ExactMatrix ExactMatrix::identity(Field field, std::size_t n) {
  ExactMatrix m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m.data_[i].emplace_back(static_cast<std::uint32_t>(i), Rational(1));
  return m;
}

ExactMatrix ExactMatrix::from_dense(Field field, const std::vector<std::vector<std::int64_t>>& rows) {
  const std::size_t c = rows.empty() ? 0 : rows.front().size();
  ExactMatrix m(field, rows.size(), c);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != c) throw LinalgError("from_dense: ragged rows");
    for (std::size_t k = 0; k < c; ++k) m.set(r, k, Rational(rows[r][k]));
  }
  return m;
}

ExactMatrix ExactMatrix::from_dense(Field field, const std::vector<Vector>& rows) {
  const std::size_t c = rows.empty() ? 0 : rows.front().size();
  ExactMatrix m(field, rows.size(), c);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != c) throw LinalgError("from_dense: ragged rows");
    for (std::size_t k = 0; k < c; ++k) m.set(r, k, rows[r][k]);
  }
  return m;
}

std::size_t ExactMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& row : data_) n += row.size();
  return n;
}

void ExactMatrix::check_index(std::size_t r, std::size_t c) const {
  if (r >= n_rows_ || c >= n_cols_) {
    throw LinalgError("index (" + std::to_string(r) + "," + std::to_string(c) + ") outside " + dims(n_rows_, n_cols_));
  }
}

void ExactMatrix::set(std::size_t r, std::size_t c, const Rational& v) {
  check_index(r, c);
  Rational x = reduce_into(field_, v);
  auto& row = data_[r];
  auto it = find_entry(row, c);
  const bool present = it != row.end() && it->first == c;
  if (x.is_zero()) {
    if (present) row.erase(it);
  } else if (present) {
    it->second = std::move(x);
  } else {
    row.insert(it, {static_cast<std::uint32_t>(c), std::move(x)});
  }
}

void ExactMatrix::add_to(std::size_t r, std::size_t c, const Rational& v) { set(r, c, at(r, c) + v); }

Rational ExactMatrix::at(std::size_t r, std::size_t c) const {
  check_index(r, c);
  const auto& row = data_[r];
  auto it = find_entry(row, c);
  if (it != row.end() && it->first == c) return it->second;
  return Rational(0);
}

std::vector<Vector> ExactMatrix::to_dense() const {
  std::vector<Vector> out(n_rows_, Vector(n_cols_, Rational(0)));
  for (std::size_t r = 0; r < n_rows_; ++r) {
    for (const auto& [c, v] : data_[r]) out[r][c] = v;
  }
  return out;
}

ExactMatrix ExactMatrix::transpose() const {
  ExactMatrix t(field_, n_cols_, n_rows_);
  for (std::size_t r = 0; r < n_rows_; ++r) {
    for (const auto& [c, v] : data_[r]) t.data_[c].emplace_back(static_cast<std::uint32_t>(r), v);
  }
  return t;
}

Vector ExactMatrix::apply(const Vector& v) const {
  if (v.size() != n_cols_) throw LinalgError("apply: vector length mismatch");
  Vector out(n_rows_, Rational(0));
  for (std::size_t r = 0; r < n_rows_; ++r) {
    Rational s(0);
    for (const auto& [c, x] : data_[r]) {
      if (!v[c].is_zero()) s += x * v[c];
    }
    out[r] = reduce_into(field_, s);
  }
  return out;
}

bool operator==(const ExactMatrix& a, const ExactMatrix& b) {
  return a.field_ == b.field_ && a.n_rows_ == b.n_rows_ && a.n_cols_ == b.n_cols_ && a.data_ == b.data_;
}

RankKernelImage rank_kernel_image(const ExactMatrix& m) {
  RankKernelImage out;
  switch (m.field().kind) {
    case Field::Kind::gf2:
      out = rki_gf2(m);
      break;
    case Field::Kind::gfp:
      out = rki_gfp(m);
      break;
    case Field::Kind::rational:
      out = rki_q(m);
      break;
  }
  const ExactMatrix t = m.transpose();
  for (std::size_t c : out.pivot_columns) {
    Vector col(m.rows(), Rational(0));
    for (const auto& [r, v] : t.row(c)) col[r] = v;
    out.image.push_back(std::move(col));
  }
  return out;
}

std::size_t matrix_rank(const ExactMatrix& m) { return rank_kernel_image(m).rank; }

std::size_t sparse_rank(const ExactMatrix& m) {
  return visit_field(m.field(), [&](auto f) -> std::size_t {
    using F = decltype(f);
    using V = typename F::value_type;
    detail::SparseEliminator<F> elim(f, static_cast<std::uint32_t>(m.rows()), static_cast<std::uint32_t>(m.cols()), false);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      detail::SparseVec<V> row;
      for (const auto& [c, v] : m.row(r)) row.emplace_back(c, f.from_rational(v));
      elim.set_row(static_cast<std::uint32_t>(r), std::move(row));
    }
    return elim.run();
  });
}

ExactMatrix compose(const ExactMatrix& a, const ExactMatrix& b) {
  if (!(a.field() == b.field())) throw LinalgError("compose: field mismatch");
  if (a.cols() != b.rows()) {
    throw LinalgError("compose: inner dimensions differ (" + dims(a.rows(), a.cols()) + " * " + dims(b.rows(), b.cols()) + ")");
  }
  ExactMatrix out(a.field(), a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    std::vector<Rational> acc(b.cols(), Rational(0));
    std::vector<char> touched(b.cols(), 0);
    for (const auto& [k, av] : a.row(r)) {
      for (const auto& [c, bv] : b.row(k)) {
        acc[c] += av * bv;
        touched[c] = 1;
      }
    }
    for (std::size_t c = 0; c < b.cols(); ++c) {
      if (touched[c]) out.set(r, c, acc[c]);
    }
  }
  return out;
}

}  // namespace khss
