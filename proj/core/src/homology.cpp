#include "khss/homology.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "khss/detail/sparse_elimination.hpp"
#include "khss/scan.hpp"

namespace khss {

std::size_t DimTable::dim(int i, int j) const {
  auto it = cells_.find({i, j});
  return it == cells_.end() ? 0 : it->second;
}

void DimTable::set(int i, int j, std::size_t dim) {
  if (dim == 0) {
    cells_.erase({i, j});
  } else {
    cells_[{i, j}] = dim;
  }
}

std::size_t DimTable::total() const {
  std::size_t t = 0;
  for (const auto& [k, d] : cells_) t += d;
  return t;
}

DimTable DimTable::shifted(int di, int dj) const {
  DimTable out(field_, label_);
  for (const auto& [k, d] : cells_) out.set(k.first + di, k.second + dj, d);
  return out;
}

DimTable DimTable::mirrored() const {
  DimTable out(field_, label_.empty() ? label_ : "mirror(" + label_ + ")");
  for (const auto& [k, d] : cells_) out.set(-k.first, -k.second - 2, d);
  return out;
}

LaurentPoly::LaurentPoly(std::map<int, std::int64_t> coeffs) {
  for (const auto& [e, c] : coeffs) add(e, c);
}

void LaurentPoly::add(int exponent, std::int64_t c) {
  if (c == 0) return;
  auto& slot = coeffs_[exponent];
  slot += c;
  if (slot == 0) coeffs_.erase(exponent);
}

std::int64_t LaurentPoly::coeff(int exponent) const {
  auto it = coeffs_.find(exponent);
  return it == coeffs_.end() ? 0 : it->second;
}

std::int64_t LaurentPoly::at_one() const {
  std::int64_t s = 0;
  for (const auto& [e, c] : coeffs_) s += c;
  return s;
}

std::int64_t LaurentPoly::at_minus_one() const {
  std::int64_t s = 0;
  for (const auto& [e, c] : coeffs_) s += (e % 2 == 0) ? c : -c;
  return s;
}

std::int64_t LaurentPoly::abs_coefficient_sum() const {
  std::int64_t s = 0;
  for (const auto& [e, c] : coeffs_) s += std::llabs(c);
  return s;
}

int LaurentPoly::min_exponent() const { return coeffs_.empty() ? 0 : coeffs_.begin()->first; }
int LaurentPoly::max_exponent() const { return coeffs_.empty() ? 0 : coeffs_.rbegin()->first; }

std::string LaurentPoly::to_string(const std::string& var) const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    const auto [e, c] = *it;
    const std::int64_t mag = std::llabs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (e == 0) {
      os << mag;
      continue;
    }
    if (mag != 1) os << mag << "*";
    os << var;
    if (e != 1) os << "^" << e;
  }
  return os.str();
}

namespace {

template <class F>
DimTable homology_impl(const ReducedCube& cube, F field) {
  DimTable table(field.descriptor(), "");
  const int lo = cube.min_homological();
  const int hi = cube.max_homological();
  using V = typename F::value_type;
  for (int j : cube.quantum_gradings()) {
    std::size_t prev_rank = 0;
    CellBasis cur = cube.cell(lo, j);
    for (int i = lo; i <= hi; ++i) {
      CellBasis next = cube.cell(i + 1, j);
      std::size_t r = 0;
      if (cur.size() && next.size()) {
        auto rows = cube.differential(cur, next);
        detail::SparseEliminator<F> elim(field, static_cast<std::uint32_t>(rows.size()),
                                         static_cast<std::uint32_t>(next.size()), false);
        for (std::uint32_t k = 0; k < rows.size(); ++k) {
          detail::SparseVec<V> entries;
          entries.reserve(rows[k].size());
          for (const auto& [c, s] : rows[k]) {
            V v = field.from_int(s);
            if (!field.is_zero(v)) entries.emplace_back(c, v);
          }
          rows[k].clear();
          rows[k].shrink_to_fit();
          elim.set_row(k, std::move(entries));
        }
        r = elim.run();
      }
      const std::size_t h = cur.size() - r - prev_rank;
      table.set(i, j, h);
      prev_rank = r;
      cur = std::move(next);
    }
  }
  return table;
}

}  // namespace

DimTable bigraded_homology(const BigradedComplex& c) {
  return visit_field(c.field(), [&](auto f) { return homology_impl(c.cube(), f); });
}

DimTable khovanov_homology(const PlanarDiagram& d, const Field& field, const std::string& label, Engine engine) {
  DimTable t(field, label);
  if (engine == Engine::cube) {
    const ReducedCube cube(d);
    t = visit_field(field, [&](auto f) { return homology_impl(cube, f); });
    t.set_label(label);
    return t;
  }
  // Without marks every same-grading isomorphism is cancelled, so the
  // simplified complex has zero differential.
  const ScanComplex sc = scan_complex(d, field);
  const Bidegree off = scan_offset(d);
  for (const auto& g : sc.gens) t.set(g.h + off.i, g.q + off.j, t.dim(g.h + off.i, g.q + off.j) + 1);
  return t;
}

LaurentPoly jones_polynomial(const DimTable& t) {
  LaurentPoly p;
  for (const auto& [k, d] : t.cells()) p.add(k.second, (k.first % 2 == 0 ? 1 : -1) * static_cast<std::int64_t>(d));
  return p;
}

std::int64_t jones_abs_at_minus_one(const DimTable& t) {
  // Gaussian integer sum of (-1)^i sqrt(-1)^j dim.
  std::int64_t re = 0;
  std::int64_t im = 0;
  for (const auto& [k, d] : t.cells()) {
    const auto v = static_cast<std::int64_t>(d) * (k.first % 2 == 0 ? 1 : -1);
    switch (((k.second % 4) + 4) % 4) {
      case 0: re += v; break;
      case 1: im += v; break;
      case 2: re -= v; break;
      default: im -= v; break;
    }
  }
  if (re != 0 && im != 0) throw std::logic_error("table mixes even and odd quantum gradings");
  return std::llabs(re) + std::llabs(im);
}

DeltaProfile delta_profile(const DimTable& t) {
  DeltaProfile out;
  for (const auto& [k, d] : t.cells()) out.ranks[k.second - 2 * k.first] += d;
  out.thin = out.ranks.size() <= 1;
  return out;
}

std::string poincare_string(const DimTable& t) {
  if (t.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, d] : t.cells()) {
    if (!first) os << " + ";
    first = false;
    if (d != 1) os << d << "*";
    os << "t^" << k.first << " q^" << k.second;
  }
  return os.str();
}

}  // namespace khss
