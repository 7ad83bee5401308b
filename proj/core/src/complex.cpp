#include "khss/complex.hpp"

#include <algorithm>
#include <stdexcept>
#include <variant>

#include "khss/detail/sparse_elimination.hpp"

namespace khss {

namespace {

using Cell = std::pair<int, int>;

std::string cell_name(int i, int j) { return "(" + std::to_string(i) + "," + std::to_string(j) + ")"; }

}  // namespace

void check_complex(const ChainComplex& c, bool check_square) {
  if (c.diff.size() != c.gens.size()) throw std::logic_error("differential has the wrong number of rows");
  const auto n = static_cast<std::uint32_t>(c.gens.size());
  for (std::uint32_t g = 0; g < n; ++g) {
    for (const auto& [t, v] : c.diff[g]) {
      if (t >= n) throw std::logic_error("differential target out of range");
      if (c.gens[t].i != c.gens[g].i + 1 || c.gens[t].j != c.gens[g].j) {
        throw std::logic_error("differential entry from " + cell_name(c.gens[g].i, c.gens[g].j) + " to " +
                               cell_name(c.gens[t].i, c.gens[t].j));
      }
    }
  }
  if (!check_square) return;
  visit_field(c.field, [&](auto f) {
    using V = typename decltype(f)::value_type;
    std::map<std::uint32_t, V> acc;
    for (std::uint32_t g = 0; g < n; ++g) {
      acc.clear();
      for (const auto& [t, v] : c.diff[g]) {
        const V a = f.from_rational(v);
        for (const auto& [u, w] : c.diff[t]) {
          auto [it, fresh] = acc.emplace(u, f.zero());
          it->second = f.add(it->second, f.mul(a, f.from_rational(w)));
        }
      }
      for (const auto& [u, v] : acc) {
        if (!f.is_zero(v)) throw std::logic_error("d o d is nonzero");
      }
    }
  });
}

ChainComplex cube_chain_complex(const PlanarDiagram& d, const Field& field) {
  const ReducedCube cube(d);
  ChainComplex out;
  out.field = field;
  std::map<Cell, std::uint32_t> first;
  std::map<Cell, CellBasis> bases;
  for (int j : cube.quantum_gradings()) {
    for (int i = cube.min_homological(); i <= cube.max_homological(); ++i) {
      CellBasis b = cube.cell(i, j);
      if (b.size() == 0) continue;
      first[{i, j}] = static_cast<std::uint32_t>(out.gens.size());
      for (std::size_t k = 0; k < b.size(); ++k) out.gens.push_back({i, j});
      bases.emplace(Cell{i, j}, std::move(b));
    }
  }
  out.diff.resize(out.gens.size());
  for (const auto& [cell, src] : bases) {
    auto it = bases.find({cell.first + 1, cell.second});
    if (it == bases.end()) continue;
    const auto rows = cube.differential(src, it->second);
    const std::uint32_t s0 = first[cell];
    const std::uint32_t t0 = first[it->first];
    for (std::size_t r = 0; r < rows.size(); ++r) {
      auto& row = out.diff[s0 + r];
      for (const auto& [col, sign] : rows[r]) {
        Rational v = visit_field(field, [&](auto f) { return f.to_rational(f.from_int(sign)); });
        if (!v.is_zero()) row.emplace_back(t0 + col, v);
      }
    }
  }
  return out;
}

namespace {

template <class F>
class Model {
 public:
  using V = typename F::value_type;

  Model(const ChainComplex& c, F field) : c_(c), f_(field) {
    local_.resize(c.gens.size());
    for (std::uint32_t g = 0; g < c.gens.size(); ++g) {
      auto& lv = levels_[{c.gens[g].i, c.gens[g].j}];
      local_[g] = static_cast<std::uint32_t>(lv.members.size());
      lv.members.push_back(g);
    }
    for (auto& [cell, lv] : levels_) {
      lv.is_pivot_row.assign(lv.members.size(), 0);
      lv.is_target.assign(lv.members.size(), 0);
    }
    // Map iteration order is (i, j) ascending, so for a fixed j the source
    // cell i is eliminated before i + 1 and its targets are already known.
    std::vector<Cell> order;
    for (const auto& [cell, lv] : levels_) order.push_back(cell);
    std::sort(order.begin(), order.end(), [](const Cell& a, const Cell& b) {
      return std::tie(a.second, a.first) < std::tie(b.second, b.first);
    });
    for (const Cell& cell : order) {
      Level& src = levels_[cell];
      auto it = levels_.find({cell.first + 1, cell.second});
      if (it == levels_.end()) continue;
      Level& dst = it->second;
      detail::SparseEliminator<F> elim(f_, static_cast<std::uint32_t>(src.members.size()),
                                       static_cast<std::uint32_t>(dst.members.size()), true);
      for (std::uint32_t r = 0; r < src.members.size(); ++r) {
        if (src.is_target[r]) continue;
        detail::SparseVec<V> entries;
        for (const auto& [t, v] : c_.diff[src.members[r]]) {
          V x = f_.from_rational(v);
          if (!f_.is_zero(x)) entries.emplace_back(local_[t], x);
        }
        std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        elim.set_row(r, std::move(entries));
      }
      elim.run();
      for (std::uint32_t r = 0; r < src.members.size(); ++r) src.is_pivot_row[r] = elim.row_is_pivot(r) ? 1 : 0;
      for (std::uint32_t k = 0; k < dst.members.size(); ++k) dst.is_target[k] = elim.col_is_pivot(k) ? 1 : 0;
      src.steps = elim.history();
    }
    table_ = DimTable(c.field, "");
    for (auto& [cell, lv] : levels_) {
      for (std::uint32_t k = 0; k < lv.members.size(); ++k) {
        if (!lv.is_pivot_row[k] && !lv.is_target[k]) lv.survivors.push_back(k);
      }
      table_.set(cell.first, cell.second, lv.survivors.size());
    }
  }

  [[nodiscard]] const DimTable& table() const { return table_; }

  SparseRow representative(int i, int j, std::size_t k) const {
    const Level& lv = level(i, j);
    if (k >= lv.survivors.size()) throw std::out_of_range("homology class index out of range");
    std::vector<V> v(lv.members.size(), f_.zero());
    v[lv.survivors[k]] = f_.one();
    for (auto it = lv.steps.rbegin(); it != lv.steps.rend(); ++it) {
      V acc = f_.zero();
      for (const auto& [r, coef] : it->col_entries) {
        if (!f_.is_zero(v[r])) acc = f_.add(acc, f_.mul(v[r], coef));
      }
      v[it->row] = f_.is_zero(acc) ? f_.zero() : f_.neg(f_.mul(acc, f_.inv(it->pivot)));
    }
    SparseRow out;
    for (std::uint32_t r = 0; r < v.size(); ++r) {
      if (!f_.is_zero(v[r])) out.emplace_back(lv.members[r], f_.to_rational(v[r]));
    }
    return out;
  }

  Vector project(int i, int j, const SparseRow& cycle) const {
    const Level& lv = level(i, j);
    std::vector<V> z(lv.members.size(), f_.zero());
    for (const auto& [g, val] : cycle) {
      if (g >= c_.gens.size() || c_.gens[g].i != i || c_.gens[g].j != j) {
        throw std::invalid_argument("cycle has support outside bidegree " + cell_name(i, j));
      }
      z[local_[g]] = f_.add(z[local_[g]], f_.from_rational(val));
    }
    auto prev = levels_.find({i - 1, j});
    if (prev != levels_.end()) {
      for (const auto& step : prev->second.steps) {
        const V& zy = z[step.col];
        if (f_.is_zero(zy)) continue;
        const V factor = f_.mul(zy, f_.inv(step.pivot));
        for (const auto& [col, val] : step.row_entries) z[col] = f_.sub(z[col], f_.mul(factor, val));
      }
    }
    Vector out;
    out.reserve(lv.survivors.size());
    for (std::uint32_t g : lv.survivors) out.push_back(f_.to_rational(z[g]));
    return out;
  }

 private:
  struct Level {
    std::vector<std::uint32_t> members;
    std::vector<detail::EliminationStep<V>> steps;
    std::vector<char> is_pivot_row;
    std::vector<char> is_target;
    std::vector<std::uint32_t> survivors;
  };

  const Level& level(int i, int j) const {
    static const Level empty{};
    auto it = levels_.find({i, j});
    return it == levels_.end() ? empty : it->second;
  }

  const ChainComplex& c_;
  F f_;
  std::vector<std::uint32_t> local_;
  std::map<Cell, Level> levels_;
  DimTable table_;
};

}  // namespace

DimTable homology_table(const ChainComplex& c) {
  return visit_field(c.field, [&](auto f) { return Model<decltype(f)>(c, f).table(); });
}

struct HomologyModel::Impl {
  ChainComplex complex;
  std::string key;
  std::variant<std::monostate, Model<fields::Gf2>, Model<fields::Gfp>, Model<fields::Q>> model;
  DimTable table;
};

HomologyModel::HomologyModel(ChainComplex c, std::string key) {
  check_complex(c, false);
  auto impl = std::make_shared<Impl>();
  impl->complex = std::move(c);
  impl->key = std::move(key);
  visit_field(impl->complex.field, [&](auto f) {
    using M = Model<decltype(f)>;
    impl->model.template emplace<M>(impl->complex, f);
    impl->table = std::get<M>(impl->model).table();
  });
  impl->table.set_label(impl->key);
  impl_ = std::move(impl);
}

const ChainComplex& HomologyModel::complex() const { return impl_->complex; }
const std::string& HomologyModel::key() const { return impl_->key; }
const DimTable& HomologyModel::table() const { return impl_->table; }

SparseRow HomologyModel::representative(int i, int j, std::size_t k) const {
  return std::visit(
      [&](const auto& m) -> SparseRow {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, std::monostate>) {
          return {};
        } else {
          return m.representative(i, j, k);
        }
      },
      impl_->model);
}

Vector HomologyModel::project(int i, int j, const SparseRow& cycle) const {
  return std::visit(
      [&](const auto& m) -> Vector {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, std::monostate>) {
          return {};
        } else {
          return m.project(i, j, cycle);
        }
      },
      impl_->model);
}

std::size_t HomologyMap::rank() const {
  std::size_t r = 0;
  for (const auto& [cell, m] : blocks) r += matrix_rank(m);
  return r;
}

std::size_t HomologyMap::rank_at(int i, int j) const {
  auto it = blocks.find({i, j});
  return it == blocks.end() ? 0 : matrix_rank(it->second);
}

HomologyMap induced_map(const HomologyModel& src, const HomologyModel& tgt, const ChainMap& f, Bidegree shift) {
  const ChainComplex& a = src.complex();
  const ChainComplex& b = tgt.complex();
  if (!(a.field == b.field)) throw std::invalid_argument("chain map between complexes over different fields");
  if (f.size() != a.size()) throw std::invalid_argument("chain map has the wrong number of rows");
  HomologyMap out;
  out.field = a.field;
  out.shift = shift;
  out.source = src.key();
  out.target = tgt.key();
  for (const auto& [cell, dim] : src.table().cells()) {
    const int ti = cell.first + shift.i;
    const int tj = cell.second + shift.j;
    const std::size_t tdim = tgt.dim(ti, tj);
    if (tdim == 0) continue;
    ExactMatrix m(a.field, tdim, dim);
    for (std::size_t k = 0; k < dim; ++k) {
      std::map<std::uint32_t, Rational> image;
      for (const auto& [g, v] : src.representative(cell.first, cell.second, k)) {
        for (const auto& [t, w] : f[g]) {
          if (t >= b.size()) throw std::invalid_argument("chain map target out of range");
          if (b.gens[t].i != ti || b.gens[t].j != tj) throw std::logic_error("chain map entry has the wrong bidegree");
          image[t] += v * w;
        }
      }
      SparseRow cycle;
      for (const auto& [t, v] : image) cycle.emplace_back(t, v);
      const Vector coords = tgt.project(ti, tj, cycle);
      for (std::size_t r = 0; r < coords.size(); ++r) m.set(r, k, coords[r]);
    }
    if (!m.is_zero()) out.blocks.emplace(cell, std::move(m));
  }
  return out;
}

HomologyMap compose_maps(const HomologyMap& second, const HomologyMap& first) {
  if (first.target != second.source) {
    throw std::invalid_argument("cannot compose: '" + first.target + "' is not '" + second.source + "'");
  }
  if (!(first.field == second.field)) throw std::invalid_argument("cannot compose maps over different fields");
  HomologyMap out;
  out.field = first.field;
  out.shift = {first.shift.i + second.shift.i, first.shift.j + second.shift.j};
  out.source = first.source;
  out.target = second.target;
  for (const auto& [cell, m1] : first.blocks) {
    auto it = second.blocks.find({cell.first + first.shift.i, cell.second + first.shift.j});
    if (it == second.blocks.end()) continue;
    ExactMatrix m = compose(it->second, m1);
    if (!m.is_zero()) out.blocks.emplace(cell, std::move(m));
  }
  return out;
}

}  // namespace khss
