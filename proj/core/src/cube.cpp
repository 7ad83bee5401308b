#include "khss/cube.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <numeric>
#include <set>
#include <string>
#include <tuple>

namespace khss {
namespace {

constexpr int kMaxCircles = 32;

struct BinomialTable {
  std::uint64_t c[kMaxCircles + 1][kMaxCircles + 1] = {};
  BinomialTable() {
    for (int n = 0; n <= kMaxCircles; ++n) {
      c[n][0] = 1;
      for (int k = 1; k <= n; ++k) c[n][k] = c[n - 1][k - 1] + (k <= n - 1 ? c[n - 1][k] : 0);
    }
  }
};

const BinomialTable& binomials() {
  static const BinomialTable table;
  return table;
}

// Position of a word among words of the same weight, in numeric order.
std::uint64_t colex_rank(std::uint32_t word) {
  const auto& b = binomials();
  std::uint64_t rank = 0;
  int t = 0;
  while (word) {
    const int pos = std::countr_zero(word);
    ++t;
    rank += b.c[pos][t];
    word &= word - 1;
  }
  return rank;
}

std::uint32_t colex_unrank(std::uint64_t rank, int weight, int length) {
  const auto& b = binomials();
  std::uint32_t word = 0;
  int pos = length - 1;
  for (int t = weight; t >= 1; --t) {
    while (pos >= 0 && b.c[pos][t] > rank) --pos;
    word |= std::uint32_t{1} << pos;
    rank -= b.c[pos][t];
    --pos;
  }
  return word;
}

// Inserts a set bit at position p, shifting higher bits up.
std::uint32_t insert_bit(std::uint32_t word, int p) {
  const std::uint32_t low = word & ((std::uint32_t{1} << p) - 1);
  const std::uint32_t high = word >> p;
  return low | (std::uint32_t{1} << p) | (high << (p + 1));
}

std::uint32_t remove_bit(std::uint32_t mask, int p) {
  const std::uint32_t low = mask & ((std::uint32_t{1} << p) - 1);
  const std::uint32_t high = mask >> (p + 1);
  return low | (high << p);
}

}  // namespace

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (n > kMaxCircles) throw CubeError("binomial table too small");
  return binomials().c[n][k];
}

int crossing_cap() {
  if (const char* env = std::getenv("KHSS_MAX_CROSSINGS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= 30) return static_cast<int>(v);
  }
  return 20;
}

std::int64_t CellBasis::index_of(std::uint32_t vertex, std::uint32_t word) const {
  auto it = std::lower_bound(vertices.begin(), vertices.end(), vertex);
  if (it == vertices.end() || *it != vertex) return -1;
  const std::size_t k = static_cast<std::size_t>(it - vertices.begin());
  if (std::popcount(word) != weights[k]) return -1;
  const std::uint64_t local = colex_rank(word);
  if (offsets[k] + local >= offsets[k + 1]) return -1;
  return static_cast<std::int64_t>(offsets[k] + local);
}

CubeGenerator CellBasis::at(std::size_t index) const {
  auto it = std::upper_bound(offsets.begin(), offsets.end(), static_cast<std::uint64_t>(index));
  const std::size_t k = static_cast<std::size_t>(it - offsets.begin()) - 1;
  const std::uint64_t local = index - offsets[k];
  return {vertices[k], colex_unrank(local, weights[k], 31)};
}

ReducedCube::ReducedCube(PlanarDiagram d, int cap) : d_(std::move(d)) {
  validate(d_);
  n_ = static_cast<int>(d_.size());
  if (n_ > cap) {
    throw CubeError("diagram has " + std::to_string(n_) + " crossings, above the cap of " + std::to_string(cap));
  }
  if (n_ > 30) throw CubeError("too many crossings for the cube index");
  n_plus_ = d_.n_plus();
  n_minus_ = d_.n_minus();
  const std::uint32_t count = std::uint32_t{1} << n_;
  const int n_edges = 2 * n_;
  circle_of_edge_.assign(static_cast<std::size_t>(count) * static_cast<std::size_t>(n_edges), 0);
  circle_count_.assign(count, 0);
  traced_count_.assign(count, 0);
  by_weight_.assign(static_cast<std::size_t>(n_) + 1, {});

  std::vector<int> parent(static_cast<std::size_t>(n_edges) + 1);
  auto find = [&](int a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  };
  auto unite = [&](int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };
  std::vector<int> id(static_cast<std::size_t>(n_edges) + 1);
  for (std::uint32_t v = 0; v < count; ++v) {
    std::iota(parent.begin(), parent.end(), 0);
    for (int c = 0; c < n_; ++c) {
      const Crossing& x = d_.crossings[c];
      if (v & crossing_bit(c)) {
        unite(x[0], x[3]);
        unite(x[1], x[2]);
      } else {
        unite(x[0], x[1]);
        unite(x[2], x[3]);
      }
    }
    int traced = 0;
    for (int e = 1; e <= n_edges; ++e) {
      if (find(e) == e) id[e] = traced++;
    }
    const std::size_t base = static_cast<std::size_t>(v) * static_cast<std::size_t>(n_edges);
    for (int e = 1; e <= n_edges; ++e) circle_of_edge_[base + static_cast<std::size_t>(e - 1)] = static_cast<std::uint8_t>(id[find(e)]);
    const int total = traced + d_.free_loops;
    if (total > kMaxCircles) throw CubeError("too many circles in a smoothing");
    traced_count_[v] = static_cast<std::uint8_t>(traced);
    circle_count_[v] = static_cast<std::uint8_t>(total);
    by_weight_[std::popcount(v)].push_back(v);
  }
}

int ReducedCube::basepoint_circle(std::uint32_t v) const {
  if (d_.basepoint_edge == 0) return traced_count_[v];
  return circle_of_edge(v, d_.basepoint_edge);
}

int ReducedCube::homological(std::uint32_t v) const { return std::popcount(v) - n_minus_; }

int ReducedCube::quantum(std::uint32_t v, std::uint32_t word) const {
  const int k = circle_count_[v];
  return std::popcount(v) + k - 2 - 2 * std::popcount(word) + n_plus_ - 2 * n_minus_;
}

std::vector<int> ReducedCube::quantum_gradings() const {
  std::set<int> js;
  for (std::uint32_t v = 0; v < vertex_count(); ++v) {
    const int k = circle_count_[v];
    for (int w = 0; w < k; ++w) js.insert(std::popcount(v) + k - 2 - 2 * w + n_plus_ - 2 * n_minus_);
  }
  return {js.begin(), js.end()};
}

std::uint64_t ReducedCube::total_generators() const {
  std::uint64_t total = 0;
  for (std::uint32_t v = 0; v < vertex_count(); ++v) total += std::uint64_t{1} << (circle_count_[v] - 1);
  return total;
}

CellBasis ReducedCube::cell(int i, int j) const {
  CellBasis basis;
  basis.i = i;
  basis.j = j;
  basis.offsets.push_back(0);
  const int h = i + n_minus_;
  if (h < 0 || h > n_) return basis;
  // j = h + k - 2 - 2w + n_plus - 2 n_minus  =>  2w = h + k - 2 + n_plus - 2 n_minus - j
  const int base = h - 2 + n_plus_ - 2 * n_minus_ - j;
  for (std::uint32_t v : by_weight_[h]) {
    const int k = circle_count_[v];
    const int twice = base + k;
    if (twice < 0 || (twice & 1)) continue;
    const int w = twice / 2;
    if (w > k - 1) continue;
    basis.vertices.push_back(v);
    basis.weights.push_back(static_cast<std::uint8_t>(w));
    basis.offsets.push_back(basis.offsets.back() + binomial(k - 1, w));
  }
  return basis;
}

std::uint32_t ReducedCube::label_mask(const CubeGenerator& g) const {
  return insert_bit(g.word, basepoint_circle(g.vertex));
}

std::uint32_t ReducedCube::word_from_mask(std::uint32_t v, std::uint32_t mask) const {
  return remove_bit(mask, basepoint_circle(v));
}

void ReducedCube::edge_map(const CubeGenerator& g, int c, bool with_sign,
                           std::vector<std::pair<CubeGenerator, int>>& out) const {
  out.clear();
  const std::uint32_t v = g.vertex;
  const std::uint32_t bit = crossing_bit(c);
  if (v & bit) return;
  const std::uint32_t w = v | bit;
  const Crossing& x = d_.crossings[c];
  const int a_circle = circle_of_edge(v, x[0]);
  const int b_circle = circle_of_edge(v, x[2]);
  const std::uint32_t mask = label_mask(g);

  // Transport labels of untouched circles.
  std::uint32_t carried = 0;
  const int n_edges = 2 * n_;
  std::uint32_t seen = 0;
  for (int e = 1; e <= n_edges; ++e) {
    const int cv = circle_of_edge(v, e);
    if (cv == a_circle || cv == b_circle || (seen >> cv & 1u)) continue;
    seen |= std::uint32_t{1} << cv;
    if (mask >> cv & 1u) carried |= std::uint32_t{1} << circle_of_edge(w, e);
  }
  for (int f = 0; f < d_.free_loops; ++f) {
    const int cv = traced_count_[v] + f;
    if (mask >> cv & 1u) carried |= std::uint32_t{1} << (traced_count_[w] + f);
  }

  int sign = 1;
  if (with_sign && (std::popcount(v >> (n_ - c)) & 1)) sign = -1;

  const bool ax = mask >> a_circle & 1u;
  if (a_circle != b_circle) {
    const bool bx = mask >> b_circle & 1u;
    const int m = circle_of_edge(w, x[0]);
    if (ax && bx) return;
    std::uint32_t nm = carried;
    if (ax || bx) nm |= std::uint32_t{1} << m;
    out.push_back({{w, word_from_mask(w, nm)}, sign});
    return;
  }
  const int s1 = circle_of_edge(w, x[0]);
  const int s2 = circle_of_edge(w, x[1]);
  const std::uint32_t b1 = std::uint32_t{1} << s1;
  const std::uint32_t b2 = std::uint32_t{1} << s2;
  if (ax) {
    out.push_back({{w, word_from_mask(w, carried | b1 | b2)}, sign});
    return;
  }
  // 1 -> 1 (x) x + x (x) 1; the basepoint circle can never be labelled 1.
  const int bp = basepoint_circle(w);
  if (s1 != bp) out.push_back({{w, word_from_mask(w, carried | b2)}, sign});
  if (s2 != bp) out.push_back({{w, word_from_mask(w, carried | b1)}, sign});
  // Keep terms in ascending word order for reproducible row layout.
  std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) { return l.first.word < r.first.word; });
}

std::vector<SignedRow> ReducedCube::differential(const CellBasis& source, const CellBasis& target) const {
  std::vector<SignedRow> rows(source.size());
  std::vector<std::pair<CubeGenerator, int>> terms;
  std::size_t idx = 0;
  for (std::size_t k = 0; k < source.vertices.size(); ++k) {
    const std::uint32_t v = source.vertices[k];
    const std::uint64_t count = source.offsets[k + 1] - source.offsets[k];
    const int len = circle_count_[v] - 1;
    for (std::uint64_t local = 0; local < count; ++local, ++idx) {
      const CubeGenerator g{v, colex_unrank(local, source.weights[k], len)};
      SignedRow& row = rows[idx];
      for (int c = 0; c < n_; ++c) {
        if (v & crossing_bit(c)) continue;
        edge_map(g, c, true, terms);
        for (const auto& [h, s] : terms) {
          const std::int64_t t = target.index_of(h.vertex, h.word);
          if (t < 0) throw CubeError("differential left its bidegree");
          row.emplace_back(static_cast<std::uint32_t>(t), static_cast<std::int8_t>(s));
        }
      }
      std::sort(row.begin(), row.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
    }
  }
  return rows;
}

std::vector<std::tuple<int, int, std::size_t>> BigradedComplex::cells() const {
  std::vector<std::tuple<int, int, std::size_t>> out;
  const auto js = cube_->quantum_gradings();
  for (int i = cube_->min_homological(); i <= cube_->max_homological(); ++i) {
    for (int j : js) {
      const std::size_t dim = cube_->cell(i, j).size();
      if (dim) out.emplace_back(i, j, dim);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

ExactMatrix BigradedComplex::block(int i, int j) const {
  const CellBasis src = cube_->cell(i, j);
  const CellBasis dst = cube_->cell(i + 1, j);
  ExactMatrix m(field_, dst.size(), src.size());
  const auto rows = cube_->differential(src, dst);
  for (std::size_t s = 0; s < rows.size(); ++s) {
    for (const auto& [t, v] : rows[s]) m.set(t, s, Rational(v));
  }
  return m;
}

void BigradedComplex::dump(std::ostream& os) const {
  for (const auto& [i, j, dim] : cells()) {
    const CellBasis src = cube_->cell(i, j);
    const CellBasis dst = cube_->cell(i + 1, j);
    if (dst.size() == 0) continue;
    const auto rows = cube_->differential(src, dst);
    for (std::size_t s = 0; s < rows.size(); ++s) {
      for (const auto& [t, v] : rows[s]) {
        const Rational value = reduce_into(field_, Rational(v));
        if (value.is_zero()) continue;
        os << "(" << i << "," << j << ") " << s << " " << t << " " << value << "\n";
      }
    }
  }
}

BigradedComplex build_reduced_complex(const PlanarDiagram& d, const Field& field) {
  return BigradedComplex(std::make_shared<const ReducedCube>(d), field);
}

int cube_vertex_circle_count(const ReducedCube& cube, const std::vector<int>& v) {
  if (static_cast<int>(v.size()) != cube.n()) throw CubeError("smoothing vector length mismatch");
  std::uint32_t vertex = 0;
  for (int c = 0; c < cube.n(); ++c) {
    if (v[c]) vertex |= cube.crossing_bit(c);
  }
  return cube.circles(vertex);
}

}  // namespace khss
