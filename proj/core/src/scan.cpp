#include "khss/scan.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace khss {
namespace {

using Matching = std::vector<std::uint8_t>;

// Slot partners of the two smoothings: s0 joins (0,1),(2,3); s1 joins (0,3),(1,2).
constexpr std::array<std::array<int, 4>, 2> kSmoothing = {{{1, 0, 3, 2}, {3, 2, 1, 0}}};

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// Cycles of the union of two matchings on the same points, numbered by
// smallest position.
struct Cycles {
  std::vector<std::uint8_t> of_pos;
  int count = 0;
};

Cycles cycles_of(const Matching& a, const Matching& b) {
  const int n = static_cast<int>(a.size());
  UnionFind uf(n);
  for (int p = 0; p < n; ++p) {
    uf.unite(p, a[p]);
    uf.unite(p, b[p]);
  }
  Cycles c;
  c.of_pos.assign(static_cast<std::size_t>(n), 0);
  std::vector<int> id(static_cast<std::size_t>(n), -1);
  for (int p = 0; p < n; ++p) {
    const int r = uf.find(p);
    if (id[r] < 0) id[r] = c.count++;
    c.of_pos[p] = static_cast<std::uint8_t>(id[r]);
  }
  return c;
}

// Glued surface of two families of dotted discs, reduced to the disc basis of
// the result cycles by neck cutting.
struct Shape {
  std::vector<std::uint32_t> m1;  // per component: nodes of the first family
  std::vector<std::uint32_t> m2;  // per component: nodes of the second family
  std::vector<int> genus;
  std::vector<std::uint64_t> cycles;  // per component: result cycle bits
  std::uint64_t bp_bit = 0;           // result cycle through the cut point
  // Tensor shapes only: how result cycles split into the new Hom basis.
  std::vector<std::uint8_t> kind;  // 0 boundary cycle, 1 source loop, 2 target loop
  std::vector<std::uint8_t> index;
};

struct GlueInput {
  int n1 = 0;
  int n2 = 0;
  std::vector<std::pair<int, int>> glues;  // node pairs, one per glued interval
  std::vector<int> result_node;            // a node on each result cycle
};

Shape finish_shape(const GlueInput& in) {
  const int n = in.n1 + in.n2;
  UnionFind uf(n);
  for (const auto& [x, y] : in.glues) uf.unite(x, y);
  std::vector<int> comp_id(static_cast<std::size_t>(n), -1);
  Shape s;
  int comps = 0;
  for (int v = 0; v < n; ++v) {
    const int r = uf.find(v);
    if (comp_id[r] < 0) {
      comp_id[r] = comps++;
      s.m1.push_back(0);
      s.m2.push_back(0);
      s.cycles.push_back(0);
    }
    const int c = comp_id[r];
    if (v < in.n1) {
      s.m1[c] |= std::uint32_t{1} << v;
    } else {
      s.m2[c] |= std::uint32_t{1} << (v - in.n1);
    }
  }
  std::vector<int> chi(static_cast<std::size_t>(comps), 0);
  for (int v = 0; v < n; ++v) ++chi[comp_id[uf.find(v)]];
  for (const auto& [x, y] : in.glues) --chi[comp_id[uf.find(x)]];
  for (std::size_t k = 0; k < in.result_node.size(); ++k) {
    s.cycles[comp_id[uf.find(in.result_node[k])]] |= std::uint64_t{1} << k;
  }
  s.genus.resize(static_cast<std::size_t>(comps));
  for (int c = 0; c < comps; ++c) {
    const int b = std::popcount(s.cycles[c]);
    const int twice = 2 - chi[c] - b;
    if (b == 0 || twice < 0 || (twice & 1)) throw std::logic_error("scan: glued surface has an impossible topology");
    s.genus[c] = twice / 2;
  }
  return s;
}

// Result masks (dotted result cycles) of gluing two disc terms, together with
// the power of two contributed by handles. Empty when the product vanishes.
int evaluate(const Shape& s, std::uint32_t mask1, std::uint32_t mask2, std::vector<std::uint64_t>& out) {
  out.assign(1, 0);
  int twos = 0;
  const std::size_t comps = s.genus.size();
  for (std::size_t c = 0; c < comps; ++c) {
    const int e = std::popcount(mask1 & s.m1[c]) + std::popcount(mask2 & s.m2[c]) + s.genus[c];
    if (e >= 2) {
      out.clear();
      return 0;
    }
    twos += s.genus[c];
    const std::uint64_t all = s.cycles[c];
    const bool has_bp = (all & s.bp_bit) != 0;
    if (e == 1) {
      if (has_bp) {
        out.clear();
        return 0;
      }
      for (auto& m : out) m |= all;
    } else if (has_bp) {
      for (auto& m : out) m |= all & ~s.bp_bit;
    } else if (std::popcount(all) == 1) {
      // a single boundary cycle stays undotted
    } else {
      std::vector<std::uint64_t> next;
      next.reserve(out.size() * static_cast<std::size_t>(std::popcount(all)));
      for (std::uint64_t m : out) {
        for (std::uint64_t rest = all; rest; rest &= rest - 1) {
          const std::uint64_t bit = rest & (~rest + 1);
          next.push_back(m | (all & ~bit));
        }
      }
      out.swap(next);
    }
  }
  return twos;
}

template <class F>
class Scanner {
 public:
  using V = typename F::value_type;
  using Morph = std::vector<std::pair<std::uint32_t, V>>;  // disc mask -> coefficient

  struct LocalObject {
    int smoothing;
    int h;
    int q;
    int tag;  // -1 for unmarked crossings
  };
  struct LocalSaddle {
    int from;
    int to;
  };

  Scanner(const PlanarDiagram& d, F field, const std::vector<ScanMark>& marks)
      : d_(d), f_(field), marks_(marks) {}

  ScanComplex run() {
    const int n = static_cast<int>(d_.size());
    const int n_edges = d_.n_edges();
    labels_ = d_.crossings;
    int extra_loops = d_.free_loops;
    if (d_.basepoint_edge != 0) {
      // Cut the basepoint edge: its second occurrence becomes a new label.
      bp_label_ = d_.basepoint_edge;
      bool first = true;
      for (auto& x : labels_) {
        for (int& e : x) {
          if (e != bp_label_) continue;
          if (first) {
            first = false;
          } else {
            e = n_edges + 1;
          }
        }
      }
    } else {
      extra_loops -= 1;
    }

    mark_of_.assign(static_cast<std::size_t>(n), -1);
    for (std::size_t m = 0; m < marks_.size(); ++m) mark_of_[marks_[m].crossing] = static_cast<int>(m);

    // Initial tangle: no boundary, one object per labelling of the free loops.
    boundary_.clear();
    matchings_.clear();
    matching_ids_.clear();
    const std::uint32_t empty = intern({});
    const int loop_objects = 1 << extra_loops;
    for (int labels = 0; labels < loop_objects; ++labels) {
      const int q = extra_loops - 2 * std::popcount(static_cast<unsigned>(labels));
      objs_.push_back({0, q, 0, empty, true});
    }
    out_.assign(objs_.size(), {});
    in_.assign(objs_.size(), {});

    std::vector<char> done(static_cast<std::size_t>(n), 0);
    for (int step = 0; step < n; ++step) {
      const int c = step == 0 ? start_crossing() : next_crossing(done);
      done[c] = 1;
      add_crossing(c);
      simplify();
    }
    simplify();
    return output();
  }

 private:
  struct Obj {
    int h;
    int q;
    std::uint32_t tags;
    std::uint32_t match;
    bool alive;
  };

  std::uint32_t intern(const Matching& m) {
    auto it = matching_ids_.find(m);
    if (it != matching_ids_.end()) return it->second;
    const auto id = static_cast<std::uint32_t>(matchings_.size());
    matchings_.push_back(m);
    matching_ids_.emplace(m, id);
    return id;
  }

  int start_crossing() const {
    if (bp_label_ == 0) return 0;
    for (std::size_t c = 0; c < labels_.size(); ++c) {
      for (int e : labels_[c]) {
        if (e == bp_label_) return static_cast<int>(c);
      }
    }
    return 0;
  }

  int next_crossing(const std::vector<char>& done) const {
    int best = -1;
    int best_shared = -1;
    int best_width = 0;
    std::set<int> bset(boundary_.begin(), boundary_.end());
    for (std::size_t c = 0; c < labels_.size(); ++c) {
      if (done[c]) continue;
      int shared = 0;
      std::map<int, int> local;
      for (int e : labels_[c]) {
        if (bset.count(e)) ++shared;
        ++local[e];
      }
      int width = static_cast<int>(boundary_.size()) - shared;
      for (const auto& [e, k] : local) {
        if (k == 1 && !bset.count(e)) ++width;
      }
      if (shared > best_shared || (shared == best_shared && width < best_width)) {
        best = static_cast<int>(c);
        best_shared = shared;
        best_width = width;
      }
    }
    return best;
  }

  // Vertex layout for one gluing step: old boundary positions 0..P-1, then
  // the four crossing slots P..P+3.
  struct StepGeometry {
    int P = 0;
    std::vector<int> glue;    // identified vertex or -1
    std::vector<int> newpos;  // position in the new boundary or -1
    std::vector<int> new_boundary;
  };

  StepGeometry geometry(const std::array<int, 4>& lab) const {
    StepGeometry g;
    g.P = static_cast<int>(boundary_.size());
    const int V = g.P + 4;
    g.glue.assign(static_cast<std::size_t>(V), -1);
    g.newpos.assign(static_cast<std::size_t>(V), -1);
    std::map<int, int> old_pos;
    for (int p = 0; p < g.P; ++p) old_pos[boundary_[p]] = p;
    for (int k = 0; k < 4; ++k) {
      auto it = old_pos.find(lab[k]);
      if (it != old_pos.end()) {
        g.glue[g.P + k] = it->second;
        g.glue[it->second] = g.P + k;
      } else {
        for (int k2 = 0; k2 < 4; ++k2) {
          if (k2 != k && lab[k2] == lab[k]) g.glue[g.P + k] = g.P + k2;
        }
      }
    }
    std::vector<std::pair<int, int>> fresh;  // (label, vertex)
    for (int v = 0; v < V; ++v) {
      if (g.glue[v] < 0) fresh.emplace_back(v < g.P ? boundary_[v] : lab[v - g.P], v);
    }
    std::sort(fresh.begin(), fresh.end());
    for (std::size_t k = 0; k < fresh.size(); ++k) {
      g.newpos[fresh[k].second] = static_cast<int>(k);
      g.new_boundary.push_back(fresh[k].first);
    }
    return g;
  }

  // Matching of the glued level and the number of closed loops it creates.
  struct Glued {
    Matching match;
    int loops = 0;
  };

  Glued glue_level(const StepGeometry& g, const Matching& a, int smoothing) const {
    const int V = g.P + 4;
    auto arc = [&](int v) { return v < g.P ? static_cast<int>(a[v]) : g.P + kSmoothing[smoothing][v - g.P]; };
    std::vector<char> seen(static_cast<std::size_t>(V), 0);
    Glued out;
    out.match.assign(g.new_boundary.size(), 0);
    for (int v = 0; v < V; ++v) {
      if (g.newpos[v] < 0 || seen[v]) continue;
      int cur = v;
      seen[cur] = 1;
      while (true) {
        const int w = arc(cur);
        seen[w] = 1;
        if (g.glue[w] < 0) {
          out.match[g.newpos[v]] = static_cast<std::uint8_t>(g.newpos[w]);
          out.match[g.newpos[w]] = static_cast<std::uint8_t>(g.newpos[v]);
          break;
        }
        cur = g.glue[w];
        seen[cur] = 1;
      }
    }
    for (int v = 0; v < V; ++v) {
      if (seen[v]) continue;
      ++out.loops;
      int cur = v;
      while (!seen[cur]) {
        seen[cur] = 1;
        const int w = arc(cur);
        seen[w] = 1;
        cur = g.glue[w];
      }
    }
    return out;
  }

  // Shape of f (x) h where f: A -> B on the old boundary and h: s -> t on the
  // slots is the identity (s == t) or the saddle.
  Shape tensor_shape(const StepGeometry& g, const Matching& a, const Matching& b, int s, int t) {
    const Cycles& ab = cached_cycles(a, b);
    // Slot discs.
    UnionFind suf(4);
    for (int k = 0; k < 4; ++k) {
      suf.unite(k, kSmoothing[s][k]);
      suf.unite(k, kSmoothing[t][k]);
    }
    std::array<int, 4> slot_cycle{};
    int n2 = 0;
    {
      std::array<int, 4> id{-1, -1, -1, -1};
      for (int k = 0; k < 4; ++k) {
        const int r = suf.find(k);
        if (id[r] < 0) id[r] = n2++;
        slot_cycle[k] = id[r];
      }
    }
    GlueInput in;
    in.n1 = ab.count;
    in.n2 = n2;
    auto node_of = [&](int v) { return v < g.P ? static_cast<int>(ab.of_pos[v]) : ab.count + slot_cycle[v - g.P]; };
    for (int v = 0; v < g.P + 4; ++v) {
      const int w = g.glue[v];
      if (w > v) in.glues.emplace_back(node_of(v), node_of(w));
    }

    // Result cycles over both levels.
    const int V = g.P + 4;
    UnionFind ruf(2 * V);
    for (int v = 0; v < V; ++v) {
      const int src_arc = v < g.P ? static_cast<int>(a[v]) : g.P + kSmoothing[s][v - g.P];
      const int tgt_arc = v < g.P ? static_cast<int>(b[v]) : g.P + kSmoothing[t][v - g.P];
      ruf.unite(v, src_arc);
      ruf.unite(V + v, V + tgt_arc);
      if (g.glue[v] >= 0) {
        ruf.unite(v, g.glue[v]);
        ruf.unite(V + v, V + g.glue[v]);
      } else {
        ruf.unite(v, V + v);
      }
    }
    // Order: boundary cycles by smallest new position, then source loops and
    // target loops by smallest vertex.
    std::map<int, int> root_slot;
    std::vector<std::pair<int, int>> boundary_roots;  // (min newpos, root)
    std::vector<std::pair<int, int>> src_loops;       // (min vertex, root)
    std::vector<std::pair<int, int>> tgt_loops;
    {
      std::map<int, int> min_newpos;
      std::map<int, int> min_src;
      std::map<int, int> min_tgt;
      std::map<int, bool> has_src;
      std::map<int, bool> has_tgt;
      for (int v = 0; v < 2 * V; ++v) {
        const int r = ruf.find(v);
        const int base = v % V;
        if (v < V) {
          if (!has_src[r] || base < min_src[r]) min_src[r] = base;
          has_src[r] = true;
        } else {
          if (!has_tgt[r] || base < min_tgt[r]) min_tgt[r] = base;
          has_tgt[r] = true;
        }
        if (g.newpos[base] >= 0) {
          auto it = min_newpos.find(r);
          if (it == min_newpos.end() || g.newpos[base] < it->second) min_newpos[r] = g.newpos[base];
        }
      }
      for (const auto& [r, p] : min_newpos) boundary_roots.emplace_back(p, r);
      for (const auto& [r, flag] : has_src) {
        if (!min_newpos.count(r) && !has_tgt[r]) src_loops.emplace_back(min_src[r], r);
      }
      for (const auto& [r, flag] : has_tgt) {
        if (!min_newpos.count(r) && !has_src[r]) tgt_loops.emplace_back(min_tgt[r], r);
      }
      std::sort(boundary_roots.begin(), boundary_roots.end());
      std::sort(src_loops.begin(), src_loops.end());
      std::sort(tgt_loops.begin(), tgt_loops.end());
    }
    std::vector<std::uint8_t> kind;
    std::vector<std::uint8_t> index;
    std::vector<int> roots;
    for (std::size_t k = 0; k < boundary_roots.size(); ++k) {
      roots.push_back(boundary_roots[k].second);
      kind.push_back(0);
      index.push_back(static_cast<std::uint8_t>(k));
    }
    for (std::size_t k = 0; k < src_loops.size(); ++k) {
      roots.push_back(src_loops[k].second);
      kind.push_back(1);
      index.push_back(static_cast<std::uint8_t>(k));
    }
    for (std::size_t k = 0; k < tgt_loops.size(); ++k) {
      roots.push_back(tgt_loops[k].second);
      kind.push_back(2);
      index.push_back(static_cast<std::uint8_t>(k));
    }
    if (roots.size() > 64) throw std::runtime_error("scan: too many result cycles");
    // A vertex on each result cycle gives its disc node.
    std::map<int, int> rep;
    for (int v = 0; v < 2 * V; ++v) rep.emplace(ruf.find(v), v % V);
    for (int r : roots) in.result_node.push_back(node_of(rep[r]));

    Shape shape = finish_shape(in);
    shape.kind = std::move(kind);
    shape.index = std::move(index);
    if (bp_label_ != 0) {
      for (int v = 0; v < V; ++v) {
        const int label = v < g.P ? boundary_[v] : labels_[current_][v - g.P];
        if (label != bp_label_ || g.newpos[v] < 0) continue;
        const int r = ruf.find(v);
        for (std::size_t k = 0; k < roots.size(); ++k) {
          if (roots[k] == r) shape.bp_bit = std::uint64_t{1} << k;
        }
      }
    }
    return shape;
  }

  const Cycles& cached_cycles(const Matching& a, const Matching& b) {
    auto key = std::make_pair(a, b);
    auto it = cycle_cache_.find(key);
    if (it != cycle_cache_.end()) return it->second;
    return cycle_cache_.emplace(std::move(key), cycles_of(a, b)).first->second;
  }

  const Cycles& cycles_by_id(std::uint32_t a, std::uint32_t b) {
    const std::uint64_t key = (std::uint64_t{a} << 32) | b;
    auto it = cycle_id_cache_.find(key);
    if (it != cycle_id_cache_.end()) return it->second;
    return cycle_id_cache_.emplace(key, cycles_of(matchings_[a], matchings_[b])).first->second;
  }

  // Shape of g o f for f: A -> B, g: B -> C on the current boundary.
  const Shape& compose_shape(std::uint32_t a, std::uint32_t b, std::uint32_t c) {
    const std::array<std::uint32_t, 3> key{a, b, c};
    auto it = compose_cache_.find(key);
    if (it != compose_cache_.end()) return it->second;
    const Cycles& ab = cycles_by_id(a, b);
    const Cycles& bc = cycles_by_id(b, c);
    const Cycles& ac = cycles_by_id(a, c);
    const Matching& mb = matchings_[b];
    GlueInput in;
    in.n1 = ab.count;
    in.n2 = bc.count;
    const int P = static_cast<int>(mb.size());
    for (int p = 0; p < P; ++p) {
      if (mb[p] > p) in.glues.emplace_back(ab.of_pos[p], ab.count + bc.of_pos[p]);
    }
    in.result_node.assign(static_cast<std::size_t>(ac.count), -1);
    for (int p = 0; p < P; ++p) {
      if (in.result_node[ac.of_pos[p]] < 0) in.result_node[ac.of_pos[p]] = ab.of_pos[p];
    }
    Shape s = finish_shape(in);
    if (bp_pos_ >= 0) s.bp_bit = std::uint64_t{1} << ac.of_pos[bp_pos_];
    return compose_cache_.emplace(key, std::move(s)).first->second;
  }

  void add_to(Morph& m, std::uint32_t mask, const V& v) {
    if (f_.is_zero(v)) return;
    auto it = std::lower_bound(m.begin(), m.end(), mask, [](const auto& e, std::uint32_t k) { return e.first < k; });
    if (it != m.end() && it->first == mask) {
      it->second = f_.add(it->second, v);
      if (f_.is_zero(it->second)) m.erase(it);
    } else {
      m.insert(it, {mask, v});
    }
  }

  V power_of_two(int e) const {
    V r = f_.one();
    const V two = f_.from_int(2);
    for (int k = 0; k < e; ++k) r = f_.mul(r, two);
    return r;
  }

  void add_entry(std::uint32_t a, std::uint32_t b, std::uint32_t mask, const V& v) {
    if (f_.is_zero(v)) return;
    auto& row = out_[a];
    auto it = row.find(b);
    if (it == row.end()) {
      row.emplace(b, Morph{{mask, v}});
      in_[b].insert(a);
      return;
    }
    add_to(it->second, mask, v);
    if (it->second.empty()) {
      row.erase(it);
      in_[b].erase(a);
    }
  }

  void add_crossing(int c) {
    current_ = c;
    const int m = mark_of_[c];
    std::vector<LocalObject> local;
    std::vector<LocalSaddle> saddles;
    if (m < 0) {
      local = {{0, 0, 0, -1}, {1, 1, 1, -1}};
      saddles = {{0, 1}};
    } else if (!marks_[m].with_change) {
      local = {{0, 0, 0, kTagSmoothing0}, {1, 1, 1, kTagSmoothing1}};
      saddles = {{0, 1}};
    } else {
      local = {{0, 0, 0, kTagSmoothing0}, {1, 1, 1, kTagSmoothing1}, {1, -1, -1, kTagChanged1}};
      saddles = {{0, 1}, {2, 0}};
    }
    const Crossing& lab = labels_[c];
    const StepGeometry g = geometry({lab[0], lab[1], lab[2], lab[3]});
    if (g.new_boundary.size() > 62) throw std::runtime_error("scan: tangle boundary too wide");

    // New objects.
    std::vector<Matching> new_matchings;
    std::map<Matching, std::uint32_t> new_ids;
    auto new_intern = [&](const Matching& mm) {
      auto it = new_ids.find(mm);
      if (it != new_ids.end()) return it->second;
      const auto id = static_cast<std::uint32_t>(new_matchings.size());
      new_matchings.push_back(mm);
      new_ids.emplace(mm, id);
      return id;
    };
    const std::size_t L = local.size();
    std::vector<Obj> objs;
    std::vector<std::uint32_t> base(objs_.size() * L, 0);
    std::vector<int> loops(objs_.size() * L, 0);
    for (std::size_t a = 0; a < objs_.size(); ++a) {
      if (!objs_[a].alive) continue;
      for (std::size_t l = 0; l < L; ++l) {
        const Glued gl = glue_level(g, matchings_[objs_[a].match], local[l].smoothing);
        const std::uint32_t mid = new_intern(gl.match);
        base[a * L + l] = static_cast<std::uint32_t>(objs.size());
        loops[a * L + l] = gl.loops;
        std::uint32_t tags = objs_[a].tags;
        if (local[l].tag >= 0) tags |= static_cast<std::uint32_t>(local[l].tag) << (2 * m);
        for (int labels = 0; labels < (1 << gl.loops); ++labels) {
          const int q = objs_[a].q + local[l].q + gl.loops - 2 * std::popcount(static_cast<unsigned>(labels));
          objs.push_back({objs_[a].h + local[l].h, q, tags, mid, true});
        }
      }
    }

    std::vector<std::map<std::uint32_t, Morph>> out(objs.size());
    std::vector<std::set<std::uint32_t>> in(objs.size());
    std::vector<std::uint64_t> results;
    std::map<std::tuple<std::uint32_t, std::uint32_t, int, int>, Shape> shapes;
    auto shape_for = [&](std::uint32_t ma, std::uint32_t mb, int s, int t) -> const Shape& {
      const auto key = std::make_tuple(ma, mb, s, t);
      auto it = shapes.find(key);
      if (it != shapes.end()) return it->second;
      return shapes.emplace(key, tensor_shape(g, matchings_[ma], matchings_[mb], s, t)).first->second;
    };
    const int P_new = static_cast<int>(g.new_boundary.size());
    auto emit = [&](const Shape& sh, std::uint32_t fmask, std::uint32_t hmask, const V& coef, std::uint32_t src_base,
                    std::uint32_t tgt_base) {
      const int twos = evaluate(sh, fmask, hmask, results);
      if (results.empty()) return;
      const V scaled = f_.mul(coef, power_of_two(twos));
      if (f_.is_zero(scaled)) return;
      for (std::uint64_t r : results) {
        std::uint32_t mask = 0;
        std::uint32_t src_labels = 0;
        std::uint32_t tgt_labels = 0;
        for (std::size_t k = 0; k < sh.kind.size(); ++k) {
          const bool dotted = (r >> k) & 1u;
          switch (sh.kind[k]) {
            case 0:
              if (dotted) mask |= std::uint32_t{1} << sh.index[k];
              break;
            case 1:
              if (!dotted) src_labels |= std::uint32_t{1} << sh.index[k];
              break;
            default:
              if (dotted) tgt_labels |= std::uint32_t{1} << sh.index[k];
              break;
          }
        }
        const std::uint32_t src = src_base + src_labels;
        const std::uint32_t tgt = tgt_base + tgt_labels;
        check_degree(objs[src], objs[tgt], new_matchings, mask, P_new);
        auto& row = out[src];
        auto it = row.find(tgt);
        if (it == row.end()) {
          row.emplace(tgt, Morph{{mask, scaled}});
          in[tgt].insert(src);
        } else {
          add_to(it->second, mask, scaled);
          if (it->second.empty()) {
            row.erase(it);
            in[tgt].erase(src);
          }
        }
      }
    };

    for (std::size_t a = 0; a < objs_.size(); ++a) {
      if (!objs_[a].alive) continue;
      // d_old (x) id
      for (const auto& [b, morph] : out_[a]) {
        for (std::size_t l = 0; l < L; ++l) {
          const Shape& sh = shape_for(objs_[a].match, objs_[b].match, local[l].smoothing, local[l].smoothing);
          for (const auto& [mask, v] : morph) emit(sh, mask, 0, v, base[a * L + l], base[b * L + l]);
        }
      }
      // (-1)^h id (x) saddle
      const V sign = (objs_[a].h % 2 == 0) ? f_.one() : f_.neg(f_.one());
      for (const auto& sd : saddles) {
        const Shape& sh = shape_for(objs_[a].match, objs_[a].match, local[sd.from].smoothing, local[sd.to].smoothing);
        emit(sh, 0, 0, sign, base[a * L + sd.from], base[a * L + sd.to]);
      }
    }

    objs_ = std::move(objs);
    out_ = std::move(out);
    in_ = std::move(in);
    matchings_ = std::move(new_matchings);
    matching_ids_.clear();
    for (std::size_t k = 0; k < matchings_.size(); ++k) matching_ids_.emplace(matchings_[k], static_cast<std::uint32_t>(k));
    boundary_ = g.new_boundary;
    bp_pos_ = -1;
    for (std::size_t p = 0; p < boundary_.size(); ++p) {
      if (boundary_[p] == bp_label_ && bp_label_ != 0) bp_pos_ = static_cast<int>(p);
    }
    cycle_cache_.clear();
    cycle_id_cache_.clear();
    compose_cache_.clear();
    stats_.peak_objects = std::max(stats_.peak_objects, objs_.size());
    stats_.peak_width = std::max(stats_.peak_width, boundary_.size());
  }

  // Disc-basis cobordisms have degree (#cycles - #points/2 - 2 #dots), which
  // must equal q(source) - q(target) for a grading-preserving map.
  void check_degree(const Obj& src, const Obj& tgt, const std::vector<Matching>& ms, std::uint32_t mask, int P) {
    const std::uint64_t key = (std::uint64_t{src.match} << 32) | tgt.match;
    auto it = degree_cache_.find(key);
    int cycles = 0;
    if (it != degree_cache_.end()) {
      cycles = it->second;
    } else {
      cycles = cycles_of(ms[src.match], ms[tgt.match]).count;
      degree_cache_.emplace(key, cycles);
    }
    const int deg = cycles - P / 2 - 2 * std::popcount(mask);
    if (deg != src.q - tgt.q || tgt.h != src.h + 1) throw std::logic_error("scan: inhomogeneous differential entry");
  }

  bool is_iso(std::uint32_t a, std::uint32_t b, const Morph& m) const {
    const Obj& x = objs_[a];
    const Obj& y = objs_[b];
    return x.tags == y.tags && x.match == y.match && x.q == y.q && m.size() == 1 && m[0].first == 0;
  }

  void simplify() {
    degree_cache_.clear();
    bool progress = true;
    while (progress) {
      progress = false;
      for (std::uint32_t a = 0; a < objs_.size(); ++a) {
        if (!objs_[a].alive) continue;
        std::uint32_t best = 0;
        std::size_t best_cost = SIZE_MAX;
        for (const auto& [b, m] : out_[a]) {
          if (!is_iso(a, b, m)) continue;
          const std::size_t cost = (in_[b].size() - 1) * (out_[a].size() - 1);
          if (cost < best_cost) {
            best_cost = cost;
            best = b;
          }
        }
        if (best_cost == SIZE_MAX) continue;
        cancel(a, best);
        progress = true;
      }
    }
  }

  void cancel(std::uint32_t a, std::uint32_t b) {
    const V c = out_[a].at(b)[0].second;
    const V factor = f_.neg(f_.inv(c));
    std::vector<std::pair<std::uint32_t, Morph>> sources;
    for (std::uint32_t s : in_[b]) {
      if (s != a) sources.emplace_back(s, out_[s].at(b));
    }
    std::vector<std::pair<std::uint32_t, Morph>> targets;
    for (const auto& [t, m] : out_[a]) {
      if (t != b) targets.emplace_back(t, m);
    }
    detach(a);
    detach(b);
    ++stats_.cancellations;
    const std::uint32_t mid = objs_[a].match;
    std::vector<std::uint64_t> results;
    for (const auto& [s, fm] : sources) {
      for (const auto& [t, gm] : targets) {
        const Shape& sh = compose_shape(objs_[s].match, mid, objs_[t].match);
        for (const auto& [fmask, fv] : fm) {
          for (const auto& [gmask, gv] : gm) {
            const int twos = evaluate(sh, fmask, gmask, results);
            if (results.empty()) continue;
            const V v = f_.mul(f_.mul(f_.mul(fv, gv), factor), power_of_two(twos));
            if (f_.is_zero(v)) continue;
            for (std::uint64_t r : results) add_entry(s, t, static_cast<std::uint32_t>(r), v);
          }
        }
      }
    }
  }

  void detach(std::uint32_t x) {
    for (const auto& [t, m] : out_[x]) in_[t].erase(x);
    out_[x].clear();
    for (std::uint32_t s : in_[x]) out_[s].erase(x);
    in_[x].clear();
    objs_[x].alive = false;
  }

  ScanComplex output() {
    ScanComplex sc;
    sc.field = f_.descriptor();
    sc.marks = marks_;
    sc.stats = stats_;
    std::vector<std::uint32_t> alive;
    for (std::uint32_t a = 0; a < objs_.size(); ++a) {
      if (objs_[a].alive) alive.push_back(a);
    }
    std::stable_sort(alive.begin(), alive.end(), [&](std::uint32_t x, std::uint32_t y) {
      const Obj& p = objs_[x];
      const Obj& r = objs_[y];
      return std::tie(p.h, p.q, p.tags) < std::tie(r.h, r.q, r.tags);
    });
    std::vector<std::int64_t> pos(objs_.size(), -1);
    for (std::size_t k = 0; k < alive.size(); ++k) pos[alive[k]] = static_cast<std::int64_t>(k);
    sc.gens.reserve(alive.size());
    sc.diff.resize(alive.size());
    for (std::size_t k = 0; k < alive.size(); ++k) {
      const Obj& o = objs_[alive[k]];
      sc.gens.push_back({o.h, o.q, o.tags});
      for (const auto& [t, m] : out_[alive[k]]) {
        if (m.size() != 1 || m[0].first != 0) throw std::logic_error("scan: closed-up morphism is not a scalar");
        sc.diff[k].emplace_back(static_cast<std::uint32_t>(pos[t]), f_.to_rational(m[0].second));
      }
      std::sort(sc.diff[k].begin(), sc.diff[k].end(), [](const auto& l, const auto& r) { return l.first < r.first; });
    }
    return sc;
  }

  const PlanarDiagram& d_;
  F f_;
  std::vector<ScanMark> marks_;
  std::vector<Crossing> labels_;
  std::vector<int> mark_of_;
  int bp_label_ = 0;
  int bp_pos_ = -1;
  int current_ = 0;

  std::vector<int> boundary_;
  std::vector<Matching> matchings_;
  std::map<Matching, std::uint32_t> matching_ids_;
  std::vector<Obj> objs_;
  std::vector<std::map<std::uint32_t, Morph>> out_;
  std::vector<std::set<std::uint32_t>> in_;

  std::map<std::pair<Matching, Matching>, Cycles> cycle_cache_;
  std::unordered_map<std::uint64_t, Cycles> cycle_id_cache_;
  std::unordered_map<std::uint64_t, int> degree_cache_;
  std::map<std::array<std::uint32_t, 3>, Shape> compose_cache_;
  ScanStats stats_;
};

}  // namespace

ScanComplex scan_complex(const PlanarDiagram& d, const Field& field, const std::vector<ScanMark>& marks) {
  validate(d);
  if (static_cast<int>(d.size()) > crossing_cap()) {
    throw CubeError("diagram has " + std::to_string(d.size()) + " crossings, above the cap of " +
                    std::to_string(crossing_cap()) + " (set KHSS_MAX_CROSSINGS to change it)");
  }
  if (marks.size() > 16) throw std::invalid_argument("at most 16 marked crossings");
  std::set<std::size_t> seen;
  for (const auto& m : marks) {
    if (m.crossing >= d.size()) {
      throw std::invalid_argument("marked crossing " + std::to_string(m.crossing) + " out of range");
    }
    if (!seen.insert(m.crossing).second) throw std::invalid_argument("crossing marked twice");
  }
  return visit_field(field, [&](auto f) { return Scanner<decltype(f)>(d, f, marks).run(); });
}

Bidegree scan_offset(const PlanarDiagram& d) { return {-d.n_minus(), d.n_plus() - 2 * d.n_minus() - 1}; }

ScanFace scan_face(const ScanComplex& sc, const FaceTags& allowed, Bidegree offset) {
  if (allowed.size() != sc.marks.size()) throw std::invalid_argument("face needs one tag set per mark");
  for (std::size_t m = 0; m < allowed.size(); ++m) {
    const std::uint8_t a = allowed[m];
    const std::uint8_t changed = 1u << kTagChanged1;
    if (a == 0 || a >= 7 || a == (kFaceSmoothing1 | changed)) {
      throw std::invalid_argument("tag set of mark " + std::to_string(m) + " is not a face");
    }
    if ((a & changed) && !sc.marks[m].with_change) {
      throw std::invalid_argument("mark " + std::to_string(m) + " has no changed-crossing copy");
    }
  }
  ScanFace out;
  out.complex.field = sc.field;
  std::vector<std::int64_t> pos(sc.gens.size(), -1);
  for (std::uint32_t g = 0; g < sc.gens.size(); ++g) {
    bool keep = true;
    for (std::size_t m = 0; m < allowed.size() && keep; ++m) keep = (allowed[m] >> sc.gens[g].tag(m)) & 1u;
    if (!keep) continue;
    pos[g] = static_cast<std::int64_t>(out.ids.size());
    out.ids.push_back(g);
    out.complex.gens.push_back({sc.gens[g].h + offset.i, sc.gens[g].q + offset.j});
  }
  out.complex.diff.resize(out.ids.size());
  for (std::size_t k = 0; k < out.ids.size(); ++k) {
    for (const auto& [t, v] : sc.diff[out.ids[k]]) {
      if (pos[t] >= 0) out.complex.diff[k].emplace_back(static_cast<std::uint32_t>(pos[t]), v);
    }
  }
  return out;
}

}  // namespace khss
