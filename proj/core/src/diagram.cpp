#include "khss/diagram.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace khss {
namespace {

struct Occ {
  int x = -1;
  int s = -1;
  friend bool operator==(const Occ&, const Occ&) = default;
};

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(static_cast<std::size_t>(n)) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int a) {
    while (parent_[a] != a) {
      parent_[a] = parent_[parent_[a]];
      a = parent_[a];
    }
    return a;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<int> parent_;
};

std::vector<std::array<Occ, 2>> occurrences(const std::vector<Crossing>& t) {
  const int n_edges = 2 * static_cast<int>(t.size());
  std::vector<std::array<Occ, 2>> occ(static_cast<std::size_t>(n_edges) + 1);
  std::vector<int> count(static_cast<std::size_t>(n_edges) + 1, 0);
  for (int x = 0; x < static_cast<int>(t.size()); ++x) {
    for (int s = 0; s < 4; ++s) {
      const int e = t[x][s];
      if (e < 1 || e > n_edges) throw DiagramError("edge label " + std::to_string(e) + " outside 1.." + std::to_string(n_edges));
      if (count[e] >= 2) throw DiagramError("edge " + std::to_string(e) + " appears more than twice");
      occ[e][count[e]++] = {x, s};
    }
  }
  for (int e = 1; e <= n_edges; ++e) {
    if (count[e] != 2) throw DiagramError("edge " + std::to_string(e) + " appears " + std::to_string(count[e]) + " time(s)");
  }
  return occ;
}

Occ other_end(const std::array<Occ, 2>& o, Occ me) { return o[0] == me ? o[1] : o[0]; }

struct Oriented {
  std::vector<Crossing> crossings;
  std::vector<int> signs;
  std::vector<int> rotation;  // how far each input tuple was rotated
};

// Input tuples have the under-strand on positions 0 and 2 (direction
// unknown). pref(e) proposes the incoming occurrence for the seed edge of a
// component. Output tuples start at the incoming under-strand.
template <class Pref>
Oriented orient(const std::vector<Crossing>& t, Pref pref) {
  const auto occ = occurrences(t);
  const int n_edges = 2 * static_cast<int>(t.size());
  std::vector<Occ> head(static_cast<std::size_t>(n_edges) + 1);
  for (int e = 1; e <= n_edges; ++e) {
    if (head[e].x >= 0) continue;
    Occ h = pref(e, occ[e]);
    int cur = e;
    while (head[cur].x < 0) {
      head[cur] = h;
      const Occ tail{h.x, (h.s + 2) % 4};
      const int next = t[h.x][tail.s];
      h = other_end(occ[next], tail);
      cur = next;
    }
  }
  Oriented out;
  for (int x = 0; x < static_cast<int>(t.size()); ++x) {
    const bool in0 = head[t[x][0]] == Occ{x, 0};
    const bool in2 = head[t[x][2]] == Occ{x, 2};
    const bool in1 = head[t[x][1]] == Occ{x, 1};
    const bool in3 = head[t[x][3]] == Occ{x, 3};
    if (in0 == in2 || in1 == in3) throw DiagramError("inconsistent strand orientation at crossing " + std::to_string(x));
    const int u = in0 ? 0 : 2;
    out.crossings.push_back({t[x][u], t[x][(u + 1) % 4], t[x][(u + 2) % 4], t[x][(u + 3) % 4]});
    const bool d_in = (u == 0) ? in3 : in1;
    out.signs.push_back(d_in ? 1 : -1);
    out.rotation.push_back(u);
  }
  return out;
}

// A drawn diagram before edge labelling. Slots are counterclockwise
// NE=0, NW=1, SW=2, SE=3; strands run NE-SW and NW-SE.
struct Sketch {
  struct Port {
    int x = -1;
    int s = -1;
  };
  std::vector<char> over_ne_sw;
  std::vector<std::array<Port, 4>> link;
  int free_loops = 0;

  int add_node(bool ne_sw_over) {
    over_ne_sw.push_back(ne_sw_over ? 1 : 0);
    link.push_back({});
    return static_cast<int>(link.size()) - 1;
  }
  void connect(Port a, Port b) {
    link[a.x][a.s] = b;
    link[b.x][b.s] = a;
  }
};

PlanarDiagram from_sketch(const Sketch& sk) {
  const int n = static_cast<int>(sk.link.size());
  if (n == 0) {
    PlanarDiagram d;
    d.free_loops = sk.free_loops;
    return d;
  }
  std::vector<std::array<int, 4>> edge_at(static_cast<std::size_t>(n), {0, 0, 0, 0});
  std::vector<std::array<char, 2>> visited(static_cast<std::size_t>(n), {0, 0});
  std::vector<Occ> head_raw(static_cast<std::size_t>(2 * n) + 1);
  int label = 0;
  for (int x0 = 0; x0 < n; ++x0) {
    for (int s0 : {0, 1}) {
      if (visited[x0][s0 % 2]) continue;
      int x = x0;
      int s = s0;
      while (!visited[x][s % 2]) {
        visited[x][s % 2] = 1;
        const int out = (s + 2) % 4;
        const Sketch::Port to = sk.link[x][out];
        if (to.x < 0) throw DiagramError("unconnected port in diagram sketch");
        ++label;
        edge_at[x][out] = label;
        edge_at[to.x][to.s] = label;
        head_raw[label] = {to.x, to.s};
        x = to.x;
        s = to.s;
      }
    }
  }
  std::vector<Crossing> tuples(static_cast<std::size_t>(n));
  std::vector<int> shift(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) {
    shift[x] = sk.over_ne_sw[x] ? 1 : 0;
    for (int k = 0; k < 4; ++k) tuples[x][k] = edge_at[x][(k + shift[x]) % 4];
  }
  auto pref = [&](int e, const std::array<Occ, 2>&) {
    const Occ h = head_raw[e];
    return Occ{h.x, (h.s - shift[h.x] + 4) % 4};
  };
  Oriented o = orient(tuples, pref);
  PlanarDiagram d;
  d.crossings = std::move(o.crossings);
  d.signs = std::move(o.signs);
  d.free_loops = sk.free_loops;
  d.basepoint_edge = d.crossings.front()[0];
  return d;
}

Crossing mirror_crossing(const Crossing& c, int sign) {
  if (sign > 0) return {c[3], c[0], c[1], c[2]};
  return {c[1], c[2], c[3], c[0]};
}

}  // namespace

int PlanarDiagram::n_plus() const {
  return static_cast<int>(std::count(signs.begin(), signs.end(), 1));
}

int PlanarDiagram::n_minus() const {
  return static_cast<int>(std::count(signs.begin(), signs.end(), -1));
}

PlanarDiagram unknot_diagram() {
  PlanarDiagram d;
  d.free_loops = 1;
  return d;
}

PlanarDiagram diagram_from_pd(const std::vector<Crossing>& input, int free_loops) {
  if (free_loops < 0) throw DiagramError("negative free loop count");
  if (input.empty()) {
    PlanarDiagram d;
    d.free_loops = std::max(free_loops, 1);
    return d;
  }
  std::map<int, int> count;
  for (const auto& c : input) {
    for (int e : c) {
      if (e < 1) throw DiagramError("edge labels must be positive, got " + std::to_string(e));
      ++count[e];
    }
  }
  std::map<int, int> relabel;
  for (const auto& [e, k] : count) {
    if (k != 2) throw DiagramError("edge " + std::to_string(e) + " appears " + std::to_string(k) + " time(s), expected 2");
    const int id = static_cast<int>(relabel.size()) + 1;
    relabel[e] = id;
  }
  std::vector<Crossing> t;
  t.reserve(input.size());
  for (const auto& c : input) t.push_back({relabel[c[0]], relabel[c[1]], relabel[c[2]], relabel[c[3]]});

  auto pref = [&](int, const std::array<Occ, 2>& occ) {
    for (const Occ& o : occ) {
      if (o.s == 0) return o;
    }
    for (const Occ& o : occ) {
      if (o.s == 2) return other_end(occ, o);
    }
    return occ[0];
  };
  Oriented o = orient(t, pref);
  for (std::size_t x = 0; x < o.rotation.size(); ++x) {
    if (o.rotation[x] != 0) {
      throw DiagramError("crossing " + std::to_string(x + 1) + " does not start at its incoming under-strand");
    }
  }
  PlanarDiagram d;
  d.crossings = std::move(o.crossings);
  d.signs = std::move(o.signs);
  d.free_loops = free_loops;
  d.basepoint_edge = d.crossings.front()[0];
  return d;
}

PlanarDiagram braid_closure(const std::vector<int>& word, int strands) {
  int needed = 1;
  for (int k : word) {
    if (k == 0) throw DiagramError("braid generator 0 is not allowed");
    needed = std::max(needed, std::abs(k) + 1);
  }
  if (strands == 0) strands = needed;
  if (strands < needed) throw DiagramError("braid word needs " + std::to_string(needed) + " strands");
  Sketch sk;
  std::vector<Sketch::Port> open(static_cast<std::size_t>(strands));
  std::vector<Sketch::Port> top(static_cast<std::size_t>(strands));
  auto attach = [&](int p, Sketch::Port port) {
    if (open[p].x < 0) {
      top[p] = port;
    } else {
      sk.connect(open[p], port);
    }
  };
  for (int k : word) {
    const int i = std::abs(k) - 1;
    const int x = sk.add_node(k > 0);
    attach(i, {x, 1});
    attach(i + 1, {x, 0});
    open[i] = {x, 2};
    open[i + 1] = {x, 3};
  }
  for (int p = 0; p < strands; ++p) {
    if (top[p].x < 0) {
      ++sk.free_loops;
    } else {
      sk.connect(open[p], top[p]);
    }
  }
  return from_sketch(sk);
}

PlanarDiagram torus_diagram(int p, int q) {
  if (p < 2 || q < 2) throw DiagramError("torus(p,q) needs p,q >= 2");
  std::vector<int> word;
  for (int r = 0; r < q; ++r) {
    for (int k = 1; k < p; ++k) word.push_back(k);
  }
  return braid_closure(word, p);
}

PlanarDiagram pretzel_diagram(const std::vector<int>& twists) {
  if (twists.size() < 2) throw DiagramError("pretzel needs at least two twist regions");
  for (int t : twists) {
    if (t == 0) throw DiagramError("pretzel twist parameters must be nonzero");
  }
  Sketch sk;
  struct Region {
    Sketch::Port tl, tr, bl, br;
  };
  std::vector<Region> regions;
  for (int t : twists) {
    const int m = std::abs(t);
    int prev = -1;
    Region reg;
    for (int k = 0; k < m; ++k) {
      const int x = sk.add_node(t > 0);
      if (prev < 0) {
        reg.tl = {x, 1};
        reg.tr = {x, 0};
      } else {
        sk.connect({prev, 2}, {x, 1});
        sk.connect({prev, 3}, {x, 0});
      }
      prev = x;
    }
    reg.bl = {prev, 2};
    reg.br = {prev, 3};
    regions.push_back(reg);
  }
  const std::size_t m = regions.size();
  for (std::size_t k = 0; k + 1 < m; ++k) {
    sk.connect(regions[k].tr, regions[k + 1].tl);
    sk.connect(regions[k].br, regions[k + 1].bl);
  }
  sk.connect(regions[0].tl, regions[m - 1].tr);
  sk.connect(regions[0].bl, regions[m - 1].br);
  return from_sketch(sk);
}

PlanarDiagram mirror(const PlanarDiagram& d) {
  PlanarDiagram m = d;
  for (std::size_t k = 0; k < d.size(); ++k) {
    m.crossings[k] = mirror_crossing(d.crossings[k], d.signs[k]);
    m.signs[k] = -d.signs[k];
  }
  return m;
}

PlanarDiagram change_crossing(const PlanarDiagram& d, std::size_t c) {
  if (c >= d.size()) throw DiagramError("crossing index " + std::to_string(c) + " out of range");
  PlanarDiagram m = d;
  m.crossings[c] = mirror_crossing(d.crossings[c], d.signs[c]);
  m.signs[c] = -d.signs[c];
  return m;
}

Resolution resolve_crossing_with_map(const PlanarDiagram& d, std::size_t c, int r) {
  if (c >= d.size()) {
    throw DiagramError("crossing index " + std::to_string(c) + " out of range (diagram has " + std::to_string(d.size()) + ")");
  }
  if (r != 0 && r != 1) throw DiagramError("resolution must be 0 or 1");
  const int n_edges = d.n_edges();
  const Crossing& x = d.crossings[c];
  UnionFind uf(n_edges + 1);
  if (r == 0) {
    uf.unite(x[0], x[1]);
    uf.unite(x[2], x[3]);
  } else {
    uf.unite(x[0], x[3]);
    uf.unite(x[1], x[2]);
  }

  // Old heads, for carrying orientation over to the new diagram.
  std::vector<Occ> old_head(static_cast<std::size_t>(n_edges) + 1);
  for (int k = 0; k < static_cast<int>(d.size()); ++k) {
    const Crossing& t = d.crossings[k];
    old_head[t[0]] = {k, 0};
    old_head[t[d.signs[k] > 0 ? 3 : 1]] = {k, d.signs[k] > 0 ? 3 : 1};
  }

  std::vector<char> used(static_cast<std::size_t>(n_edges) + 1, 0);
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (k == c) continue;
    for (int e : d.crossings[k]) used[uf.find(e)] = 1;
  }
  // Classes are numbered by their smallest old edge, which is the root.
  std::vector<int> new_label(static_cast<std::size_t>(n_edges) + 1, 0);
  int next = 0;
  int loops = d.free_loops;
  for (int e = 1; e <= n_edges; ++e) {
    if (uf.find(e) != e) continue;
    new_label[e] = used[e] ? ++next : -(++loops);
  }
  Resolution res;
  res.edge_map.assign(static_cast<std::size_t>(n_edges) + 1, 0);
  for (int e = 1; e <= n_edges; ++e) res.edge_map[e] = new_label[uf.find(e)];

  std::vector<Crossing> t;
  std::vector<int> old_index;
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (k == c) continue;
    const Crossing& o = d.crossings[k];
    t.push_back({res.edge_map[o[0]], res.edge_map[o[1]], res.edge_map[o[2]], res.edge_map[o[3]]});
    old_index.push_back(static_cast<int>(k));
  }
  std::vector<int> new_index(d.size(), -1);
  for (std::size_t k = 0; k < old_index.size(); ++k) new_index[old_index[k]] = static_cast<int>(k);

  PlanarDiagram out;
  out.free_loops = loops;

  if (!t.empty()) {
    auto pref = [&](int e, const std::array<Occ, 2>& occ) {
      for (int o = 1; o <= n_edges; ++o) {
        if (res.edge_map[o] != e) continue;
        const Occ h = old_head[o];
        if (h.x != static_cast<int>(c)) return Occ{new_index[h.x], h.s};
        // old head sits on the removed crossing: use the tail instead
        for (int k = 0; k < static_cast<int>(d.size()); ++k) {
          if (k == static_cast<int>(c)) continue;
          for (int s = 0; s < 4; ++s) {
            if (d.crossings[k][s] == o && !(old_head[o] == Occ{k, s})) {
              return other_end(occ, Occ{new_index[k], s});
            }
          }
        }
      }
      return occ[0];
    };
    Oriented o = orient(t, pref);
    out.crossings = std::move(o.crossings);
    out.signs = std::move(o.signs);
  }

  res.loop_map.resize(static_cast<std::size_t>(d.free_loops));
  std::iota(res.loop_map.begin(), res.loop_map.end(), 0);
  if (d.basepoint_edge == 0) {
    out.basepoint_edge = 0;
  } else {
    const int b = res.edge_map[d.basepoint_edge];
    if (b > 0) {
      out.basepoint_edge = b;
    } else {
      // The basepoint now lies on a free loop; make that loop the first one.
      const int loop = -b - 1;
      out.basepoint_edge = 0;
      if (loop != 0) {
        for (int& m : res.edge_map) {
          if (m == -1) {
            m = -(loop + 1);
          } else if (m == -(loop + 1)) {
            m = -1;
          }
        }
        for (int& m : res.loop_map) {
          if (m == 0) m = loop;
        }
      }
    }
  }
  res.diagram = std::move(out);
  return res;
}

PlanarDiagram resolve_crossing(const PlanarDiagram& d, std::size_t c, int r) {
  return resolve_crossing_with_map(d, c, r).diagram;
}

int component_count(const PlanarDiagram& d) {
  const int n_edges = d.n_edges();
  UnionFind uf(n_edges + 1);
  for (const auto& x : d.crossings) {
    uf.unite(x[0], x[2]);
    uf.unite(x[1], x[3]);
  }
  int count = d.free_loops;
  for (int e = 1; e <= n_edges; ++e) {
    if (uf.find(e) == e) ++count;
  }
  return count;
}

DiagramStats diagram_stats(const PlanarDiagram& d) {
  return {component_count(d), d.n_plus(), d.n_minus(), d.writhe()};
}

int vertex_circle_count(const PlanarDiagram& d, const std::vector<int>& v) {
  if (v.size() != d.size()) {
    throw DiagramError("smoothing vector has length " + std::to_string(v.size()) + ", diagram has " +
                       std::to_string(d.size()) + " crossings");
  }
  const int n_edges = d.n_edges();
  UnionFind uf(n_edges + 1);
  for (std::size_t k = 0; k < d.size(); ++k) {
    const auto& x = d.crossings[k];
    if (v[k] == 0) {
      uf.unite(x[0], x[1]);
      uf.unite(x[2], x[3]);
    } else {
      uf.unite(x[0], x[3]);
      uf.unite(x[1], x[2]);
    }
  }
  int count = d.free_loops;
  for (int e = 1; e <= n_edges; ++e) {
    if (uf.find(e) == e) ++count;
  }
  return count;
}

void validate(const PlanarDiagram& d) {
  if (d.signs.size() != d.crossings.size()) throw DiagramError("sign list length differs from crossing count");
  if (d.crossings.empty()) {
    if (d.free_loops < 1) throw DiagramError("empty diagram without components");
    if (d.basepoint_edge != 0) throw DiagramError("basepoint edge on a crossingless diagram");
    return;
  }
  (void)occurrences(d.crossings);
  // The over-strand enters at slot 3 of a positive crossing and at slot 1 of
  // a negative one, which fixes the direction of over-only components.
  auto pref = [&](int, const std::array<Occ, 2>& occ) {
    for (const Occ& o : occ) {
      if (o.s == 0) return o;
    }
    for (const Occ& o : occ) {
      if (o.s == 2) return other_end(occ, o);
    }
    for (const Occ& o : occ) {
      if (o.s == (d.signs[o.x] > 0 ? 3 : 1)) return o;
    }
    return occ[0];
  };
  Oriented o = orient(d.crossings, pref);
  for (std::size_t x = 0; x < d.size(); ++x) {
    if (o.rotation[x] != 0) throw DiagramError("crossing " + std::to_string(x) + " does not start at its incoming under-strand");
    if (o.signs[x] != d.signs[x]) throw DiagramError("recorded sign of crossing " + std::to_string(x) + " is wrong");
  }
  if (d.basepoint_edge < 0 || d.basepoint_edge > d.n_edges()) throw DiagramError("basepoint edge out of range");
  if (d.basepoint_edge == 0 && d.free_loops < 1) throw DiagramError("basepoint on a free loop, but there is none");
}

std::string to_pd_string(const PlanarDiagram& d) {
  std::ostringstream os;
  os << "pd([";
  for (std::size_t k = 0; k < d.size(); ++k) {
    const auto& c = d.crossings[k];
    if (k) os << ",";
    os << "[" << c[0] << "," << c[1] << "," << c[2] << "," << c[3] << "]";
  }
  os << "])";
  return os.str();
}

std::string fingerprint(const PlanarDiagram& d) {
  std::ostringstream os;
  os << to_pd_string(d) << ";s=";
  for (int s : d.signs) os << (s > 0 ? '+' : '-');
  os << ";b=" << d.basepoint_edge << ";l=" << d.free_loops;
  return os.str();
}

}  // namespace khss
