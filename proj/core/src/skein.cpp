#include "khss/skein.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace khss {

namespace {

std::uint8_t tags_of(FaceKind k) {
  switch (k) {
    case FaceKind::whole:
      return kFaceWhole;
    case FaceKind::smoothing0:
      return kFaceSmoothing0;
    case FaceKind::smoothing1:
      return kFaceSmoothing1;
    case FaceKind::changed:
      return kFaceChanged;
    case FaceKind::changed0:
      return 1u << kTagChanged1;
  }
  return 0;
}

// Position of a tag along the differential: changed copy, then 0, then 1.
int level_of(int tag) { return tag == kTagChanged1 ? 0 : tag == kTagSmoothing0 ? 1 : 2; }

bool down_closed(std::uint8_t sub, std::uint8_t in) {
  for (int t = 0; t < 3; ++t) {
    if (!((sub >> t) & 1u)) continue;
    for (int u = 0; u < 3; ++u) {
      if (((in >> u) & 1u) && !((sub >> u) & 1u) && level_of(u) < level_of(t)) return false;
    }
  }
  return true;
}

bool up_closed(std::uint8_t sub, std::uint8_t in) {
  for (int t = 0; t < 3; ++t) {
    if (!((sub >> t) & 1u)) continue;
    for (int u = 0; u < 3; ++u) {
      if (((in >> u) & 1u) && !((sub >> u) & 1u) && level_of(u) > level_of(t)) return false;
    }
  }
  return true;
}

Bidegree base_offset(const PlanarDiagram& d) { return scan_offset(d); }

}  // namespace

std::string to_string(FaceKind k) {
  switch (k) {
    case FaceKind::whole:
      return "whole";
    case FaceKind::smoothing0:
      return "smoothing0";
    case FaceKind::smoothing1:
      return "smoothing1";
    case FaceKind::changed:
      return "changed";
    case FaceKind::changed0:
      return "changed0";
  }
  return "?";
}

FaceKind parse_face_kind(const std::string& text) {
  for (FaceKind k : {FaceKind::whole, FaceKind::smoothing0, FaceKind::smoothing1, FaceKind::changed, FaceKind::changed0}) {
    if (to_string(k) == text) return k;
  }
  throw SkeinError("unknown face kind '" + text + "'");
}

MarkedScan::MarkedScan(PlanarDiagram d, std::vector<ScanMark> marks, Field field)
    : d_(std::move(d)), marks_(std::move(marks)), field_(field), scan_(scan_complex(d_, field_, marks_)) {}

PlanarDiagram MarkedScan::face_diagram(const FaceSpec& face) const {
  if (face.size() != marks_.size()) throw SkeinError("face needs one kind per mark");
  PlanarDiagram out = d_;
  for (std::size_t m = 0; m < marks_.size(); ++m) {
    if (face[m] == FaceKind::changed) out = change_crossing(out, marks_[m].crossing);
  }
  // Resolve from the highest crossing index down so earlier indices stay valid.
  std::vector<std::size_t> order(marks_.size());
  for (std::size_t m = 0; m < order.size(); ++m) order[m] = m;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return marks_[a].crossing > marks_[b].crossing; });
  for (std::size_t m : order) {
    switch (face[m]) {
      case FaceKind::smoothing0:
        out = resolve_crossing(out, marks_[m].crossing, 0);
        break;
      case FaceKind::smoothing1:
      case FaceKind::changed0:
        out = resolve_crossing(out, marks_[m].crossing, 1);
        break;
      default:
        break;
    }
  }
  return out;
}

Bidegree MarkedScan::face_offset(const FaceSpec& face) const {
  Bidegree off = base_offset(face_diagram(face));
  for (FaceKind k : face) {
    if (k == FaceKind::smoothing1) {
      off.i -= 1;
      off.j -= 1;
    } else if (k == FaceKind::changed || k == FaceKind::changed0) {
      off.i += 1;
      off.j += 1;
    }
  }
  return off;
}

std::string MarkedScan::face_key(const FaceSpec& face) const {
  std::ostringstream os;
  os << fingerprint(d_) << " " << field_.name() << " [";
  for (std::size_t m = 0; m < marks_.size(); ++m) {
    if (m) os << ",";
    os << marks_[m].crossing << (marks_[m].with_change ? "c" : "") << ":" << to_string(face[m]);
  }
  os << "]";
  return os.str();
}

const MarkedScan::Face& MarkedScan::face(const FaceSpec& spec) const {
  if (spec.size() != marks_.size()) throw SkeinError("face needs one kind per mark");
  std::vector<int> key;
  FaceTags tags;
  for (FaceKind k : spec) {
    key.push_back(static_cast<int>(k));
    tags.push_back(tags_of(k));
  }
  auto it = faces_.find(key);
  if (it != faces_.end()) return it->second;
  Face f;
  try {
    f.face = scan_face(scan_, tags, face_offset(spec));
  } catch (const std::invalid_argument& e) {
    throw SkeinError(e.what());
  }
  f.model = std::make_unique<HomologyModel>(f.face.complex, face_key(spec));
  return faces_.emplace(key, std::move(f)).first->second;
}

const HomologyModel& MarkedScan::model(const FaceSpec& spec) const { return *face(spec).model; }

HomologyMap MarkedScan::face_map(const FaceSpec& from, const FaceSpec& to) const {
  if (from.size() != marks_.size() || to.size() != marks_.size()) throw SkeinError("face needs one kind per mark");
  for (std::size_t m = 0; m < marks_.size(); ++m) {
    const std::uint8_t a = tags_of(from[m]);
    const std::uint8_t b = tags_of(to[m]);
    const std::uint8_t shared = a & b;
    if (shared == 0 || !down_closed(shared, a) || !up_closed(shared, b)) {
      throw SkeinError("no skein map from face " + to_string(from[m]) + " to " + to_string(to[m]) + " at mark " +
                       std::to_string(m));
    }
  }
  const Face& src = face(from);
  const Face& tgt = face(to);
  std::map<std::uint32_t, std::uint32_t> position;
  for (std::uint32_t k = 0; k < tgt.face.ids.size(); ++k) position.emplace(tgt.face.ids[k], k);
  ChainMap f(src.face.ids.size());
  for (std::uint32_t k = 0; k < src.face.ids.size(); ++k) {
    auto it = position.find(src.face.ids[k]);
    if (it != position.end()) f[k].emplace_back(it->second, Rational(1));
  }
  const Bidegree a = face_offset(from);
  const Bidegree b = face_offset(to);
  return induced_map(*src.model, *tgt.model, f, {b.i - a.i, b.j - a.j});
}

HomologyMap MarkedScan::connecting_map(std::size_t mark, const FaceSpec& rest) const {
  if (mark >= marks_.size()) throw SkeinError("mark index out of range");
  FaceSpec from = rest;
  FaceSpec to = rest;
  from[mark] = FaceKind::smoothing0;
  to[mark] = FaceKind::smoothing1;
  const Face& src = face(from);
  const Face& tgt = face(to);
  std::map<std::uint32_t, std::uint32_t> position;
  for (std::uint32_t k = 0; k < tgt.face.ids.size(); ++k) position.emplace(tgt.face.ids[k], k);
  ChainMap f(src.face.ids.size());
  for (std::uint32_t k = 0; k < src.face.ids.size(); ++k) {
    for (const auto& [t, v] : scan_.diff[src.face.ids[k]]) {
      auto it = position.find(t);
      if (it != position.end()) f[k].emplace_back(it->second, v);
    }
    std::sort(f[k].begin(), f[k].end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  }
  const Bidegree a = face_offset(from);
  const Bidegree b = face_offset(to);
  return induced_map(*src.model, *tgt.model, f, {b.i - a.i + 1, b.j - a.j});
}

SkeinTriple skein_triple(const PlanarDiagram& d, std::size_t crossing) {
  if (crossing >= d.size()) {
    throw std::out_of_range("crossing " + std::to_string(crossing) + " out of range for a " + std::to_string(d.size()) +
                            "-crossing diagram");
  }
  SkeinTriple t;
  t.diagram = d;
  t.crossing = crossing;
  t.d0 = resolve_crossing(d, crossing, 0);
  t.d1 = resolve_crossing(d, crossing, 1);
  const Bidegree b = base_offset(d);
  const Bidegree b0 = base_offset(t.d0);
  const Bidegree b1 = base_offset(t.d1);
  // A 1-smoothing generator at raw (h, q) sits at raw (h - 1, q - 1) in D1.
  t.include_shift = {b.i - b1.i + 1, b.j - b1.j + 1};
  t.project_shift = {b0.i - b.i, b0.j - b.j};
  t.connecting_shift = {b1.i - b0.i, b1.j - b0.j - 1};
  return t;
}

std::vector<std::string> exactness_at(const HomologyMap& f, const HomologyMap& g, const DimTable& b) {
  std::vector<std::string> out;
  std::map<std::pair<int, int>, std::size_t> image_rank;
  for (const auto& [cell, m] : f.blocks) image_rank[{cell.first + f.shift.i, cell.second + f.shift.j}] += matrix_rank(m);
  for (const auto& [cell, m] : g.blocks) {
    auto it = f.blocks.find({cell.first - f.shift.i, cell.second - f.shift.j});
    if (it != f.blocks.end() && !compose(m, it->second).is_zero()) {
      out.push_back("composite is nonzero at (" + std::to_string(cell.first) + "," + std::to_string(cell.second) + ")");
    }
  }
  std::set<std::pair<int, int>> cells;
  for (const auto& [cell, d] : b.cells()) cells.insert(cell);
  for (const auto& [cell, r] : image_rank) cells.insert(cell);
  for (const auto& cell : cells) {
    const std::size_t in = image_rank.count(cell) ? image_rank[cell] : 0;
    const std::size_t outr = g.rank_at(cell.first, cell.second);
    const std::size_t dim = b.dim(cell.first, cell.second);
    if (in + outr != dim) {
      out.push_back("rank " + std::to_string(in) + " + " + std::to_string(outr) + " != dim " + std::to_string(dim) + " at (" +
                    std::to_string(cell.first) + "," + std::to_string(cell.second) + ")");
    }
  }
  return out;
}

SkeinMaps les_homology_maps(const SkeinTriple& t, const Field& field) {
  MarkedScan scan(t.diagram, {{t.crossing, false}}, field);
  SkeinMaps out;
  out.table = scan.model({FaceKind::whole}).table();
  out.table0 = scan.model({FaceKind::smoothing0}).table();
  out.table1 = scan.model({FaceKind::smoothing1}).table();
  out.include = scan.face_map({FaceKind::smoothing1}, {FaceKind::whole});
  out.project = scan.face_map({FaceKind::whole}, {FaceKind::smoothing0});
  out.connecting = scan.connecting_map(0, {FaceKind::whole});
  auto check_shift = [&](const HomologyMap& m, Bidegree s, const char* name) {
    if (m.shift != s) out.exactness_failures.push_back(std::string(name) + " map has an unexpected bidegree");
  };
  check_shift(out.include, t.include_shift, "inclusion");
  check_shift(out.project, t.project_shift, "projection");
  check_shift(out.connecting, t.connecting_shift, "connecting");
  for (auto& s : exactness_at(out.include, out.project, out.table)) out.exactness_failures.push_back("at D: " + s);
  for (auto& s : exactness_at(out.project, out.connecting, out.table0)) out.exactness_failures.push_back("at D0: " + s);
  for (auto& s : exactness_at(out.connecting, out.include, out.table1)) out.exactness_failures.push_back("at D1: " + s);
  return out;
}

bool cone_rank_check(long rank_a, long rank_b, long rank_cone, long rank_map) {
  return rank_cone == rank_a + rank_b - 2 * rank_map;
}

Bidegree cobordism_order_bound(const CobordismDescriptor& c) {
  if (c.self_intersection % 2 != 0) throw SkeinError("odd self-intersection gives a half-integer order bound");
  return {c.self_intersection / 2, c.euler_characteristic + 3 * c.self_intersection / 2};
}

}  // namespace khss
