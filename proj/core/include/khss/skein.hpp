// Skein triples, the maps of the unoriented skein exact sequence, composites
// of 1-handle maps, and cobordism degree bookkeeping.
//
// All maps come from one marked scan of a base diagram. At a marked crossing
// the complex is the cone of the saddle from the 0-smoothing face to the
// 1-smoothing face, so the 1-smoothing face is a subcomplex (inclusion), the
// 0-smoothing face a quotient (projection), and the cross-face block is the
// connecting map. A mark with a changed-crossing copy also carries the
// complex of the diagram with that crossing changed.
#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "khss/complex.hpp"
#include "khss/diagram.hpp"
#include "khss/homology.hpp"
#include "khss/scan.hpp"

namespace khss {

class SkeinError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class FaceKind {
  whole,       // the diagram itself
  smoothing0,  // crossing replaced by its 0-smoothing
  smoothing1,  // crossing replaced by its 1-smoothing
  changed,     // crossing changed (needs ScanMark::with_change)
  changed0,    // 0-smoothing of the changed crossing, i.e. the 1-smoothing
};

std::string to_string(FaceKind k);
FaceKind parse_face_kind(const std::string& text);

using FaceSpec = std::vector<FaceKind>;  // one per mark

class MarkedScan {
 public:
  MarkedScan(PlanarDiagram d, std::vector<ScanMark> marks, Field field);

  [[nodiscard]] const PlanarDiagram& diagram() const { return d_; }
  [[nodiscard]] const std::vector<ScanMark>& marks() const { return marks_; }
  [[nodiscard]] const Field& field() const { return field_; }
  [[nodiscard]] const ScanComplex& scan() const { return scan_; }

  // The diagram a face computes, oriented by its own PD conventions.
  [[nodiscard]] PlanarDiagram face_diagram(const FaceSpec& face) const;
  // (i, j) offset from raw scan gradings to the face diagram's gradings.
  [[nodiscard]] Bidegree face_offset(const FaceSpec& face) const;
  [[nodiscard]] std::string face_key(const FaceSpec& face) const;
  [[nodiscard]] const HomologyModel& model(const FaceSpec& face) const;

  // Identity on the generators both faces share. Per mark the shared tags
  // must be a quotient of `from` and a subcomplex of `to`, which makes the
  // map a composite of skein projections and inclusions.
  [[nodiscard]] HomologyMap face_map(const FaceSpec& from, const FaceSpec& to) const;
  // Saddle block from the 0-smoothing face to the 1-smoothing face of one
  // mark (the connecting map), the other marks fixed by `rest`.
  [[nodiscard]] HomologyMap connecting_map(std::size_t mark, const FaceSpec& rest) const;

 private:
  struct Face {
    ScanFace face;
    std::unique_ptr<HomologyModel> model;
  };
  const Face& face(const FaceSpec& spec) const;

  PlanarDiagram d_;
  std::vector<ScanMark> marks_;
  Field field_;
  ScanComplex scan_;
  mutable std::map<std::vector<int>, Face> faces_;
};

struct SkeinTriple {
  PlanarDiagram diagram;
  std::size_t crossing = 0;
  PlanarDiagram d0;  // 0-smoothing
  PlanarDiagram d1;  // 1-smoothing
  // Bidegrees of Khr(D1) -> Khr(D), Khr(D) -> Khr(D0), Khr(D0) -> Khr(D1).
  Bidegree include_shift;
  Bidegree project_shift;
  Bidegree connecting_shift;
};

// Throws std::out_of_range for a bad crossing index.
SkeinTriple skein_triple(const PlanarDiagram& d, std::size_t crossing);

struct SkeinMaps {
  DimTable table;
  DimTable table0;
  DimTable table1;
  HomologyMap include;     // Khr(D1) -> Khr(D)
  HomologyMap project;     // Khr(D) -> Khr(D0)
  HomologyMap connecting;  // Khr(D0) -> Khr(D1)
  std::vector<std::string> exactness_failures;  // empty iff exact everywhere

  [[nodiscard]] bool exact() const { return exactness_failures.empty(); }
};

SkeinMaps les_homology_maps(const SkeinTriple& t, const Field& field);

// Failures of exactness of A -f-> B -g-> C at B, per bidegree of B.
std::vector<std::string> exactness_at(const HomologyMap& f, const HomologyMap& g, const DimTable& b);

// rank Cone = rank A + rank B - 2 rank map.
bool cone_rank_check(long rank_a, long rank_b, long rank_cone, long rank_map);

struct CobordismDescriptor {
  std::string label;
  int euler_characteristic = 0;
  int self_intersection = 0;
};

// (S.S / 2, chi + 3 S.S / 2); throws SkeinError for odd S.S.
Bidegree cobordism_order_bound(const CobordismDescriptor& c);

}  // namespace khss
