#include "khss/classical.hpp"

#include <cstdlib>
#include <map>
#include <numeric>
#include <vector>

#include "khss/rational.hpp"

namespace khss {

namespace {

Rational determinant(std::vector<std::vector<Rational>> m) {
  const std::size_t n = m.size();
  Rational det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m[p][c].is_zero()) ++p;
    if (p == n) return Rational(0);
    if (p != c) {
      std::swap(m[p], m[c]);
      det = -det;
    }
    det *= m[c][c];
    const Rational inv = m[c][c].inverse();
    for (std::size_t r = c + 1; r < n; ++r) {
      if (m[r][c].is_zero()) continue;
      const Rational f = m[r][c] * inv;
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

std::int64_t to_int(const Rational& r) {
  if (!r.is_integer()) throw std::logic_error("Alexander polynomial has a non-integer coefficient");
  const mpz_class z = r.numerator();
  if (!z.fits_slong_p()) throw std::overflow_error("Alexander polynomial coefficient overflows");
  return z.get_si();
}

}  // namespace

LaurentPoly alexander_polynomial(const PlanarDiagram& d) {
  validate(d);
  if (component_count(d) != 1) throw DiagramError("Alexander polynomial is implemented for knots only");
  const int n = static_cast<int>(d.size());
  if (n <= 1) return LaurentPoly(std::map<int, std::int64_t>{{0, 1}});

  // Arcs: the over-strand edges b and d of a crossing lie on the same arc.
  std::vector<int> parent(static_cast<std::size_t>(d.n_edges()) + 1);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (const auto& c : d.crossings) parent[find(c[1])] = find(c[3]);
  std::map<int, int> arc_id;
  for (int e = 1; e <= d.n_edges(); ++e) arc_id.emplace(find(e), static_cast<int>(arc_id.size()));
  const int arcs = static_cast<int>(arc_id.size());
  if (arcs != n) throw DiagramError("knot diagram has an unexpected number of arcs");

  // Fox derivatives of the relation at each crossing, abelianised, as
  // polynomials (constant, linear) in t. The incoming under-arc a, the
  // outgoing under-arc c and the over-arc o give
  //   positive: o: 1 - t, a: t, c: -1
  //   negative: o: t - 1, a: 1, c: -t
  struct Entry {
    int arc;
    int c0;
    int c1;
  };
  std::vector<std::vector<Entry>> rows;
  for (std::size_t x = 0; x < d.size(); ++x) {
    const auto& c = d.crossings[x];
    const int o = arc_id[find(c[1])];
    const int a = arc_id[find(c[0])];
    const int out = arc_id[find(c[2])];
    if (d.signs[x] > 0) {
      rows.push_back({{o, 1, -1}, {a, 0, 1}, {out, -1, 0}});
    } else {
      rows.push_back({{o, -1, 1}, {a, 1, 0}, {out, 0, -1}});
    }
  }

  // The minor has degree at most n - 1; evaluate at n points and interpolate.
  std::vector<Rational> xs;
  std::vector<Rational> ys;
  for (int k = 0; k < n; ++k) {
    const Rational t(k + 2);
    std::vector<std::vector<Rational>> m(static_cast<std::size_t>(n - 1), std::vector<Rational>(static_cast<std::size_t>(n - 1)));
    for (int r = 0; r + 1 < n; ++r) {
      for (const Entry& e : rows[r]) {
        if (e.arc == arcs - 1) continue;
        m[r][e.arc] += Rational(e.c0) + Rational(e.c1) * t;
      }
    }
    xs.push_back(t);
    ys.push_back(determinant(std::move(m)));
  }
  // Lagrange interpolation into monomial coefficients.
  std::vector<Rational> coeffs(static_cast<std::size_t>(n), Rational(0));
  for (int k = 0; k < n; ++k) {
    std::vector<Rational> basis{Rational(1)};
    Rational denom(1);
    for (int m = 0; m < n; ++m) {
      if (m == k) continue;
      std::vector<Rational> next(basis.size() + 1, Rational(0));
      for (std::size_t p = 0; p < basis.size(); ++p) {
        next[p + 1] += basis[p];
        next[p] -= basis[p] * xs[m];
      }
      basis = std::move(next);
      denom *= xs[k] - xs[m];
    }
    const Rational scale = ys[k] / denom;
    for (std::size_t p = 0; p < basis.size(); ++p) coeffs[p] += basis[p] * scale;
  }

  int lo = -1;
  int hi = -1;
  for (int p = 0; p < n; ++p) {
    if (coeffs[p].is_zero()) continue;
    if (lo < 0) lo = p;
    hi = p;
  }
  if (lo < 0) throw std::logic_error("Alexander minor vanishes identically");
  if ((hi - lo) % 2 != 0) throw std::logic_error("Alexander polynomial has odd span");
  const int centre = (lo + hi) / 2;
  std::map<int, std::int64_t> out;
  std::int64_t at_one = 0;
  for (int p = lo; p <= hi; ++p) {
    const std::int64_t v = to_int(coeffs[p]);
    if (v == 0) continue;
    out[p - centre] = v;
    at_one += v;
  }
  if (std::llabs(at_one) != 1) throw std::logic_error("Alexander polynomial does not evaluate to +-1 at t = 1");
  if (at_one < 0) {
    for (auto& [e, v] : out) v = -v;
  }
  LaurentPoly delta(out);
  for (const auto& [e, v] : delta.coeffs()) {
    if (delta.coeff(-e) != v) throw std::logic_error("Alexander polynomial is not symmetric");
  }
  return delta;
}

AlexanderInvariants alexander_invariants(const PlanarDiagram& d) {
  AlexanderInvariants a;
  a.delta = alexander_polynomial(d);
  a.determinant = std::llabs(a.delta.at_minus_one());
  a.coeff_abs_sum = a.delta.abs_coefficient_sum();
  return a;
}

bool determinant_matches(const AlexanderInvariants& a, const DimTable& khovanov) {
  return jones_abs_at_minus_one(khovanov) == a.determinant;
}

}  // namespace khss
