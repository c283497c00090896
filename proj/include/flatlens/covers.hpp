#pragma once
#include <array>
#include <set>
#include <string>
#include <vector>

namespace flatlens {

struct CyclicCover {
  int d = 1;
  int wh = 0;
  int wv = 0;
  auto operator<=>(const CyclicCover&) const = default;
};

CyclicCover make_cover(int d, int wh, int wv);
int gcd0(int a, int d);  // gcd with gcd(0,d) = d
bool connected(const CyclicCover& c);
bool branched_over_three(const CyclicCover& c);
int genus(const CyclicCover& c);
std::array<int, 3> fiber_counts(const CyclicCover& c);
std::array<int, 3> branching_orders(const CyclicCover& c);
// cone angles in units of pi over p1, p2, p3 and the unbranched corner; regular points dropped
std::vector<double> cover_census(const CyclicCover& c);

struct GluedComplex {
  int d = 0;
  // vertex class of each of the 6 boundary vertices of each copy: TL, TM, TR, BL, BM, BR
  std::vector<std::array<int, 6>> vclass;
  int vertices = 0;
  int edges = 0;
  int faces = 0;
  std::vector<double> angle;  // total angle per class, units of pi
};

GluedComplex build_complex(const CyclicCover& c);
int euler_char(const GluedComplex& g);
// multiset of total angles (units of pi) over all vertex classes
std::vector<double> singularity_orders(const GluedComplex& g);
// number of vertex classes over p1, p2, p3
std::array<int, 3> complex_fiber_counts(const GluedComplex& g);

std::vector<CyclicCover> enumerate_torus_covers(int d_max);

enum class Sl2Gen { Ph, Pv };
CyclicCover sl2z_step(const CyclicCover& c, Sl2Gen g);
std::set<CyclicCover> sl2z_orbit(const CyclicCover& c);
CyclicCover canonical_form(const CyclicCover& c);
// deck renaming so that wv divides d, then the largest wh
CyclicCover table_form(const CyclicCover& c);
// classes of genus-one covers up to SL2(Z) and deck renaming
std::vector<std::vector<CyclicCover>> torus_cover_classes(int d_max);

struct TableRow {
  int d, wh, wv, n1, n2, n3;
};
std::vector<TableRow> cover_table();

}  // namespace flatlens
