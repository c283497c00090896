#pragma once
#include <cstdint>
#include <optional>
#include <vector>

#include "flatlens/flow.hpp"

namespace flatlens {

// closed transversal: the lattice line through origin spanned by the primitive lattice vector w
struct SectionSpec {
  Vec2 origin{0, 0};
  Vec2 w{1, 0};
};

struct IetInterval {
  double left = 0;
  double length = 0;
  double offset = 0;  // image = [left + offset, left + offset + length)
  double tau = 0;
  Cell xi{0, 0};  // lattice coordinates of the deck displacement of the return loop
  double image() const { return left + offset; }
};

// doubled section: z in [0, L) runs along w on the copy crossing positively, [L, 2L) runs backwards on the other
struct IetWithCocycle {
  SectionSpec section;
  double L = 1;
  std::vector<IetInterval> intervals;
  int saddle_connections = 0;
  double total() const { return 2 * L; }
  int locate(double z) const;  // interval index containing z, -1 outside
  double map(double z) const;
};

struct SectionFrame {
  Lattice lat;
  SectionSpec sec;
  Cell w_coords, w2_coords;  // lattice coordinates of w and of a complementary w2
  Mat2 inv;                  // plane -> (along w, across) coordinates
  double L;
  int plus_sign;  // flow sign crossing in the positive sense for direction theta
  double theta;
};
SectionFrame make_frame(const Lattice& lat, const SectionSpec& sec, double theta);

struct SectionPoint {
  Vec2 pos;
  int sign;
};
SectionPoint section_point(const SectionFrame& f, double z);

struct Crossing {
  double z;
  Cell deck;  // lattice translate of the section line reached, relative to the base copy
  double path;
};

// follows the plane flow from z and reports every section crossing until the callback returns false
// singular hits throw DiscontinuityHit
void section_walk(const Model& m, const SectionFrame& f, double z, double cap, const std::function<bool(const Crossing&)>& cb);

struct ReturnData {
  double z;
  double tau;
  Cell xi;
};
ReturnData flow_return(const Model& m, const SectionFrame& f, double z, double cap);

struct ExtractOptions {
  double eps = 1e-7;          // backward separatrices start this far behind their singular point
  double merge_tol = 1e-9;    // breakpoints closer than this are merged
  double cap_cells = 1e3;     // travel cap in units of the cell diameter
  double end_tol = 1e-12;     // singular strip half-width around fold endpoints
  bool strict = false;        // throw SaddleConnectionDetected instead of counting
};
IetWithCocycle extract_iet(const Skeleton& sk, double theta, const SectionSpec& sec, const ExtractOptions& opt = {});

// a generic section for a torus skeleton: shortest basis vector through an off-grid origin
SectionSpec default_section(const Skeleton& sk);

using PsiTable = std::vector<std::vector<long long>>;
PsiTable cocycle(const IetWithCocycle& iet, const std::vector<Cell>& gammas);
PsiTable standard_cocycle(const IetWithCocycle& iet);

struct SkewOrbit {
  std::vector<double> x;
  std::vector<std::vector<long long>> g;
};
SkewOrbit skew_orbit(const IetWithCocycle& iet, const PsiTable& psi, double x0, int N);

struct DeckCheck {
  bool ok = true;
  int steps = 0;
  double max_z_error = 0;
};
DeckCheck deck_consistency(const IetWithCocycle& iet, const Skeleton& sk, double theta, double x0, int N);

struct InducedInterval {
  double left, length, offset;
  long long h;
  Cell xi;  // Birkhoff sum of the interval classes along the tower
};
std::vector<InducedInterval> induce(const IetWithCocycle& iet, double a, double b);

struct TowerReport {
  int intervals = 0;
  int checked = 0;
  int mismatches = 0;
  bool ok() const { return mismatches == 0 && checked > 0; }
};
// compares induced Birkhoff sums with direct plane returns to [a, b)
TowerReport tower_constancy(const IetWithCocycle& iet, const Skeleton& sk, double theta, double a, double b,
                            int samples_per_interval = 3);

struct EssentialCandidate {
  std::vector<long long> g;
  long long h;
  double measure;
  double sup_displacement;
};
struct RigidityResult {
  std::vector<EssentialCandidate> candidates;
  std::vector<std::vector<long long>> subgroup_basis;  // Hermite normal form rows
  long long subgroup_index = 0;                        // 0 when not of full rank
};
// Monte Carlo estimate on a uniform grid of samples; throws ExactPeriodicity on a periodic base
RigidityResult rigidity_scan(const IetWithCocycle& iet, const PsiTable& psi, long long h_max, double rigid_tol,
                             double measure_floor, int samples = 20000);

// Hermite normal form of integer row vectors (zero rows dropped)
std::vector<std::vector<long long>> hermite_rows(std::vector<std::vector<long long>> rows);

// rotation by the golden mean on [0,1) with psi = +1 on [0,1/2) and -1 on [1/2,1)
std::pair<IetWithCocycle, PsiTable> golden_rotation_control();

}  // namespace flatlens
