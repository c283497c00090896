#pragma once
#include <optional>
#include <vector>

#include "flatlens/eaton.hpp"
#include "flatlens/skeleton.hpp"

namespace flatlens {

struct LensConfiguration {
  Lattice lattice;
  std::vector<EatonLens> lenses;
};

struct SlitConfiguration {
  Lattice lattice;
  Vec2 v{0, 1};  // unit slit direction
  std::vector<Vec2> centers;
  std::vector<double> radii;  // half-lengths
};

// zero-radius lenses are dropped
LensConfiguration make_configuration(const Lattice& lat, const std::vector<EatonLens>& lenses);

// k in 1..4 selects the formula; keeps zero radii
LensConfiguration gamma_w_branch(int k, double theta);
LensConfiguration gamma_w_raw(double theta);
LensConfiguration gamma_w(double theta);

struct Admissibility {
  bool ok = true;
  int worst_i = -1, worst_j = -1;
  double worst_gap = 0;  // distance minus radii sum, smallest over pairs
};
Admissibility is_admissible(const LensConfiguration& cfg, double tol = 1e-9);
bool is_proper(const LensConfiguration& cfg);

SlitConfiguration lens_to_slits(const LensConfiguration& cfg, double theta);
Skeleton to_skeleton(const SlitConfiguration& s);

bool is_separated(const SlitConfiguration& s, const Vec2& w);

struct RescaleResult {
  SlitConfiguration slits;
  int collide_i = -1, collide_j = -1;
};
// throws DeformationBlocked when the sweep regions collide
RescaleResult railed_rescale(const SlitConfiguration& s, double theta, double xi);

// a single lens per cell
LensConfiguration single_lens(const Lattice& lat, double R, const Vec2& c = Vec2(0, 0));

}  // namespace flatlens
