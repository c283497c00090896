#pragma once
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "flatlens/planar.hpp"

namespace flatlens {

struct SlitFold {
  Segment seg;
};

// parallelogram anchored at a, spanned by (b - a) along the slit sides and n * (d - c) along the translation sides
struct PillowFold {
  Vec2 a, b, c, d;
  int n = 1;
  Vec2 ex() const { return double(n) * (d - c); }
  Vec2 ey() const { return b - a; }
  Vec2 shift() const { return b - a; }
  Segment bottom() const { return Segment(a, a + ex()); }
  Segment top() const { return Segment(b, b + ex()); }
  std::vector<SlitFold> slit_sides() const;
};

// folded box; c marks the height of the lower inner fold on the left side
struct ChipFold {
  Vec2 a, b, c, d;
  int n = 1;
  std::vector<SlitFold> expand() const;
};

using Fold = std::variant<SlitFold, PillowFold, ChipFold>;

struct Skeleton {
  std::optional<Lattice> lattice;
  std::vector<Fold> folds;

  // slit folds after expanding chips and pillow slit sides
  std::vector<SlitFold> slit_folds() const;
  std::vector<PillowFold> pillows() const;
};

struct CrossResult {
  Vec2 point;
  int sign;
};

CrossResult slit_cross(const SlitFold& fold, const Vec2& hit, int dir_sign, double theta);
CrossResult pillow_edge_cross(const PillowFold& fold, const Vec2& hit, int dir_sign);

std::vector<SlitFold> pillow_to_chip(const PillowFold& fold, double theta);

struct RailedCertificate {
  bool equivalent = false;
  std::vector<Segment> connectors;
  std::string reason;
};
// correspondence[i] = index in B of the fold matched with fold i of A (slit folds only)
RailedCertificate railed_equivalent(const Skeleton& A, const Skeleton& B, double theta,
                                    const std::vector<int>& correspondence = {});

Skeleton builtin_skeleton(const std::string& name);

// total cone angles (units of pi) of the non-regular points; slit folds only
std::vector<double> singularity_census(const Skeleton& sk);

}  // namespace flatlens
