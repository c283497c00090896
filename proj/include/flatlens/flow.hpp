#pragma once
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "flatlens/configurations.hpp"
#include "flatlens/skeleton.hpp"

namespace flatlens {

struct FlowState {
  Vec2 pos{0, 0};
  int sign = 1;
  double theta = 0;
  double path_length = 0;
  Vec2 velocity() const { return double(sign) * unit_dir(theta); }
};

enum class EventKind { FoldCross, LensTransit, PillowJump, Singular, None };
const char* event_kind_name(EventKind k);

struct Event {
  EventKind kind = EventKind::None;
  double t = std::numeric_limits<double>::infinity();  // free flight before the event
  Vec2 hit{0, 0};
  int element = -1;
  Cell shift{0, 0};  // lattice translate of the element copy
  Vec2 new_pos{0, 0};
  int new_sign = 1;
  double extra_path = 0;  // time spent inside a lens
};

class Model {
 public:
  explicit Model(const Skeleton& sk);
  explicit Model(const LensConfiguration& cfg);

  const std::optional<Lattice>& lattice() const { return lattice_; }
  int slit_count() const { return (int)slits_.size(); }
  int pillow_count() const { return (int)pillows_.size(); }
  int lens_count() const { return (int)lenses_.size(); }
  int element_count() const { return slit_count() + 2 * pillow_count() + lens_count(); }
  const std::vector<Segment>& slits() const { return slits_; }
  const std::vector<PillowFold>& pillows() const { return pillows_; }
  const std::vector<EatonLens>& lenses() const { return lenses_; }
  // inside some lens (open disk)
  bool inside_lens(const Vec2& p) const;
  Cell deck_of(const Vec2& p) const;

  // first event within horizon; None when nothing is met. Throws TravelCapExceeded for unbounded flights.
  Event next_event(const FlowState& st, double horizon = std::numeric_limits<double>::infinity()) const;

  double travel_cap = 1e7;
  // hits this close to a fold endpoint are singular
  double end_tol = 1e-9;

 private:
  struct Entry {
    int elem;
    long long fi, fj;
  };
  void build_index();
  void test_element(int e, const Vec2& shift, const Cell& sc, const Vec2& o, const Vec2& d, Event& best) const;

  std::optional<Lattice> lattice_;
  std::vector<Segment> slits_;
  std::vector<PillowFold> pillows_;
  std::vector<EatonLens> lenses_;
  std::vector<Entry> index_;
  Mat2 binv_;
};

struct EventRecord {
  double path_length;
  EventKind kind;
  Vec2 location;
  int element;
  Cell shift;
};

struct Trajectory {
  std::vector<EventRecord> events;
  std::vector<double> sample_path;
  std::vector<Vec2> displacement_samples;
  std::vector<Cell> deck_samples;
  Vec2 start{0, 0};
  FlowState final_state;
  std::string terminated;  // "max_path" | "singular"
  long long event_count = 0;
  long long cell_count = 0;
};

struct TraceOptions {
  int checkpoints = 1024;
  bool record_events = true;
  bool count_cells = true;
  std::size_t max_events = std::numeric_limits<std::size_t>::max();
  // called for every straight piece of path outside lenses
  std::function<void(const Vec2& from, const Vec2& to, int sign)> on_flight;
};

Trajectory trace(const FlowState& start, const Model& model, double max_path, const TraceOptions& opt = {});

struct CompareReport {
  int rays = 0;
  int compared = 0;
  int matched = 0;
  int singular = 0;
  double match_fraction = 1;
};
CompareReport compare_models(const LensConfiguration& lenses, const Skeleton& slits, double theta, int n_rays, double path,
                             unsigned long long seed);

struct TrapStats {
  double min_width = 0;
  Vec2 trap_direction{0, 1};
  long long cell_count = 1;
  double growth_exponent = 0;
};
TrapStats trap_stats(const Trajectory& traj);
// growth exponent of samples against their path lengths along direction u
double growth_exponent(const std::vector<double>& L, const std::vector<Vec2>& d, const Vec2& u);
// minimal width of the convex hull and the unit normal achieving it
std::pair<double, Vec2> min_width(const std::vector<Vec2>& pts);

}  // namespace flatlens
