#pragma once
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "flatlens/flow.hpp"
#include "flatlens/io.hpp"

namespace flatlens {

std::vector<double> sample_thetas(int n, unsigned long long seed);
// uniform start in the fundamental cell, outside every lens
Vec2 random_start(const Model& m, const Lattice& lat, std::mt19937_64& rng);

struct DirectionRecord {
  double theta = 0;
  bool ok = false;
  std::string error;
  TrapStats stats;
  long long events = 0;
  std::string terminated;
};

struct SweepConfig {
  int thetas = 50;
  double path = 1e5;
  unsigned long long seed = 7;
  int checkpoints = 1024;
};

using ModelFactory = std::function<std::shared_ptr<const Model>(double theta)>;
std::vector<DirectionRecord> direction_sweep(const ModelFactory& make, const Lattice& start_cell, const SweepConfig& cfg);

json record_json(const DirectionRecord& r);

// fraction of directions with growth exponent at most cutoff
json trapping_summary(const std::string& label, const std::vector<DirectionRecord>& recs, double cutoff, double required);
// fraction with exponent at least cutoff or at least min_cells cells
json ergodic_summary(const std::string& label, const std::vector<DirectionRecord>& recs, double cutoff, long long min_cells,
                     double required);

json run_trapping(const std::string& builtin, const SweepConfig& cfg, double cutoff = 0.1, double required = 0.8);
json run_ergodic(const SweepConfig& cfg, double cutoff = 0.3, long long min_cells = 50, double required = 0.6);

// separated two-slit configuration used for the trapping diagnostic
SlitConfiguration separated_two_slit();
LensConfiguration trapping_single_lens();

json run_compare(const std::vector<double>& thetas, int rays, double path, unsigned long long seed, double floor = 0.99);
std::vector<double> compare_thetas(int n);

struct ItineraryItem {
  int axis;  // 0 vertical reference line, 1 horizontal
  long long k;
  int dir;
  bool operator==(const ItineraryItem&) const = default;
};
// crossings of the reference lines x = off + period k and y = off + period k
std::vector<ItineraryItem> itinerary(const Model& m, const FlowState& st, double path, double period, double off,
                                     std::size_t max_items, bool* singular);

json run_pillow_chip(const std::vector<double>& thetas, int rays, double path, unsigned long long seed, double floor = 0.99);
std::vector<double> pillow_chip_thetas();
Skeleton unit_pillow_skeleton();
Skeleton unit_chip_skeleton(double theta);

std::string model_name_list();
// "single-lens", "two-slit", or any builtin skeleton name
std::shared_ptr<const Model> builtin_model(const std::string& name, double theta, Lattice* lat);

}  // namespace flatlens
