#pragma once
#include <json.hpp>
#include <string>

#include "flatlens/configurations.hpp"
#include "flatlens/flow.hpp"
#include "flatlens/iet.hpp"
#include "flatlens/skeleton.hpp"

namespace flatlens {

using json = nlohmann::json;

json to_json(const Vec2& v);
Vec2 vec_from_json(const json& j);

json skeleton_to_json(const Skeleton& sk);
Skeleton skeleton_from_json(const json& j);

json lenses_to_json(const LensConfiguration& cfg);
LensConfiguration lenses_from_json(const json& j);

json slits_to_json(const SlitConfiguration& s);
SlitConfiguration slits_from_json(const json& j);

json iet_to_json(const IetWithCocycle& iet);

// trajectory CSV with the fixed header path_length,x,y,deck_i,deck_j,event_kind
std::string trajectory_csv(const Trajectory& tr, const Model& m);
// polyline of the sampled path over the fold and lens copies it passes
std::string trajectory_svg(const Trajectory& tr, const Model& m);

json read_json_file(const std::string& path);

}  // namespace flatlens
