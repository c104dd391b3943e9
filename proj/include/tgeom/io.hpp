#pragma once

#include <json.hpp>
#include <string>

#include "tgeom/worldfunc.hpp"

namespace tgeom {

// {"kind", "dim", "metric": [signs] or [[row], ...], "b", "alpha", "beta", "a3": [flattened]}
nlohmann::json world_spec_to_json(const WorldSpec& s);
WorldSpec world_spec_from_json(const nlohmann::json& j);
WorldSpec load_world_spec(const std::string& path);

nlohmann::json vec_to_json(const Vec& v);
Vec vec_from_json(const nlohmann::json& j);
nlohmann::json mat_to_json(const Mat& m);
nlohmann::json tensor_to_json(const Tensor3& t);
nlohmann::json tensor_to_json(const Tensor4& t);

// 17 significant digits: reads back to the same double.
std::string format_real(double x);

// Writes to a sibling temp file, then renames over `path`.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace tgeom
