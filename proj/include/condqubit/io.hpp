#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "condqubit/entropy.hpp"
#include "condqubit/geometry.hpp"
#include "condqubit/measurement.hpp"
#include "condqubit/state_factory.hpp"

namespace condqubit {

using Json = nlohmann::json;

/// FamilySpec <-> JSON, tagged by "family". Unknown keys are rejected.
FamilySpec family_from_json(const Json& j);
Json family_to_json(const FamilySpec& spec);

Json vec_to_json(const Vec3& v);
Json descriptor_to_json(const SetDescriptor& d);
Json ellipsoid_to_json(const EllipsoidDescriptor& e);
Json measurement_to_json(const RankOneMeasurement& m);
Json result_to_json(const MinimizationResult& r);
Json fano_to_json(const FanoData& f);

/// `x,y,z,q,p` header plus one row per point, %.17g.
void write_cloud_csv(std::ostream& os, const std::vector<CloudPoint>& cloud);

/// {"columns": ["x","y","z","q","p"], "rows": [[...], ...]}.
Json cloud_to_json(const std::vector<CloudPoint>& cloud);

/// %.17g formatting of one double.
std::string format_double(double x);

/// Reads a whole file; throws Error{Io}.
std::string read_text_file(const std::string& path);

/// Writes through a temporary file renamed into place, so a failed run
/// never leaves a partial output; throws Error{Io}.
void write_text_file(const std::string& path, const std::string& content);

} // namespace condqubit
