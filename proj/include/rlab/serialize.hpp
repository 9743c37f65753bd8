#pragma once

// JSON forms of the core result types. Doubles are written in the shortest
// form that reads back to the identical value.

#include <json.hpp>
#include <string>

#include "rlab/discriminant.hpp"
#include "rlab/poly_core.hpp"
#include "rlab/projection.hpp"
#include "rlab/stats.hpp"
#include "rlab/topology.hpp"

namespace rlab {

using Json = nlohmann::ordered_json;

inline constexpr const char* kBasisTag = "kostlan-orthonormal-paper";
inline constexpr const char* kOrderTag = "grlex";

Json to_json(const HomogeneousPolynomial& p);
/// Throws InvalidArgument on a malformed document or a coefficient count mismatch.
HomogeneousPolynomial polynomial_from_json(const Json& j);

Json to_json(const DistanceResult& r);
Json to_json(const ProjectionSplit& s);
Json to_json(const ApproximationResult& r);
Json to_json(const RootCount& r);
Json to_json(const CurveTopology& t);
Json to_json(const Interval& i);
Json to_json(const Quartiles& q);
Json to_json(const DecayFit& f);

/// Compact, deterministic text form.
std::string dump(const Json& j);

}  // namespace rlab
