#pragma once

#include "json.hpp"

#include "averkit/components.hpp"
#include "averkit/core.hpp"
#include "averkit/electrical.hpp"
#include "averkit/equilibrium.hpp"
#include "averkit/generators.hpp"

namespace averkit {

using Json = nlohmann::ordered_json;

Json to_json(const Vector& v);
Json to_json(const Matrix& M);  // array of rows

/// {"components": [[...]], "sinks": [k...], "regular": [i...]}
Json to_json(const Condensation& cond);

/// {"method", "xbar", "H", "x_star", "stderr"?}
Json equilibrium_json(const Vector& xbar, const InfluenceResult& influence);

Json to_json(const ResistanceSolution& sol);
Json to_json(const ThompsonFlow& flow);  // nonzero positive flows as [i, j, theta]

Json to_json(const MatchedConfig& cfg);

/// Error object written to stderr by the command-line tool.
Json error_json(const Error& e);

}  // namespace averkit
