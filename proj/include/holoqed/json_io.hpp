#pragma once

#include "holoqed/types.hpp"
#include "json.hpp"

namespace holoqed {

/// Complex matrices as row arrays of [re, im] pairs.
nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

nlohmann::json vector_to_json(const RealVector& v);
RealVector vector_from_json(const nlohmann::json& j);

}  // namespace holoqed
