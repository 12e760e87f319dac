#pragma once

#include "json.hpp"

namespace holoqed {

/// H = -sum_i [J z_i z_{i+1} + h x_i - V (x_i x_{i+1} + z_{i-1} z_{i+1})]
struct SpinChainModel {
  double j_coupling = 1.0;
  double h_field = 1.0;
  double v_perturbation = 0.5;
};

inline void to_json(nlohmann::json& j, const SpinChainModel& m) {
  j = nlohmann::json{{"J", m.j_coupling}, {"h", m.h_field}, {"V", m.v_perturbation}};
}

inline void from_json(const nlohmann::json& j, SpinChainModel& m) {
  m = SpinChainModel{};
  if (j.contains("J")) m.j_coupling = j.at("J").get<double>();
  if (j.contains("h")) m.h_field = j.at("h").get<double>();
  if (j.contains("V")) m.v_perturbation = j.at("V").get<double>();
}

}  // namespace holoqed
