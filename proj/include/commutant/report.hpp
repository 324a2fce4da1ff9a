#pragma once

#include <string>

#include <json.hpp>

#include "commutant/core.hpp"

namespace commutant {

/// Deterministic JSON serialization: keys sorted (nlohmann object order),
/// floats printed with 17 significant digits.
std::string dump_deterministic(const nlohmann::json& j, int indent = 2);

std::string format_double(double v);

nlohmann::json vector_to_json(const Vector& v);

/// Report envelope shared by all CLI subcommands.
nlohmann::json make_report(const std::string& command, const std::string& scenario_id,
                           const nlohmann::json& parameters, const nlohmann::json& results);

}  // namespace commutant
