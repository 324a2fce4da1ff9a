#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "commutant/geometry.hpp"
#include "commutant/group_actions.hpp"

namespace commutant {

/// A bundle of named fields, flows, maps, and group actions over a common
/// coordinate domain.  Immutable after load.
struct Scenario {
    std::string id;
    std::string description;
    int dim = 0;
    Box domain;
    std::vector<VectorField> fields;
    std::vector<nlohmann::json> field_defs;  // parallel to `fields`; serialization payloads
    std::vector<Flow> flows;
    std::vector<SmoothMap> maps;
    std::vector<MatrixGroupAction> actions;

    const VectorField& field(const std::string& name) const;
    const Flow& flow(const std::string& name) const;
    const SmoothMap& map(const std::string& name) const;
    const MatrixGroupAction& action(const std::string& name) const;
};

std::vector<std::string> builtin_scenario_ids();

Scenario load_builtin(const std::string& id);

/// Scenario file: JSON object with keys id, dim, domain, fields, optional
/// maps.  Unknown keys are rejected.
Scenario load_scenario_file(const std::string& path);
Scenario parse_scenario(const nlohmann::json& j);

nlohmann::json serialize_scenario(const Scenario& s);

Matrix parse_matrix(const nlohmann::json& rows);
nlohmann::json matrix_to_json(const Matrix& A);

}  // namespace commutant
