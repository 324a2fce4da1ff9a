#include "commutant/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace commutant {

namespace {

constexpr double kPi = 3.14159265358979323846;

nlohmann::json builtin_ref(const std::string& scenario, const std::string& field) {
    return nlohmann::json{{"kind", "builtin_ref"},
                          {"payload", {{"scenario", scenario}, {"field", field}}}};
}

// --- se(2) chart g and its pieces -----------------------------------------

Vector se2_g_eval(const Vector& x) {
    const double c = std::cos(x[0]), s = std::sin(x[0]);
    Vector y(3);
    y << x[0], c * x[1] - s * x[2], s * x[1] + c * x[2];
    return y;
}

Matrix se2_g_jac(const Vector& x) {
    const double c = std::cos(x[0]), s = std::sin(x[0]);
    Matrix J(3, 3);
    J << 1, 0, 0,
        -s * x[1] - c * x[2], c, -s,
        c * x[1] - s * x[2], s, c;
    return J;
}

Vector se2_g_inv(const Vector& y) {
    const double c = std::cos(y[0]), s = std::sin(y[0]);
    Vector x(3);
    x << y[0], c * y[1] + s * y[2], -s * y[1] + c * y[2];
    return x;
}

SmoothMap make_se2_chart_g() {
    SmoothMap g;
    g.id = "g";
    g.domain_dim = g.codomain_dim = 3;
    Vector lo(3), hi(3);
    lo << -kPi / 2.0, -1.0, -1.0;
    hi << kPi / 2.0, 1.0, 1.0;
    g.domain = Box(lo, hi);
    g.eval = se2_g_eval;
    g.jacobian = se2_g_jac;
    g.inverse = se2_g_inv;
    return g;
}

std::vector<VectorField> make_se2_frame_fields() {
    auto X1 = analytic_field(
        "se2_frame_X1", 3,
        [](const Vector& x) -> Vector {
            const double c = std::cos(x[0]), s = std::sin(x[0]);
            Vector v(3);
            v << 1.0, -x[1] * s - x[2] * c, x[1] * c - x[2] * s;
            return v;
        },
        [](const Vector& x) -> Matrix {
            const double c = std::cos(x[0]), s = std::sin(x[0]);
            Matrix J(3, 3);
            J << 0, 0, 0,
                -x[1] * c + x[2] * s, -s, -c,
                -x[1] * s - x[2] * c, c, -s;
            return J;
        });
    auto X2 = analytic_field(
        "se2_frame_X2", 3,
        [](const Vector& x) -> Vector {
            Vector v(3);
            v << 0.0, std::cos(x[0]), std::sin(x[0]);
            return v;
        },
        [](const Vector& x) -> Matrix {
            Matrix J = Matrix::Zero(3, 3);
            J(1, 0) = -std::sin(x[0]);
            J(2, 0) = std::cos(x[0]);
            return J;
        });
    auto X3 = analytic_field(
        "se2_frame_X3", 3,
        [](const Vector& x) -> Vector {
            Vector v(3);
            v << 0.0, -std::sin(x[0]), std::cos(x[0]);
            return v;
        },
        [](const Vector& x) -> Matrix {
            Matrix J = Matrix::Zero(3, 3);
            J(1, 0) = -std::cos(x[0]);
            J(2, 0) = -std::sin(x[0]);
            return J;
        });
    return {X1, X2, X3};
}

// --- builtin constructors --------------------------------------------------

Scenario make_circle_cover() {
    Scenario s;
    s.id = "circle_cover";
    s.description = "covering map t -> (cos 2 pi t, sin 2 pi t) with a restricted-branch inverse";
    s.dim = 1;
    s.domain = Box::cube(1, -4.0, 4.0);

    SmoothMap circle;
    circle.id = "circle";
    circle.domain_dim = 1;
    circle.codomain_dim = 2;
    circle.domain = s.domain;
    circle.eval = [](const Vector& t) -> Vector {
        Vector y(2);
        y << std::cos(2.0 * kPi * t[0]), std::sin(2.0 * kPi * t[0]);
        return y;
    };
    circle.jacobian = [](const Vector& t) -> Matrix {
        Matrix J(2, 1);
        J << -2.0 * kPi * std::sin(2.0 * kPi * t[0]), 2.0 * kPi * std::cos(2.0 * kPi * t[0]);
        return J;
    };
    circle.inverse = [](const Vector& y) -> Vector {
        Vector t(1);
        t << std::atan2(y[1], y[0]) / (2.0 * kPi);
        return t;
    };
    circle.inverse_domain = Box::cube(1, -0.4, 0.4);
    s.maps.push_back(std::move(circle));
    return s;
}

Scenario make_se2_chart_g_scenario() {
    Scenario s;
    s.id = "se2_chart_g";
    s.description = "chart g(x) = (x1, R_{x1}[x2,x3]) with analytic Jacobian and inverse";
    s.dim = 3;
    s.domain = make_se2_chart_g().domain;
    s.maps.push_back(make_se2_chart_g());
    return s;
}

Scenario make_se2_chart_h_scenario() {
    Scenario s;
    s.id = "se2_chart_h";
    s.description = "reversed-order map: translation after rotation is the identity chart";
    s.dim = 3;
    s.domain = make_se2_chart_g().domain;
    SmoothMap h;
    h.id = "h";
    h.domain_dim = h.codomain_dim = 3;
    h.domain = s.domain;
    h.eval = [](const Vector& x) -> Vector { return x; };
    h.jacobian = [](const Vector&) -> Matrix { return Matrix::Identity(3, 3); };
    h.inverse = [](const Vector& y) -> Vector { return y; };
    s.maps.push_back(std::move(h));
    return s;
}

Scenario make_se2_frame_scenario() {
    Scenario s;
    s.id = "se2_frame_fields";
    s.description = "literal coordinate-dynamics fields X1, X2, X3 of the chart g";
    s.dim = 3;
    s.domain = make_se2_chart_g().domain;
    for (auto& X : make_se2_frame_fields()) {
        s.field_defs.push_back(builtin_ref(s.id, X.name));
        s.fields.push_back(std::move(X));
    }
    s.maps.push_back(make_se2_chart_g());
    // Integrated flows for the literal fields.
    for (const auto& X : s.fields) s.flows.push_back(integrated_flow(X, s.domain));
    return s;
}

Scenario make_se2_generators() {
    Scenario s;
    s.id = "se2_generators";
    s.description = "grid rotation and translations on the (angle, position) chart";
    s.dim = 3;
    Vector lo(3), hi(3);
    lo << -kPi, -2.0, -2.0;
    hi << kPi, 2.0, 2.0;
    s.domain = Box(lo, hi);

    auto rotation = analytic_field(
        "rotation", 3,
        [](const Vector& x) -> Vector {
            Vector v(3);
            v << 1.0, -x[2], x[1];
            return v;
        },
        [](const Vector&) -> Matrix {
            Matrix J = Matrix::Zero(3, 3);
            J(1, 2) = -1.0;
            J(2, 1) = 1.0;
            return J;
        });
    Vector e2 = Vector::Zero(3), e3 = Vector::Zero(3);
    e2[1] = 1.0;
    e3[2] = 1.0;
    s.fields = {rotation, constant_field(e2, "translate_x"), constant_field(e3, "translate_y")};
    for (const auto& f : s.fields) s.field_defs.push_back(builtin_ref(s.id, f.name));

    s.flows.push_back(closed_form_flow(
        "rotation", 3, s.domain, [](double t, const Vector& x) -> Vector {
            const double c = std::cos(t), sn = std::sin(t);
            Vector y(3);
            y << x[0] + t, c * x[1] - sn * x[2], sn * x[1] + c * x[2];
            return y;
        }));
    s.flows.push_back(closed_form_flow(
        "translate_x", 3, s.domain, [](double t, const Vector& x) -> Vector {
            Vector y = x;
            y[1] += t;
            return y;
        }));
    s.flows.push_back(closed_form_flow(
        "translate_y", 3, s.domain, [](double t, const Vector& x) -> Vector {
            Vector y = x;
            y[2] += t;
            return y;
        }));
    return s;
}

Scenario make_plane_translations() {
    Scenario s;
    s.id = "plane_translations";
    s.description = "commuting x/y translation pair on the plane";
    s.dim = 2;
    s.domain = Box::cube(2, -4.0, 4.0);
    Vector e1 = Vector::Zero(2), e2 = Vector::Zero(2);
    e1[0] = 1.0;
    e2[1] = 1.0;
    s.fields = {constant_field(e1, "translate_x"), constant_field(e2, "translate_y")};
    for (const auto& f : s.fields) s.field_defs.push_back(builtin_ref(s.id, f.name));
    s.flows.push_back(closed_form_flow("translate_x", 2, s.domain,
                                       [](double t, const Vector& p) -> Vector {
                                           Vector y = p;
                                           y[0] += t;
                                           return y;
                                       }));
    s.flows.push_back(closed_form_flow("translate_y", 2, s.domain,
                                       [](double t, const Vector& p) -> Vector {
                                           Vector y = p;
                                           y[1] += t;
                                           return y;
                                       }));

    Matrix Ex = Matrix::Zero(3, 3), Ey = Matrix::Zero(3, 3);
    Ex(0, 2) = 1.0;
    Ey(1, 2) = 1.0;
    s.actions.emplace_back("translations", std::vector<Matrix>{Ex, Ey}, 2);
    s.actions.emplace_back("translate_x", std::vector<Matrix>{Ex}, 2);
    s.actions.emplace_back("translate_y", std::vector<Matrix>{Ey}, 2);
    return s;
}

Scenario make_plane_rot_trans() {
    Scenario s;
    s.id = "plane_rot_trans";
    s.description = "grid rotation and translations acting on the plane itself";
    s.dim = 2;
    s.domain = Box::cube(2, -4.0, 4.0);

    Matrix J2(2, 2);
    J2 << 0, -1, 1, 0;
    Vector e1 = Vector::Zero(2), e2 = Vector::Zero(2);
    e1[0] = 1.0;
    e2[1] = 1.0;
    s.fields = {linear_generator_field(J2, "rotation"), constant_field(e1, "translate_x"),
                constant_field(e2, "translate_y")};
    for (const auto& f : s.fields) s.field_defs.push_back(builtin_ref(s.id, f.name));

    s.flows.push_back(closed_form_flow("rotation", 2, s.domain,
                                       [](double t, const Vector& p) -> Vector {
                                           const double c = std::cos(t), sn = std::sin(t);
                                           Vector y(2);
                                           y << c * p[0] - sn * p[1], sn * p[0] + c * p[1];
                                           return y;
                                       }));
    s.flows.push_back(closed_form_flow("translate_x", 2, s.domain,
                                       [](double t, const Vector& p) -> Vector {
                                           Vector y = p;
                                           y[0] += t;
                                           return y;
                                       }));
    s.flows.push_back(closed_form_flow("translate_y", 2, s.domain,
                                       [](double t, const Vector& p) -> Vector {
                                           Vector y = p;
                                           y[1] += t;
                                           return y;
                                       }));

    Matrix Ex = Matrix::Zero(3, 3), Ey = Matrix::Zero(3, 3), Er = Matrix::Zero(3, 3);
    Ex(0, 2) = 1.0;
    Ey(1, 2) = 1.0;
    Er.topLeftCorner(2, 2) = J2;
    s.actions.emplace_back("rotation", std::vector<Matrix>{J2}, 2);
    s.actions.emplace_back("translation", std::vector<Matrix>{Ex, Ey}, 2);
    s.actions.emplace_back("se2", std::vector<Matrix>{Er, Ex, Ey}, 2);
    return s;
}

Scenario make_torus_flows() {
    Scenario s;
    s.id = "torus_flows";
    s.description = "two constant-angle flows on flat-torus coordinates";
    s.dim = 2;
    s.domain = Box::cube(2, -8.0, 8.0);
    Vector a(2), b(2);
    a << 1.0, 0.5;
    b << -0.25, 1.0;
    s.fields = {constant_field(a, "winding_a"), constant_field(b, "winding_b")};
    for (const auto& f : s.fields) s.field_defs.push_back(builtin_ref(s.id, f.name));
    s.flows.push_back(closed_form_flow("winding_a", 2, s.domain,
                                       [a](double t, const Vector& p) -> Vector { return p + t * a; }));
    s.flows.push_back(closed_form_flow("winding_b", 2, s.domain,
                                       [b](double t, const Vector& p) -> Vector { return p + t * b; }));
    return s;
}

}  // namespace

const VectorField& Scenario::field(const std::string& name) const {
    for (const auto& f : fields)
        if (f.name == name) return f;
    throw std::invalid_argument("scenario '" + id + "' has no field '" + name + "'");
}

const Flow& Scenario::flow(const std::string& name) const {
    for (const auto& f : flows)
        if (f.name == name) return f;
    throw std::invalid_argument("scenario '" + id + "' has no flow '" + name + "'");
}

const SmoothMap& Scenario::map(const std::string& name) const {
    for (const auto& m : maps)
        if (m.id == name) return m;
    throw std::invalid_argument("scenario '" + id + "' has no map '" + name + "'");
}

const MatrixGroupAction& Scenario::action(const std::string& name) const {
    for (const auto& a : actions)
        if (a.name == name) return a;
    throw std::invalid_argument("scenario '" + id + "' has no action '" + name + "'");
}

std::vector<std::string> builtin_scenario_ids() {
    return {"circle_cover",   "se2_chart_g",       "se2_chart_h",    "se2_frame_fields",
            "se2_generators", "plane_translations", "plane_rot_trans", "torus_flows"};
}

Scenario load_builtin(const std::string& id) {
    if (id == "circle_cover") return make_circle_cover();
    if (id == "se2_chart_g") return make_se2_chart_g_scenario();
    if (id == "se2_chart_h") return make_se2_chart_h_scenario();
    if (id == "se2_frame_fields") return make_se2_frame_scenario();
    if (id == "se2_generators") return make_se2_generators();
    if (id == "plane_translations") return make_plane_translations();
    if (id == "plane_rot_trans") return make_plane_rot_trans();
    if (id == "torus_flows") return make_torus_flows();
    throw std::invalid_argument("unknown builtin scenario '" + id + "'");
}

// ---------------------------------------------------------------------------
// Scenario files

Matrix parse_matrix(const nlohmann::json& rows) {
    if (!rows.is_array() || rows.empty()) throw SchemaError("matrix: expected array of rows");
    const size_t ncols = rows[0].is_array() ? rows[0].size() : 0;
    if (ncols == 0) throw SchemaError("matrix: empty row");
    Matrix A(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(ncols));
    for (size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].is_array() || rows[i].size() != ncols)
            throw SchemaError("matrix: ragged rows");
        for (size_t j = 0; j < ncols; ++j) {
            if (!rows[i][j].is_number()) throw SchemaError("matrix: non-numeric entry");
            A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j].get<double>();
        }
    }
    return A;
}

nlohmann::json matrix_to_json(const Matrix& A) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < A.cols(); ++j) row.push_back(A(i, j));
        rows.push_back(row);
    }
    return rows;
}

namespace {

void reject_unknown_keys(const nlohmann::json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw SchemaError(where + ": unknown key '" + it.key() + "'");
}

VectorField resolve_ref(const nlohmann::json& payload, int dim, const std::string& where) {
    reject_unknown_keys(payload, {"scenario", "field"}, where);
    if (!payload.contains("scenario") || !payload.contains("field"))
        throw SchemaError(where + ": builtin_ref needs 'scenario' and 'field'");
    const Scenario src = load_builtin(payload["scenario"].get<std::string>());
    const VectorField& f = src.field(payload["field"].get<std::string>());
    if (f.dim != dim) throw SchemaError(where + ": referenced field has dim " +
                                        std::to_string(f.dim) + ", scenario has dim " +
                                        std::to_string(dim));
    return f;
}

}  // namespace

Scenario parse_scenario(const nlohmann::json& j) {
    if (!j.is_object()) throw SchemaError("scenario: expected a JSON object");
    reject_unknown_keys(j, {"id", "dim", "domain", "fields", "maps", "description"}, "scenario");
    for (const char* key : {"id", "dim", "domain", "fields"})
        if (!j.contains(key)) throw SchemaError(std::string("scenario: missing key '") + key + "'");

    Scenario s;
    s.id = j["id"].get<std::string>();
    if (j.contains("description")) s.description = j["description"].get<std::string>();
    if (!j["dim"].is_number_integer() || j["dim"].get<int>() < 1)
        throw SchemaError("scenario: dim must be a positive integer");
    s.dim = j["dim"].get<int>();

    if (!j["domain"].is_array() || j["domain"].size() != static_cast<size_t>(s.dim))
        throw SchemaError("scenario: domain must list one [lo,hi] pair per dimension");
    Vector lo(s.dim), hi(s.dim);
    for (int i = 0; i < s.dim; ++i) {
        const auto& pair = j["domain"][static_cast<size_t>(i)];
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number())
            throw SchemaError("scenario: each domain entry must be [lo, hi]");
        lo[i] = pair[0].get<double>();
        hi[i] = pair[1].get<double>();
        if (!(lo[i] <= hi[i])) throw SchemaError("scenario: domain lo > hi");
    }
    s.domain = Box(lo, hi);

    if (!j["fields"].is_array()) throw SchemaError("scenario: fields must be an array");
    std::set<std::string> names;
    for (const auto& fj : j["fields"]) {
        if (!fj.is_object()) throw SchemaError("field: expected an object");
        reject_unknown_keys(fj, {"name", "kind", "payload"}, "field");
        for (const char* key : {"name", "kind", "payload"})
            if (!fj.contains(key)) throw SchemaError(std::string("field: missing key '") + key + "'");
        const std::string name = fj["name"].get<std::string>();
        if (!names.insert(name).second)
            throw SchemaError("field: duplicated name '" + name + "'");
        const std::string kind = fj["kind"].get<std::string>();
        const auto& payload = fj["payload"];

        VectorField field;
        if (kind == "matrix") {
            const Matrix A = parse_matrix(payload);
            if (A.rows() != s.dim || A.cols() != s.dim)
                throw SchemaError("field '" + name + "': generator must be " +
                                  std::to_string(s.dim) + "x" + std::to_string(s.dim));
            field = linear_generator_field(A, name);
        } else if (kind == "builtin_ref") {
            field = resolve_ref(payload, s.dim, "field '" + name + "'");
            field.name = name;
        } else if (kind == "lincomb") {
            reject_unknown_keys(payload, {"terms"}, "field '" + name + "'");
            if (!payload.contains("terms") || !payload["terms"].is_array() ||
                payload["terms"].empty())
                throw SchemaError("field '" + name + "': lincomb needs a non-empty 'terms' array");
            std::vector<std::pair<double, VectorField>> terms;
            for (const auto& tj : payload["terms"]) {
                reject_unknown_keys(tj, {"coeff", "scenario", "field"},
                                    "field '" + name + "' term");
                if (!tj.contains("coeff") || !tj["coeff"].is_number())
                    throw SchemaError("field '" + name + "': term needs a numeric 'coeff'");
                if (!tj.contains("scenario") || !tj.contains("field"))
                    throw SchemaError("field '" + name + "': term needs 'scenario' and 'field'");
                terms.emplace_back(tj["coeff"].get<double>(),
                                   resolve_ref({{"scenario", tj["scenario"]},
                                                {"field", tj["field"]}},
                                               s.dim, "field '" + name + "'"));
            }
            field = analytic_field(name, s.dim, [terms](const Vector& p) -> Vector {
                Vector v = Vector::Zero(static_cast<Eigen::Index>(terms.front().second.dim));
                for (const auto& [c, f] : terms) v += c * f.eval(p);
                return v;
            });
        } else {
            throw SchemaError("field '" + name + "': unknown kind '" + kind + "'");
        }
        s.fields.push_back(std::move(field));
        s.field_defs.push_back(nlohmann::json{{"kind", kind}, {"payload", payload}});
    }

    if (j.contains("maps")) {
        if (!j["maps"].is_array()) throw SchemaError("scenario: maps must be an array");
        for (const auto& mj : j["maps"]) {
            reject_unknown_keys(mj, {"name", "kind", "payload"}, "map");
            for (const char* key : {"name", "kind", "payload"})
                if (!mj.contains(key)) throw SchemaError(std::string("map: missing key '") + key + "'");
            if (mj["kind"].get<std::string>() != "builtin_ref")
                throw SchemaError("map: only builtin_ref maps are supported");
            const auto& payload = mj["payload"];
            reject_unknown_keys(payload, {"scenario", "map"}, "map");
            if (!payload.contains("scenario") || !payload.contains("map"))
                throw SchemaError("map: builtin_ref needs 'scenario' and 'map'");
            const Scenario src = load_builtin(payload["scenario"].get<std::string>());
            SmoothMap m = src.map(payload["map"].get<std::string>());
            m.id = mj["name"].get<std::string>();
            s.maps.push_back(std::move(m));
        }
    }
    return s;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open scenario file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError("scenario file '" + path + "': " + e.what());
    }
    return parse_scenario(j);
}

nlohmann::json serialize_scenario(const Scenario& s) {
    nlohmann::json j;
    j["id"] = s.id;
    if (!s.description.empty()) j["description"] = s.description;
    j["dim"] = s.dim;
    nlohmann::json dom = nlohmann::json::array();
    for (int i = 0; i < s.dim; ++i)
        dom.push_back(nlohmann::json::array({s.domain.lo[i], s.domain.hi[i]}));
    j["domain"] = dom;
    nlohmann::json fields = nlohmann::json::array();
    for (size_t i = 0; i < s.fields.size(); ++i) {
        nlohmann::json fj = s.field_defs[i];
        fj["name"] = s.fields[i].name;
        fields.push_back(fj);
    }
    j["fields"] = fields;
    return j;
}

}  // namespace commutant
