// commutant: batch CLI over the scenario registry.
//
// Subcommands: bracket, defect, expm, distill, mixture, paper-demo,
// scenario-validate.  Reports are deterministic JSON (sorted keys, 17
// significant digits); CSV is available for the flat-table commands.
// Exit codes: 0 success, 2 input/usage error, 3 mathematical precondition
// violation.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "commutant/distillation.hpp"
#include "commutant/geometry.hpp"
#include "commutant/group_actions.hpp"
#include "commutant/matrix_exp.hpp"
#include "commutant/prob_measures.hpp"
#include "commutant/report.hpp"
#include "commutant/scenario.hpp"

namespace cm = commutant;
using nlohmann::json;

namespace {

int g_max_threads = 0;  // 0 = unlimited; evaluation is currently sequential

cm::Vector parse_vector(const std::string& csv) {
    std::vector<double> vals;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument("bad number '" + tok + "'");
        vals.push_back(v);
    }
    if (vals.empty()) throw std::invalid_argument("empty vector argument");
    cm::Vector out(static_cast<Eigen::Index>(vals.size()));
    for (size_t i = 0; i < vals.size(); ++i) out[static_cast<Eigen::Index>(i)] = vals[i];
    return out;
}

std::vector<std::string> split_names(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(tok);
    return out;
}

std::vector<cm::Vector> sample_points(const cm::Box& box, int count, const std::string& kind) {
    std::vector<cm::Vector> pts;
    if (kind == "lowdisc") {
        for (int k = 0; k < count; ++k) pts.push_back(cm::kronecker_point(k, box));
    } else if (kind == "grid") {
        const int d = box.dim();
        const int per_axis = std::max(2, static_cast<int>(std::ceil(std::pow(count, 1.0 / d))));
        std::vector<int> idx(static_cast<size_t>(d), 0);
        while (true) {
            cm::Vector u(d);
            for (int a = 0; a < d; ++a)
                u[a] = static_cast<double>(idx[static_cast<size_t>(a)]) / (per_axis - 1);
            pts.push_back(box.from_unit(u));
            int a = 0;
            for (; a < d; ++a) {
                if (++idx[static_cast<size_t>(a)] < per_axis) break;
                idx[static_cast<size_t>(a)] = 0;
            }
            if (a == d) break;
        }
    } else {
        throw std::invalid_argument("unknown sample kind '" + kind + "'");
    }
    return pts;
}

json matrix_result(const cm::Matrix& M) { return cm::matrix_to_json(M); }

void emit(const json& report, const std::string& format, const std::string& out_path,
          const std::string& csv_text) {
    std::string text;
    if (format == "json") {
        text = cm::dump_deterministic(report) + "\n";
    } else if (format == "csv") {
        if (csv_text.empty())
            throw std::invalid_argument("csv output is not available for this subcommand");
        text = csv_text;
    } else {
        throw std::invalid_argument("unknown format '" + format + "'");
    }
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out_path);
        if (!f) throw std::invalid_argument("cannot open output file '" + out_path + "'");
        f << text;
    }
}

struct CommonOpts {
    std::string format = "json";
    std::string out_path;
    bool timing = false;
};

void add_common(CLI::App* sub, CommonOpts& opts) {
    sub->add_option("--format", opts.format, "Output format: json or csv")->default_val("json");
    sub->add_option("--out", opts.out_path, "Write the report to a file instead of stdout");
    sub->add_flag("--timing", opts.timing,
                  "Include wall time in the report (breaks byte-determinism)");
}

void finalize(json& report, const CommonOpts& opts,
              std::chrono::steady_clock::time_point start) {
    if (opts.timing) {
        const auto dt = std::chrono::steady_clock::now() - start;
        report["wall_time_ms"] =
            std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(dt).count();
    }
}

// --- subcommand bodies -----------------------------------------------------

int run_bracket(const std::string& scenario_id, const std::string& field_csv, int points,
                const std::string& sample_kind, double step, const CommonOpts& opts) {
    const auto start = std::chrono::steady_clock::now();
    const cm::Scenario sc = cm::load_builtin(scenario_id);
    std::vector<cm::VectorField> fields;
    if (field_csv.empty()) {
        fields = sc.fields;
    } else {
        for (const auto& name : split_names(field_csv)) fields.push_back(sc.field(name));
    }
    if (fields.size() < 2) throw std::invalid_argument("bracket needs at least two fields");
    const auto sample = sample_points(sc.domain, points, sample_kind);
    const cm::Matrix M = cm::commutativity_matrix(fields, sample, step);

    json results;
    json names = json::array();
    for (const auto& f : fields) names.push_back(f.name);
    results["fields"] = names;
    results["commutativity_matrix"] = matrix_result(M);
    json per_point = json::array();
    for (const auto& p : sample) {
        json entry;
        entry["point"] = cm::vector_to_json(p);
        json norms = json::array();
        for (size_t i = 0; i < fields.size(); ++i)
            for (size_t j = i + 1; j < fields.size(); ++j)
                norms.push_back(cm::lie_bracket(fields[i], fields[j], p, step).components.norm());
        entry["pair_bracket_norms"] = norms;
        per_point.push_back(entry);
    }
    results["per_point"] = per_point;

    json params{{"fields", field_csv.empty() ? "(all)" : field_csv},
                {"points", points},
                {"sample", sample_kind},
                {"step", step}};
    json report = cm::make_report("bracket", scenario_id, params, results);
    finalize(report, opts, start);

    std::ostringstream csv;
    csv << "field_i,field_j,max_bracket_norm\n";
    for (size_t i = 0; i < fields.size(); ++i)
        for (size_t j = i + 1; j < fields.size(); ++j)
            csv << fields[i].name << "," << fields[j].name << ","
                << cm::format_double(M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)))
                << "\n";
    emit(report, opts.format, opts.out_path, csv.str());
    return 0;
}

int run_defect(const std::string& scenario_id, const std::string& flow_i,
               const std::string& flow_j, double s, double t, int grid,
               const std::string& point_csv, const CommonOpts& opts) {
    const auto start = std::chrono::steady_clock::now();
    const cm::Scenario sc = cm::load_builtin(scenario_id);
    const cm::Flow& fi = sc.flow(flow_i);
    const cm::Flow& fj = sc.flow(flow_j);
    const cm::Vector p = point_csv.empty() ? sc.domain.center() : parse_vector(point_csv);

    json table = json::array();
    std::ostringstream csv;
    csv << "s,t,defect\n";
    for (int a = 0; a < grid; ++a)
        for (int b = 0; b < grid; ++b) {
            const double sa = grid == 1 ? s : s * (a + 1) / grid;
            const double tb = grid == 1 ? t : t * (b + 1) / grid;
            const double d = cm::flow_commutator_defect(fi, fj, sa, tb, p);
            table.push_back(json{{"s", sa}, {"t", tb}, {"defect", d}});
            csv << cm::format_double(sa) << "," << cm::format_double(tb) << ","
                << cm::format_double(d) << "\n";
        }

    json results{{"flow_i", flow_i}, {"flow_j", flow_j}, {"point", cm::vector_to_json(p)},
                 {"defects", table}};
    json params{{"s", s}, {"t", t}, {"grid", grid}};
    json report = cm::make_report("defect", scenario_id, params, results);
    finalize(report, opts, start);
    emit(report, opts.format, opts.out_path, csv.str());
    return 0;
}

cm::MatrixDictionary load_dictionary(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open dictionary file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw cm::SchemaError(std::string("dictionary file: ") + e.what());
    }
    if (!j.is_object() || !j.contains("generators") || !j["generators"].is_array())
        throw cm::SchemaError("dictionary file: expected {\"generators\": [matrix, ...]}");
    std::vector<cm::Matrix> gens;
    for (const auto& g : j["generators"]) gens.push_back(cm::parse_matrix(g));
    return cm::MatrixDictionary(std::move(gens));
}

int run_expm(const std::string& dict_path, const std::vector<std::string>& alphas,
             const std::string& mode, const std::string& point_csv, const CommonOpts& opts) {
    const auto start = std::chrono::steady_clock::now();
    const cm::MatrixDictionary dict = load_dictionary(dict_path);
    const auto [ok, worst] = cm::commutes(dict);

    json results;
    results["commutes"] = ok;
    results["max_commutator_norm"] = worst;

    std::optional<cm::Diagonalization> diag;
    if (mode == "fast" || mode == "both") {
        diag = cm::joint_diagonalize(dict);  // throws NonCommutingError when not
        results["diagonalization_residual"] = diag->residual;
        results["eigenvector_condition"] = diag->condition;
    }

    const cm::Vector p = point_csv.empty()
                             ? cm::Vector(cm::Vector::Ones(dict.n))
                             : parse_vector(point_csv);
    json sweep = json::array();
    for (const auto& a_csv : alphas) {
        const cm::Vector alpha = parse_vector(a_csv);
        if (alpha.size() != dict.count())
            throw std::invalid_argument("alpha needs " + std::to_string(dict.count()) +
                                        " coefficients");
        json entry;
        entry["alpha"] = cm::vector_to_json(alpha);
        cm::Matrix M = cm::Matrix::Zero(dict.n, dict.n);
        for (int i = 0; i < dict.count(); ++i) M += alpha[i] * dict.generators[static_cast<size_t>(i)];
        cm::Vector direct, fast;
        if (mode == "direct" || mode == "both") {
            const cm::Matrix E = cm::expm(M);
            direct = E * p;
            entry["operator"] = matrix_result(E);
            entry["applied_direct"] = cm::vector_to_json(direct);
        }
        if (mode == "fast" || mode == "both") {
            fast = cm::fast_apply(*diag, alpha, p);
            entry["applied_fast"] = cm::vector_to_json(fast);
        }
        if (mode == "both") entry["path_deviation"] = (direct - fast).norm();
        sweep.push_back(entry);
    }
    results["point"] = cm::vector_to_json(p);
    results["sweep"] = sweep;

    json params{{"dict", dict_path}, {"mode", mode}};
    json report = cm::make_report("expm", "", params, results);
    finalize(report, opts, start);
    emit(report, opts.format, opts.out_path, "");
    return 0;
}

int run_distill(const std::string& scenario_id, const std::string& map_name, int samples,
                double lo, double hi, double tol, const CommonOpts& opts) {
    const auto start = std::chrono::steady_clock::now();
    const cm::Scenario sc = cm::load_builtin(scenario_id);
    if (sc.maps.empty()) throw std::invalid_argument("scenario has no maps to distill");
    const cm::SmoothMap& f = map_name.empty() ? sc.maps.front() : sc.map(map_name);
    if (samples < 1) throw std::invalid_argument("distill needs at least one sample");

    std::vector<cm::Vector> pts;
    for (int k = 0; k < samples; ++k) {
        cm::Vector x(f.domain_dim);
        for (int a = 0; a < f.domain_dim; ++a)
            x[a] = lo + (hi - lo) * (samples == 1 ? 0.0 : static_cast<double>(k) / (samples - 1));
        pts.push_back(x);
    }
    const cm::Atlas atlas = cm::build_atlas(f, pts, tol);

    json charts = json::array();
    for (const auto& c : atlas.charts) {
        json cj;
        cj["chart_id"] = c.chart_id;
        cj["base_point"] = cm::vector_to_json(c.base);
        cj["selected_indices"] = c.selected;
        cj["frozen_values"] = cm::vector_to_json(c.frozen);
        cj["radius"] = c.radius;
        charts.push_back(cj);
    }
    json results;
    results["map"] = f.id;
    results["chart_count"] = static_cast<int>(atlas.charts.size());
    results["atlas"] = charts;
    results["rank_at_first_sample"] = cm::local_rank(f, pts.front(), tol).rank;

    json params{{"samples", samples}, {"lo", lo}, {"hi", hi}, {"tol", tol}};
    json report = cm::make_report("distill", scenario_id, params, results);
    finalize(report, opts, start);
    emit(report, opts.format, opts.out_path, "");
    return 0;
}

int run_mixture(const std::string& scenario_id, const std::string& flow_csv,
                const std::string& T_csv, const std::string& point_csv, double sigma,
                const CommonOpts& opts) {
    const auto start = std::chrono::steady_clock::now();
    const cm::Scenario sc = cm::load_builtin(scenario_id);
    std::vector<cm::Flow> flows;
    if (flow_csv.empty()) {
        flows = sc.flows;
    } else {
        for (const auto& name : split_names(flow_csv)) flows.push_back(sc.flow(name));
    }
    if (flows.size() > 6)
        throw std::invalid_argument("mixture supports at most 6 factors (k! enumeration)");
    const cm::Vector T = T_csv.empty()
                             ? cm::Vector(cm::Vector::Constant(static_cast<Eigen::Index>(flows.size()), 0.5))
                             : parse_vector(T_csv);
    const cm::Vector p = point_csv.empty() ? sc.domain.center() : parse_vector(point_csv);
    const cm::GaussianLikelihoodFamily fam(sigma, sc.dim);
    const cm::MixtureReport rep = cm::mixture_likelihood(flows, T, p, {}, fam);

    json means = json::array();
    for (const auto& m : rep.means) means.push_back(cm::vector_to_json(m));
    json results{{"means", means},
                 {"weights", rep.weights},
                 {"collapsed", rep.collapsed},
                 {"max_separation", rep.max_separation}};
    json params{{"flows", flow_csv.empty() ? "(all)" : flow_csv},
                {"T", cm::vector_to_json(T)},
                {"point", cm::vector_to_json(p)},
                {"sigma", sigma}};
    json report = cm::make_report("mixture", scenario_id, params, results);
    finalize(report, opts, start);

    std::ostringstream csv;
    csv << "component,weight";
    for (int d = 0; d < sc.dim; ++d) csv << ",mean_" << d;
    csv << "\n";
    for (size_t i = 0; i < rep.means.size(); ++i) {
        csv << i << "," << cm::format_double(rep.weights[i]);
        for (int d = 0; d < sc.dim; ++d) csv << "," << cm::format_double(rep.means[i][d]);
        csv << "\n";
    }
    emit(report, opts.format, opts.out_path, csv.str());
    return 0;
}

int run_paper_demo(double tol, const CommonOpts& opts) {
    const auto start = std::chrono::steady_clock::now();
    json results;
    std::ostringstream csv;
    csv << "section,i,j,value\n";

    // Commutativity matrices of the translation pair and the se(2) generators.
    const cm::Scenario plane = cm::load_builtin("plane_translations");
    const cm::Scenario se2 = cm::load_builtin("se2_generators");
    const auto plane_sample = sample_points(plane.domain, 25, "lowdisc");
    const auto se2_sample = sample_points(cm::Box::cube(3, -1.0, 1.0), 25, "lowdisc");
    const cm::Matrix Mp = cm::commutativity_matrix(plane.fields, plane_sample);
    const cm::Matrix Ms = cm::commutativity_matrix(se2.fields, se2_sample);
    results["translations_commutativity_matrix"] = matrix_result(Mp);
    results["se2_commutativity_matrix"] = matrix_result(Ms);
    for (Eigen::Index i = 0; i < Ms.rows(); ++i)
        for (Eigen::Index j = 0; j < Ms.cols(); ++j)
            csv << "se2_commutativity," << i << "," << j << "," << cm::format_double(Ms(i, j))
                << "\n";
    for (Eigen::Index i = 0; i < Mp.rows(); ++i)
        for (Eigen::Index j = 0; j < Mp.cols(); ++j)
            csv << "translations_commutativity," << i << "," << j << ","
                << cm::format_double(Mp(i, j)) << "\n";

    // Frame fields of the chart g commute; the generator fields do not.
    const cm::Scenario chart = cm::load_builtin("se2_chart_g");
    const auto frames = cm::frame_fields(chart.maps.front());
    const auto frame_sample = sample_points(cm::Box::cube(3, -0.5, 0.5), 10, "lowdisc");
    const cm::Matrix Mf = cm::commutativity_matrix(frames, frame_sample);
    results["frame_fields_max_bracket"] = Mf.maxCoeff();

    // Order-of-application defect curves at the origin.
    json curve = json::array();
    const cm::Flow& rot = se2.flow("rotation");
    const cm::Flow& trx = se2.flow("translate_x");
    const cm::Vector origin = cm::Vector::Zero(3);
    for (double s : {0.05, 0.1, 0.2, 0.3, 0.4, 0.5}) {
        const double d = cm::flow_commutator_defect(rot, trx, s, s, origin);
        curve.push_back(json{{"s", s}, {"defect", d}, {"defect_over_s2", d / (s * s)}});
        csv << "defect_curve,0,0," << cm::format_double(d) << "\n";
    }
    results["rotation_translation_defect_curve"] = curve;

    // Permutation-mixture collapse on both factor sets.
    const cm::GaussianLikelihoodFamily fam2(0.1, 2);
    const cm::GaussianLikelihoodFamily fam3(0.1, 3);
    cm::Vector T2(2);
    T2 << 0.5, 0.5;
    const cm::Scenario rt = cm::load_builtin("plane_rot_trans");
    const auto mix_commuting = cm::mixture_likelihood(
        {plane.flows[0], plane.flows[1]}, T2, cm::Vector::Zero(2), {}, fam2);
    const auto mix_noncommuting = cm::mixture_likelihood(
        {rt.flow("rotation"), rt.flow("translate_x")}, T2, cm::Vector::Zero(2), {}, fam2);
    results["mixture_collapsed_translations"] = mix_commuting.collapsed;
    results["mixture_collapsed_rotation_translation"] = mix_noncommuting.collapsed;
    results["mixture_separation_rotation_translation"] = mix_noncommuting.max_separation;
    (void)fam3;

    // Headline booleans, threshold-controlled.
    double se2_offdiag = 0.0, plane_offdiag = 0.0;
    for (Eigen::Index i = 0; i < Ms.rows(); ++i)
        for (Eigen::Index j = 0; j < Ms.cols(); ++j)
            if (i != j) se2_offdiag = std::max(se2_offdiag, Ms(i, j));
    for (Eigen::Index i = 0; i < Mp.rows(); ++i)
        for (Eigen::Index j = 0; j < Mp.cols(); ++j)
            if (i != j) plane_offdiag = std::max(plane_offdiag, Mp(i, j));
    results["se2_noncommutative"] = se2_offdiag > tol;
    results["translations_commute"] = plane_offdiag <= tol;
    csv << "assertions,0,0," << (se2_offdiag > tol ? 1 : 0) << "\n";
    csv << "assertions,0,1," << (plane_offdiag <= tol ? 1 : 0) << "\n";

    json params{{"tol", tol}};
    json report = cm::make_report("paper-demo", "", params, results);
    finalize(report, opts, start);
    emit(report, opts.format, opts.out_path, csv.str());
    return 0;
}

int run_validate(const std::string& path, const CommonOpts& opts) {
    const auto start = std::chrono::steady_clock::now();
    const cm::Scenario sc = cm::load_scenario_file(path);
    json results{{"id", sc.id},
                 {"dim", sc.dim},
                 {"field_count", static_cast<int>(sc.fields.size())},
                 {"map_count", static_cast<int>(sc.maps.size())},
                 {"valid", true}};
    json report = cm::make_report("scenario-validate", sc.id, json{{"file", path}}, results);
    finalize(report, opts, start);
    emit(report, opts.format, opts.out_path, "");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* env = std::getenv("COMMUTANT_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1) {
            std::cerr << "COMMUTANT_THREADS must be a positive integer\n";
            return 2;
        }
        g_max_threads = static_cast<int>(v);
    }

    CLI::App app{"commutant: numerical tests of factor-of-variation commutativity"};
    app.require_subcommand(1);

    CommonOpts opts;

    // bracket
    auto* bracket = app.add_subcommand("bracket", "Commutativity matrix of scenario fields");
    std::string scenario_id, field_csv, sample_kind = "lowdisc";
    int points = 25;
    double step = 0.0;
    bracket->add_option("--scenario", scenario_id, "Builtin scenario id")->required();
    bracket->add_option("--fields", field_csv, "Comma-separated field names (default: all)");
    bracket->add_option("--points", points, "Sample point count")->default_val(25);
    bracket->add_option("--sample", sample_kind, "Sampling: lowdisc or grid")->default_val("lowdisc");
    bracket->add_option("--step", step, "Finite-difference step (0 = automatic)")->default_val(0.0);
    add_common(bracket, opts);

    // defect
    auto* defect = app.add_subcommand("defect", "Order-of-application defect of two flows");
    std::string flow_i, flow_j, point_csv;
    double s_arg = 0.5, t_arg = 0.5;
    int grid = 1;
    defect->add_option("--scenario", scenario_id, "Builtin scenario id")->required();
    defect->add_option("--flow-i", flow_i, "First flow name")->required();
    defect->add_option("--flow-j", flow_j, "Second flow name")->required();
    defect->add_option("--s", s_arg, "Flow-i time")->default_val(0.5);
    defect->add_option("--t", t_arg, "Flow-j time")->default_val(0.5);
    defect->add_option("--grid", grid, "Evaluate on a grid x grid table up to (s,t)")->default_val(1);
    defect->add_option("--point", point_csv, "Base point (comma-separated; default: box center)");
    add_common(defect, opts);

    // expm
    auto* expm_cmd = app.add_subcommand("expm", "Matrix-exponential dictionary analysis");
    std::string dict_path, mode = "both";
    std::vector<std::string> alphas;
    expm_cmd->add_option("--dict", dict_path, "Dictionary JSON file")->required();
    expm_cmd->add_option("--alpha", alphas, "Coefficient vector (repeatable)")->required();
    expm_cmd->add_option("--mode", mode, "direct, fast, or both")->default_val("both");
    expm_cmd->add_option("--point", point_csv, "Data point to apply operators to");
    add_common(expm_cmd, opts);

    // distill
    auto* distill = app.add_subcommand("distill", "Local rank analysis and atlas construction");
    std::string map_name;
    int samples = 100;
    double lo = 0.0, hi = 2.0, tol = 1e-8;
    distill->add_option("--scenario", scenario_id, "Builtin scenario id")->required();
    distill->add_option("--map", map_name, "Map name (default: the scenario's first map)");
    distill->add_option("--samples", samples, "Sample count along the diagonal segment")->default_val(100);
    distill->add_option("--lo", lo, "Sample segment start")->default_val(0.0);
    distill->add_option("--hi", hi, "Sample segment end")->default_val(2.0);
    distill->add_option("--tol", tol, "Relative rank tolerance")->default_val(1e-8);
    add_common(distill, opts);

    // mixture
    auto* mixture = app.add_subcommand("mixture", "Permutation-mixture likelihood components");
    std::string flow_csv, T_csv;
    double sigma = 0.1;
    mixture->add_option("--scenario", scenario_id, "Builtin scenario id")->required();
    mixture->add_option("--flows", flow_csv, "Comma-separated flow names (default: all)");
    mixture->add_option("--T", T_csv, "Factor times (default: 0.5 each)");
    mixture->add_option("--point", point_csv, "Base point (default: box center)");
    mixture->add_option("--sigma", sigma, "Gaussian noise scale")->default_val(0.1);
    add_common(mixture, opts);

    // paper-demo
    auto* demo = app.add_subcommand("paper-demo",
                                    "Rotation/translation narrative: brackets, defects, mixtures");
    double demo_tol = 1e-6;
    demo->add_option("--tol", demo_tol, "Commutativity threshold")->default_val(1e-6);
    add_common(demo, opts);

    // scenario-validate
    auto* validate = app.add_subcommand("scenario-validate", "Validate a scenario JSON file");
    std::string file_path;
    validate->add_option("--file", file_path, "Scenario file path")->required();
    add_common(validate, opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (bracket->parsed())
            return run_bracket(scenario_id, field_csv, points, sample_kind, step, opts);
        if (defect->parsed())
            return run_defect(scenario_id, flow_i, flow_j, s_arg, t_arg, grid, point_csv, opts);
        if (expm_cmd->parsed()) return run_expm(dict_path, alphas, mode, point_csv, opts);
        if (distill->parsed())
            return run_distill(scenario_id, map_name, samples, lo, hi, tol, opts);
        if (mixture->parsed())
            return run_mixture(scenario_id, flow_csv, T_csv, point_csv, sigma, opts);
        if (demo->parsed()) return run_paper_demo(demo_tol, opts);
        if (validate->parsed()) return run_validate(file_path, opts);
    } catch (const cm::NonCommutingError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const cm::RankDeficientError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const cm::DomainExitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const cm::DefectiveGeneratorError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const cm::NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
