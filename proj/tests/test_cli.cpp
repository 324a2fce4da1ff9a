#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

using nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " " + std::string(COMMUTANT_BIN) + " " + args + " 2>/dev/null";
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string golden(const char* name) {
    return slurp(std::string(COMMUTANT_GOLDEN_DIR) + "/" + name);
}

std::string data_file(const char* name) {
    return std::string(COMMUTANT_DATA_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("usage and exit codes") {
    CHECK(run("--help").exit_code == 0);
    CHECK(run("").exit_code == 2);
    CHECK(run("no-such-subcommand").exit_code == 2);
    CHECK(run("bracket").exit_code == 2);                          // missing --scenario
    CHECK(run("bracket --scenario no_such_scenario").exit_code == 2);
    CHECK(run("bracket --scenario plane_translations --sample bogus").exit_code == 2);
    CHECK(run("bracket --scenario plane_translations --format yaml").exit_code == 2);
}

TEST_CASE("COMMUTANT_THREADS validation") {
    CHECK(run("paper-demo", "COMMUTANT_THREADS=2").exit_code == 0);
    CHECK(run("paper-demo", "COMMUTANT_THREADS=abc").exit_code == 2);
    CHECK(run("paper-demo", "COMMUTANT_THREADS=0").exit_code == 2);
    CHECK(run("paper-demo", "COMMUTANT_THREADS=-3").exit_code == 2);
}

TEST_CASE("bracket is byte-deterministic and matches the golden report") {
    const std::string cmd = "bracket --scenario plane_translations --points 4";
    const RunResult a = run(cmd);
    const RunResult b = run(cmd);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == golden("bracket_plane_translations.json"));

    const json j = json::parse(a.out);
    CHECK(j["command"] == "bracket");
    CHECK(j["scenario"] == "plane_translations");
    for (const auto& row : j["results"]["commutativity_matrix"])
        for (const auto& v : row) CHECK(v.get<double>() == 0.0);
}

TEST_CASE("bracket reports non-commuting pairs") {
    const RunResult r = run("bracket --scenario se2_generators --points 9");
    CHECK(r.exit_code == 0);
    const json j = json::parse(r.out);
    const auto& M = j["results"]["commutativity_matrix"];
    CHECK(M[0][1].get<double>() > 0.5);   // rotation vs translate_x
    CHECK(M[1][2].get<double>() == 0.0);  // the two translations
    CHECK(M[0][0].get<double>() == 0.0);
}

TEST_CASE("bracket csv output") {
    const RunResult r = run("bracket --scenario plane_translations --points 4 --format csv");
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("field_i,field_j,max_bracket_norm\n", 0) == 0);
    CHECK(r.out.find("translate_x,translate_y,0") != std::string::npos);
}

TEST_CASE("defect subcommand") {
    const RunResult r =
        run("defect --scenario se2_generators --flow-i rotation --flow-j translate_x "
            "--s 0.1 --t 0.1 --point 0,0,0");
    CHECK(r.exit_code == 0);
    const json j = json::parse(r.out);
    const double d = j["results"]["defects"][0]["defect"].get<double>();
    CHECK(d == doctest::Approx(0.01).epsilon(0.10));

    const RunResult commuting =
        run("defect --scenario plane_translations --flow-i translate_x --flow-j translate_y");
    CHECK(commuting.exit_code == 0);
    CHECK(json::parse(commuting.out)["results"]["defects"][0]["defect"].get<double>() == 0.0);

    const RunResult csv =
        run("defect --scenario plane_translations --flow-i translate_x --flow-j translate_y "
            "--grid 3 --format csv");
    CHECK(csv.exit_code == 0);
    CHECK(csv.out.rfind("s,t,defect\n", 0) == 0);

    // Leaving the domain box is a math-precondition failure: exit 3.
    CHECK(run("defect --scenario se2_generators --flow-i translate_x --flow-j translate_y "
              "--s 4 --point 0,0,0")
              .exit_code == 3);
}

TEST_CASE("expm subcommand") {
    const RunResult r = run("expm --dict " + data_file("commuting_dict.json") +
                            " --alpha 0.5,0.25 --mode both");
    CHECK(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j["results"]["commutes"] == true);
    CHECK(j["results"]["sweep"][0]["path_deviation"].get<double>() < 1e-10);
    // Diagonal dictionary: exp(0.5*diag(1,2) + 0.25*diag(-0.5,1.5)) applied to ones.
    const double m0 = 0.5 * 1.0 + 0.25 * -0.5;
    const double m1 = 0.5 * 2.0 + 0.25 * 1.5;
    CHECK(j["results"]["sweep"][0]["applied_direct"][0].get<double>() ==
          doctest::Approx(std::exp(m0)).epsilon(1e-12));
    CHECK(j["results"]["sweep"][0]["applied_direct"][1].get<double>() ==
          doctest::Approx(std::exp(m1)).epsilon(1e-12));

    // Fast path on a non-commuting dictionary is a math error: exit 3.
    CHECK(run("expm --dict " + data_file("noncommuting_dict.json") +
              " --alpha 1,0 --mode fast")
              .exit_code == 3);
    // Direct mode has no commutativity precondition.
    const RunResult direct = run("expm --dict " + data_file("noncommuting_dict.json") +
                                 " --alpha 1,0 --mode direct");
    CHECK(direct.exit_code == 0);
    CHECK(json::parse(direct.out)["results"]["commutes"] == false);

    CHECK(run("expm --dict /nonexistent.json --alpha 1").exit_code == 2);
    CHECK(run("expm --dict " + data_file("commuting_dict.json") + " --alpha 1,2,3").exit_code ==
          2);
    CHECK(run("expm --dict " + data_file("commuting_dict.json") +
              " --alpha 1,0 --format csv")
              .exit_code == 2);  // no csv table for expm
}

TEST_CASE("distill subcommand matches the golden atlas") {
    const std::string cmd = "distill --scenario circle_cover --samples 100";
    const RunResult a = run(cmd);
    const RunResult b = run(cmd);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == golden("distill_circle_cover.json"));

    const json j = json::parse(a.out);
    CHECK(j["results"]["chart_count"] == 2);
    CHECK(j["results"]["rank_at_first_sample"] == 1);
    for (const auto& chart : j["results"]["atlas"]) CHECK(chart["radius"].get<double>() == 1.0);

    CHECK(run("distill --scenario circle_cover --samples 0").exit_code == 2);
    CHECK(run("distill --scenario plane_translations").exit_code == 2);  // no maps
}

TEST_CASE("mixture subcommand") {
    const RunResult r = run("mixture --scenario plane_translations --point 0,0");
    CHECK(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j["results"]["collapsed"] == true);
    CHECK(j["results"]["means"].size() == 2);

    const RunResult nc = run(
        "mixture --scenario plane_rot_trans --flows rotation,translate_x --point 0.5,0.5");
    CHECK(nc.exit_code == 0);
    const json jn = json::parse(nc.out);
    CHECK(jn["results"]["collapsed"] == false);
    CHECK(jn["results"]["max_separation"].get<double>() > 0.05);

    const RunResult csv = run("mixture --scenario plane_translations --point 0,0 --format csv");
    CHECK(csv.exit_code == 0);
    CHECK(csv.out.rfind("component,weight,mean_0,mean_1\n", 0) == 0);

    CHECK(run("mixture --scenario plane_translations --T 1,2,3").exit_code == 2);
}

TEST_CASE("paper-demo headline assertions and golden report") {
    const RunResult a = run("paper-demo");
    const RunResult b = run("paper-demo");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == golden("paper_demo.json"));

    const json j = json::parse(a.out);
    CHECK(j["results"]["se2_noncommutative"] == true);
    CHECK(j["results"]["translations_commute"] == true);
    CHECK(j["results"]["mixture_collapsed_translations"] == true);
    CHECK(j["results"]["mixture_collapsed_rotation_translation"] == false);
    CHECK(j["results"]["frame_fields_max_bracket"].get<double>() < 1e-5);
    // Defect curve: defect/s^2 approaches the bracket norm (1) as s -> 0.
    const auto& curve = j["results"]["rotation_translation_defect_curve"];
    CHECK(curve[0]["defect_over_s2"].get<double>() == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("scenario-validate") {
    const RunResult ok = run("scenario-validate --file " + data_file("mixed_scenario.json"));
    CHECK(ok.exit_code == 0);
    const json j = json::parse(ok.out);
    CHECK(j["results"]["valid"] == true);
    CHECK(j["results"]["field_count"] == 3);

    CHECK(run("scenario-validate --file " + data_file("bad_unknown_key.json")).exit_code == 2);
    CHECK(run("scenario-validate --file " + data_file("bad_not_json.json")).exit_code == 2);
    CHECK(run("scenario-validate --file /nonexistent.json").exit_code == 2);
}

TEST_CASE("--timing adds wall time, --out writes a file") {
    const RunResult timed = run("paper-demo --timing");
    CHECK(timed.exit_code == 0);
    CHECK(json::parse(timed.out).contains("wall_time_ms"));
    CHECK_FALSE(json::parse(run("paper-demo").out).contains("wall_time_ms"));

    const std::string path = "/tmp/commutant_cli_out.json";
    std::remove(path.c_str());
    const RunResult r = run("bracket --scenario plane_translations --points 4 --out " + path);
    CHECK(r.exit_code == 0);
    CHECK(r.out.empty());
    CHECK(slurp(path) == golden("bracket_plane_translations.json"));
    std::remove(path.c_str());
}
