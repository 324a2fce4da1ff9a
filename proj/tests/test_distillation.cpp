#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "commutant/distillation.hpp"
#include "commutant/scenario.hpp"

using namespace commutant;

namespace {

SmoothMap projection_3_to_2() {
    SmoothMap f;
    f.id = "proj";
    f.domain_dim = 3;
    f.codomain_dim = 2;
    f.domain = Box::cube(3, -4.0, 4.0);
    f.eval = [](const Vector& x) -> Vector { return x.head(2); };
    return f;
}

SmoothMap collapse_2_to_2() {
    SmoothMap f;
    f.id = "collapse";
    f.domain_dim = 2;
    f.codomain_dim = 2;
    f.domain = Box::cube(2, -4.0, 4.0);
    f.eval = [](const Vector& x) -> Vector {
        Vector y(2);
        y << x[0], x[0];
        return y;
    };
    return f;
}

SmoothMap sum_2_to_1() {
    SmoothMap f;
    f.id = "sum";
    f.domain_dim = 2;
    f.codomain_dim = 1;
    f.domain = Box::cube(2, -4.0, 4.0);
    f.eval = [](const Vector& x) -> Vector {
        Vector y(1);
        y << x[0] + x[1];
        return y;
    };
    return f;
}

}  // namespace

TEST_CASE("rank_report") {
    Matrix D = Matrix::Zero(2, 2);
    D(0, 0) = 3.0;
    D(1, 1) = 1.0;
    RankReport r = rank_report(D, Vector::Zero(2), 1e-8);
    CHECK(r.rank == 2);
    REQUIRE(r.singular_values.size() == 2);
    CHECK(r.singular_values[0] == doctest::Approx(3.0));
    CHECK(r.singular_values[1] == doctest::Approx(1.0));

    CHECK(rank_report(Matrix::Zero(3, 3), Vector::Zero(3), 1e-8).rank == 0);

    Matrix ones = Matrix::Ones(2, 2);
    CHECK(rank_report(ones, Vector::Zero(2), 1e-8).rank == 1);
}

TEST_CASE("local_rank on known maps") {
    const SmoothMap circle = load_builtin("circle_cover").map("circle");
    Vector t(1);
    t << 0.15;
    RankReport r = local_rank(circle, t);
    CHECK(r.rank == 1);
    CHECK(r.singular_values[0] == doctest::Approx(2.0 * M_PI).epsilon(1e-9));

    CHECK(local_rank(projection_3_to_2(), Vector::Zero(3)).rank == 2);
    CHECK(local_rank(collapse_2_to_2(), Vector::Zero(2)).rank == 1);
    CHECK(local_rank(load_builtin("se2_chart_g").map("g"), Vector::Zero(3)).rank == 3);
}

TEST_CASE("distill_at immersion keeps every latent") {
    const SmoothMap circle = load_builtin("circle_cover").map("circle");
    Vector t(1);
    t << 0.25;
    LocalDistillation d = distill_at(circle, t);
    CHECK(d.selected == std::vector<int>{0});
    CHECK(d.complement.empty());
    CHECK(d.radius == 1.0);  // full rank everywhere, feasibility shortcut
    Vector w(1);
    w << 0.5;
    CHECK((evaluate_distilled(d, circle, w) - circle.eval(w)).norm() == 0.0);
    w << 1.5;
    CHECK_THROWS_AS(evaluate_distilled(d, circle, w), std::domain_error);
    CHECK_THROWS_AS(evaluate_distilled(d, circle, Vector::Zero(2)), DimensionError);
}

TEST_CASE("distill_at submersion freezes the complement") {
    const SmoothMap proj = projection_3_to_2();
    Vector x(3);
    x << 0.2, -0.4, 1.3;
    LocalDistillation d = distill_at(proj, x);
    REQUIRE(d.selected.size() == 2);
    for (int idx : d.selected) CHECK(idx < 2);  // third column of J is zero
    CHECK(d.complement == std::vector<int>{2});
    CHECK(d.frozen.size() == 1);
    CHECK(d.frozen[0] == 1.3);
    CHECK(d.radius == 1.0);
}

TEST_CASE("distill_at rejects rank-deficient maps") {
    CHECK_THROWS_AS(distill_at(collapse_2_to_2(), Vector::Zero(2)), RankDeficientError);
}

TEST_CASE("distill_at shrinks the radius near the domain boundary") {
    SmoothMap f;
    f.id = "square";
    f.domain_dim = f.codomain_dim = 1;
    f.domain = Box::cube(1, 0.0, 4.0);
    f.eval = [](const Vector& x) -> Vector {
        Vector y(1);
        y << x[0] * x[0];
        return y;
    };
    Vector x(1);
    x << 0.5;  // probes at radius 1 would leave [0, 4]
    LocalDistillation d = distill_at(f, x);
    CHECK(d.radius < 1.0);
    CHECK(d.radius > 0.1);
}

TEST_CASE("build_atlas covers the circle samples with two charts") {
    const SmoothMap circle = load_builtin("circle_cover").map("circle");
    std::vector<Vector> samples;
    for (int i = 0; i < 100; ++i) {
        Vector t(1);
        t << 2.0 * i / 99.0;
        samples.push_back(t);
    }
    Atlas atlas = build_atlas(circle, samples);
    CHECK(atlas.charts.size() == 2);
    CHECK(atlas.covered.size() == samples.size());
    for (const Vector& s : samples) {
        bool covered = false;
        for (const auto& chart : atlas.charts) covered = covered || chart_covers(chart, s);
        CHECK(covered);
    }
    for (const auto& chart : atlas.charts) CHECK(chart.radius == 1.0);
    CHECK(atlas.charts[0].chart_id == 0);
    CHECK(atlas.charts[1].chart_id == 1);
}

TEST_CASE("match_sample reproduces the image of covered samples") {
    const SmoothMap circle = load_builtin("circle_cover").map("circle");
    std::vector<Vector> samples;
    for (int i = 0; i < 20; ++i) {
        Vector t(1);
        t << 2.0 * i / 19.0;
        samples.push_back(t);
    }
    Atlas atlas = build_atlas(circle, samples);
    for (const Vector& s : samples) {
        for (const auto& chart : atlas.charts) {
            if (!chart_covers(chart, s)) continue;
            const Vector w = match_sample(chart, circle, s);
            CHECK((evaluate_distilled(chart, circle, w) - circle.eval(s)).norm() < 1e-9);
        }
    }

    // Submersion with a frozen coordinate: the witness must compensate for it.
    const SmoothMap sum = sum_2_to_1();
    Vector base(2);
    base << 0.0, 0.0;
    LocalDistillation d = distill_at(sum, base);
    Vector s(2);
    s << 0.3, 0.4;
    const Vector w = match_sample(d, sum, s);
    CHECK((evaluate_distilled(d, sum, w) - sum.eval(s)).norm() < 1e-10);
}
