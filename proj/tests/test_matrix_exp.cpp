#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "commutant/matrix_exp.hpp"

using namespace commutant;

namespace {

// Independent oracle: order-60 Taylor series with repeated halving, accurate
// to ~1e-12 for ||A||_F <= 2.
Matrix expm_taylor(const Matrix& A) {
    int halvings = 0;
    Matrix S = A;
    while (S.norm() > 0.5 && halvings < 40) {
        S *= 0.5;
        ++halvings;
    }
    Matrix term = Matrix::Identity(A.rows(), A.cols());
    Matrix sum = term;
    for (int k = 1; k <= 60; ++k) {
        term = term * S / static_cast<double>(k);
        sum += term;
    }
    for (int k = 0; k < halvings; ++k) sum = sum * sum;
    return sum;
}

Matrix rand_matrix(std::mt19937_64& rng, int n, double fro) {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = g(rng);
    if (A.norm() > 0) A *= fro / A.norm();
    return A;
}

}  // namespace

TEST_CASE("expm golden values") {
    CHECK((expm(Matrix::Zero(3, 3)) - Matrix::Identity(3, 3)).norm() == 0.0);

    Matrix D = Matrix::Zero(2, 2);
    D(0, 0) = 1.0;
    D(1, 1) = -2.0;
    Matrix E = expm(D);
    CHECK(E(0, 0) == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
    CHECK(E(1, 1) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
    CHECK(std::abs(E(0, 1)) < 1e-15);

    Matrix N(2, 2);
    N << 0, 1, 0, 0;
    Matrix EN = expm(N);  // I + N exactly for nilpotent N
    CHECK(EN(0, 0) == doctest::Approx(1.0));
    CHECK(EN(0, 1) == doctest::Approx(1.0));
    CHECK(EN(1, 0) == doctest::Approx(0.0));
    CHECK(EN(1, 1) == doctest::Approx(1.0));

    const double th = 0.73;
    Matrix J(2, 2);
    J << 0, -th, th, 0;
    Matrix R = expm(J);
    CHECK(R(0, 0) == doctest::Approx(std::cos(th)).epsilon(1e-14));
    CHECK(R(1, 0) == doctest::Approx(std::sin(th)).epsilon(1e-14));
}

TEST_CASE("expm vs Taylor oracle and inverse law") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 5);
        const double fro = 0.1 + 1.9 * (trial / 24.0);
        const Matrix A = rand_matrix(rng, n, fro);
        const Matrix E = expm(A);
        CHECK((E - expm_taylor(A)).norm() / expm_taylor(A).norm() < 1e-9);
        CHECK((E * expm(-A) - Matrix::Identity(n, n)).norm() < 1e-10);
    }
    // Larger norm exercises the squaring phase: exp(2A) must equal exp(A)^2.
    const Matrix B = rand_matrix(rng, 4, 8.0);
    const Matrix E2 = expm(2.0 * B);
    CHECK((E2 - expm(B) * expm(B)).norm() / E2.norm() < 1e-10);
}

TEST_CASE("MatrixDictionary validation") {
    Matrix A(2, 2), B(2, 2);
    A << 1, 0, 0, 0;
    B << 0, 1, 0, 0;
    CHECK(MatrixDictionary({A, B}).count() == 2);
    CHECK(MatrixDictionary({A, B}).n == 2);

    CHECK_THROWS(MatrixDictionary({A, 2.0 * A}));                 // dependent
    CHECK_THROWS(MatrixDictionary({A, Matrix::Zero(3, 3)}));      // shape mismatch
    CHECK_THROWS(MatrixDictionary({Matrix::Zero(2, 3)}));         // not square
    CHECK_THROWS(MatrixDictionary({Matrix::Zero(2, 2)}));         // zero not independent
    CHECK_THROWS(MatrixDictionary(std::vector<Matrix>{}));        // empty
}

TEST_CASE("commutes") {
    Matrix D1 = Vector::LinSpaced(3, 1.0, 3.0).asDiagonal();
    Matrix D2 = Vector::LinSpaced(3, -1.0, 5.0).asDiagonal();
    auto [ok, norm] = commutes(MatrixDictionary({D1, D2}));
    CHECK(ok);
    CHECK(norm < 1e-14);

    Matrix X(2, 2), Z(2, 2);
    X << 0, 1, 1, 0;
    Z << 1, 0, 0, -1;
    auto [ok2, norm2] = commutes(MatrixDictionary({X, Z}));
    CHECK_FALSE(ok2);
    // [Z,X] = 2 * [[0,1],[-1,0]], Frobenius norm 2*sqrt(2).
    CHECK(norm2 == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));

    CHECK(default_commute_tol(MatrixDictionary({X, Z})) ==
          doctest::Approx(1e-10 * 2.0).epsilon(1e-12));  // max ||.||_F^2 = 2
}

TEST_CASE("joint_diagonalize and fast_apply") {
    // Commuting pair sharing an eigenbasis.
    Matrix Q(3, 3);
    Q << 1, 1, 0, 1, -1, 1, 0, 1, 1;
    Matrix Qi = Q.inverse();
    Matrix A = Q * Vector::LinSpaced(3, 1.0, 3.0).asDiagonal() * Qi;
    Matrix B = Q * Vector::LinSpaced(3, -2.0, 0.5).asDiagonal() * Qi;
    MatrixDictionary dict({A, B});

    Diagonalization dg = joint_diagonalize(dict);
    CHECK(dg.residual < 1e-8);
    CHECK(dg.condition < 1e8);
    CHECK(dg.diags.size() == 2);

    Vector alpha(2);
    alpha << 0.3, -0.7;
    Vector p(3);
    p << 1.0, 2.0, -0.5;
    const Matrix M = alpha[0] * A + alpha[1] * B;
    CHECK((fast_apply(dg, alpha, p) - expm(M) * p).norm() < 1e-8);

    // Non-commuting input is rejected up front.
    Matrix X(2, 2), Z(2, 2);
    X << 0, 1, 1, 0;
    Z << 1, 0, 0, -1;
    CHECK_THROWS_AS(joint_diagonalize(MatrixDictionary({X, Z})), NonCommutingError);

    // A defective generator (single Jordan block) has no eigenbasis.
    Matrix N(2, 2);
    N << 0, 1, 0, 0;
    CHECK_THROWS_AS(joint_diagonalize(MatrixDictionary({N})), DefectiveGeneratorError);
}

TEST_CASE("splitting_defect") {
    Matrix A(2, 2), B(2, 2);
    A << 0, 1, 0, 0;
    B << 0, 0, 1, 0;
    // exp(A+B) = [[cosh 1, sinh 1], [sinh 1, cosh 1]], exp(A)exp(B) = [[2,1],[1,1]].
    Matrix expected(2, 2);
    expected << std::cosh(1.0) - 2.0, std::sinh(1.0) - 1.0, std::sinh(1.0) - 1.0,
        std::cosh(1.0) - 1.0;
    CHECK(splitting_defect(A, B, 1.0, 1.0) == doctest::Approx(expected.norm()).epsilon(1e-12));

    Matrix D1 = Vector::LinSpaced(2, 1.0, 2.0).asDiagonal();
    Matrix D2 = Vector::LinSpaced(2, -1.0, 1.0).asDiagonal();
    CHECK(splitting_defect(D1, D2, 0.7, -0.4) < 1e-13);

    // Leading order s*t*||[A,B]||_F / 2 for small s, t.
    const double s = 1e-4;
    CHECK(splitting_defect(A, B, s, s) ==
          doctest::Approx(0.5 * s * s * commutator(A, B).norm()).epsilon(1e-3));
}

TEST_CASE("expm_directional_derivative") {
    std::mt19937_64 rng(99);
    Matrix A = rand_matrix(rng, 3, 1.0);
    MatrixDictionary single({A});
    // d/da expm(a A) at a = 0 is A itself.
    CHECK((expm_directional_derivative(single, Vector::Zero(1), 0) - A).norm() < 1e-12);

    Matrix B = rand_matrix(rng, 3, 1.0);
    MatrixDictionary dict({A, B});
    Vector alpha0(2);
    alpha0 << 0.4, -0.2;
    for (int i = 0; i < 2; ++i) {
        const Matrix D = expm_directional_derivative(dict, alpha0, i);
        const double h = 1e-5;
        Vector ap = alpha0, am = alpha0;
        ap[i] += h;
        am[i] -= h;
        const Matrix fd =
            (expm(ap[0] * A + ap[1] * B) - expm(am[0] * A + am[1] * B)) / (2.0 * h);
        CHECK((D - fd).norm() < 1e-7);
    }

    CHECK_THROWS(expm_directional_derivative(dict, Vector::Zero(3), 0));  // alpha size
    CHECK_THROWS(expm_directional_derivative(dict, Vector::Zero(2), 5));  // index range
}

TEST_CASE("commutator_penalty_descent") {
    Matrix X(2, 2), Z(2, 2);
    X << 0, 1, 1, 0;
    Z << 1, 0, 0, -1;
    MatrixDictionary dict({X, Z});

    DescentResult r = commutator_penalty_descent(dict, 5.0, 200, 0.01);
    const double before =
        commutator(X, Z).squaredNorm() * 5.0;  // loss at B = A (distance term is 0)
    CHECK(r.final_loss < before);
    CHECK(r.final_loss >= 0.0);
    CHECK(commutator(r.dict.generators[0], r.dict.generators[1]).norm() <
          commutator(X, Z).norm());
    CHECK(r.iterations <= 200);

    // A commuting dictionary is already optimal: descent stays put.
    Matrix D1 = Vector::LinSpaced(2, 1.0, 2.0).asDiagonal();
    Matrix D2 = Vector::LinSpaced(2, -1.0, 1.0).asDiagonal();
    DescentResult r2 = commutator_penalty_descent(MatrixDictionary({D1, D2}), 5.0, 50, 0.01);
    CHECK(r2.final_loss < 1e-20);
    CHECK((r2.dict.generators[0] - D1).norm() < 1e-12);
}

TEST_CASE("commutator_penalty_descent loss is monotone") {
    std::mt19937_64 rng(3);
    MatrixDictionary dict({rand_matrix(rng, 3, 1.5), rand_matrix(rng, 3, 1.5),
                           rand_matrix(rng, 3, 1.5)});
    double prev = std::numeric_limits<double>::infinity();
    for (int iters : {1, 5, 20, 80}) {
        DescentResult r = commutator_penalty_descent(dict, 2.0, iters, 0.05);
        CHECK(r.final_loss <= prev + 1e-12);
        prev = r.final_loss;
    }
}

TEST_CASE("recover_generator") {
    Matrix A(2, 2);
    A << 0.1, -1.0, 1.0, 0.2;
    Vector x0(2);
    x0 << 1.0, 0.5;
    std::vector<std::pair<double, Vector>> traj;
    for (int k = 0; k <= 40; ++k) {
        const double t = 0.05 * k;
        traj.emplace_back(t, expm(t * A) * x0);
    }
    GeneratorFit fit = recover_generator(traj);
    CHECK((fit.A - A).norm() < 1e-3);
    CHECK(fit.residual < 1e-3);

    // Constant trajectory: the zero generator reproduces it exactly.
    std::vector<std::pair<double, Vector>> constant;
    for (int k = 0; k <= 10; ++k) constant.emplace_back(0.1 * k, x0);
    GeneratorFit zf = recover_generator(constant);
    CHECK(zf.A.norm() == 0.0);
    CHECK(zf.residual == 0.0);

    // Motion confined to a line cannot pin down a 2x2 generator.
    std::vector<std::pair<double, Vector>> line;
    for (int k = 0; k <= 10; ++k) {
        Vector p(2);
        p << 1.0 + 0.1 * k, 0.0;
        line.emplace_back(0.1 * k, p);
    }
    CHECK_THROWS_AS(recover_generator(line), RankDeficientError);

    CHECK_THROWS(recover_generator({}));
    CHECK_THROWS(recover_generator({{0.0, x0}}));
}
