#include "commutant/matrix_exp.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace commutant {

MatrixDictionary::MatrixDictionary(std::vector<Matrix> gens) : generators(std::move(gens)) {
    if (generators.empty()) throw std::invalid_argument("MatrixDictionary: empty");
    n = static_cast<int>(generators.front().rows());
    for (const Matrix& A : generators) {
        if (A.rows() != A.cols()) throw DimensionError("MatrixDictionary: non-square generator");
        if (A.rows() != n) throw DimensionError("MatrixDictionary: mixed shapes");
        if (!A.allFinite()) throw std::invalid_argument("MatrixDictionary: non-finite generator");
    }
    // Generators must be linearly independent as vectors.
    Matrix flat(static_cast<Eigen::Index>(generators.size()), n * n);
    for (size_t i = 0; i < generators.size(); ++i) {
        Matrix g = generators[i];
        flat.row(static_cast<Eigen::Index>(i)) =
            Eigen::Map<Vector>(g.data(), n * n).transpose();
    }
    Eigen::JacobiSVD<Matrix> svd(flat);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= 1e-10 * sv(0))
        throw std::invalid_argument("MatrixDictionary: generators are linearly dependent");
}

double MatrixDictionary::max_norm() const {
    double m = 0.0;
    for (const Matrix& A : generators) m = std::max(m, A.norm());
    return m;
}

// ---------------------------------------------------------------------------
// expm: Higham's degree-13 Pade approximant with scaling and squaring.

Matrix expm(const Matrix& A) {
    if (A.rows() != A.cols()) throw DimensionError("expm: non-square input");
    if (!A.allFinite()) throw std::invalid_argument("expm: non-finite entries");
    const Eigen::Index n = A.rows();
    if (n == 0) return A;

    static const double b[] = {
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
        1187353796428800.0,  129060195264000.0,   10559470521600.0,
        670442572800.0,      33522128640.0,       1323241920.0,
        40840800.0,          960960.0,            16380.0,
        182.0,               1.0};
    const double theta13 = 5.371920351148152;

    const double norm = A.cwiseAbs().colwise().sum().maxCoeff();  // 1-norm
    if (norm == 0.0) return Matrix::Identity(n, n);
    int squarings = 0;
    if (norm > theta13)
        squarings = static_cast<int>(std::ceil(std::log2(norm / theta13)));
    const Matrix As = A / std::pow(2.0, squarings);

    const Matrix I = Matrix::Identity(n, n);
    const Matrix A2 = As * As;
    const Matrix A4 = A2 * A2;
    const Matrix A6 = A4 * A2;
    const Matrix U = As * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) +
                           b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I);
    const Matrix V = A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) +
                     b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
    Matrix E = (V - U).partialPivLu().solve(V + U);
    for (int k = 0; k < squarings; ++k) E = E * E;
    return E;
}

Matrix commutator(const Matrix& A, const Matrix& B) {
    if (A.rows() != B.rows() || A.cols() != B.cols())
        throw DimensionError("commutator: shape mismatch");
    return A * B - B * A;
}

double default_commute_tol(const MatrixDictionary& dict) {
    const double m = dict.max_norm();
    return 1e-10 * std::max(1.0, m * m);
}

std::pair<bool, double> commutes(const MatrixDictionary& dict, double tol) {
    if (tol <= 0.0) tol = default_commute_tol(dict);
    double worst = 0.0;
    for (int i = 0; i < dict.count(); ++i)
        for (int j = i + 1; j < dict.count(); ++j)
            worst = std::max(worst, commutator(dict.generators[i], dict.generators[j]).norm());
    return {worst <= tol, worst};
}

Diagonalization joint_diagonalize(const MatrixDictionary& dict, double tol) {
    if (tol <= 0.0) tol = default_commute_tol(dict);
    for (int i = 0; i < dict.count(); ++i)
        for (int j = i + 1; j < dict.count(); ++j) {
            const double c = commutator(dict.generators[i], dict.generators[j]).norm();
            if (c > tol) throw NonCommutingError(i, j, c);
        }

    std::mt19937_64 rng(0xC0FFEE);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const int n = dict.n;

    for (int attempt = 0; attempt < 3; ++attempt) {
        Matrix combo = Matrix::Zero(n, n);
        for (const Matrix& A : dict.generators) combo += unit(rng) * A;
        Eigen::EigenSolver<Matrix> es(combo);
        if (es.info() != Eigen::Success) continue;
        ComplexMatrix P = es.eigenvectors();
        Eigen::JacobiSVD<ComplexMatrix> svd(P);
        const auto& sv = svd.singularValues();
        const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                                    : std::numeric_limits<double>::infinity();
        if (cond > 1e8) continue;

        const ComplexMatrix Pinv = P.partialPivLu().solve(ComplexMatrix::Identity(n, n));
        Diagonalization out;
        out.P = P;
        out.condition = cond;
        for (const Matrix& A : dict.generators) {
            const ComplexMatrix D = Pinv * A.cast<std::complex<double>>() * P;
            out.diags.push_back(D.diagonal());
            const ComplexMatrix recon = P * D.diagonal().asDiagonal().toDenseMatrix() * Pinv;
            out.residual = std::max(out.residual,
                                    (recon - A.cast<std::complex<double>>()).norm());
        }
        return out;
    }
    throw DefectiveGeneratorError(
        "joint_diagonalize: eigenvector matrix ill-conditioned after 3 attempts");
}

Vector fast_apply(const Diagonalization& diag, const Vector& alpha, const Vector& p) {
    if (alpha.size() != static_cast<Eigen::Index>(diag.diags.size()))
        throw DimensionError("fast_apply: coefficient count mismatch");
    const Eigen::Index n = diag.P.rows();
    require_dim(p, n, "fast_apply");
    ComplexVector d = ComplexVector::Zero(n);
    for (Eigen::Index i = 0; i < alpha.size(); ++i) d += alpha[i] * diag.diags[static_cast<size_t>(i)];
    const ComplexVector ed = d.array().exp();
    const ComplexVector y =
        diag.P * (ed.asDiagonal() * diag.P.partialPivLu().solve(p.cast<std::complex<double>>()));
    const double imag = y.imag().norm();
    if (imag > 1e-8 * std::max(1.0, y.real().norm()))
        throw NumericalError("fast_apply: excessive imaginary residue " + std::to_string(imag));
    return y.real();
}

double splitting_defect(const Matrix& A, const Matrix& B, double s, double t) {
    if (A.rows() != B.rows() || A.cols() != B.cols())
        throw DimensionError("splitting_defect: shape mismatch");
    return (expm(s * A + t * B) - expm(s * A) * expm(t * B)).norm();
}

Matrix expm_directional_derivative(const MatrixDictionary& dict, const Vector& alpha0, int i) {
    if (alpha0.size() != dict.count())
        throw DimensionError("expm_directional_derivative: coefficient count mismatch");
    if (i < 0 || i >= dict.count())
        throw std::invalid_argument("expm_directional_derivative: index out of range");
    const int n = dict.n;
    Matrix M = Matrix::Zero(n, n);
    for (int j = 0; j < dict.count(); ++j) M += alpha0[j] * dict.generators[static_cast<size_t>(j)];
    Matrix block = Matrix::Zero(2 * n, 2 * n);
    block.topLeftCorner(n, n) = M;
    block.bottomRightCorner(n, n) = M;
    block.topRightCorner(n, n) = dict.generators[static_cast<size_t>(i)];
    return expm(block).topRightCorner(n, n);
}

namespace {

double penalty_loss(const std::vector<Matrix>& B, const std::vector<Matrix>& A, double lambda) {
    double loss = 0.0;
    for (size_t i = 0; i < B.size(); ++i) loss += (B[i] - A[i]).squaredNorm();
    for (size_t i = 0; i < B.size(); ++i)
        for (size_t j = i + 1; j < B.size(); ++j)
            loss += lambda * commutator(B[i], B[j]).squaredNorm();
    return loss;
}

std::vector<Matrix> penalty_gradient(const std::vector<Matrix>& B, const std::vector<Matrix>& A,
                                     double lambda) {
    std::vector<Matrix> G(B.size());
    for (size_t i = 0; i < B.size(); ++i) {
        G[i] = 2.0 * (B[i] - A[i]);
        for (size_t j = 0; j < B.size(); ++j) {
            if (j == i) continue;
            const Matrix C = commutator(B[i], B[j]);
            G[i] += 2.0 * lambda * (C * B[j].transpose() - B[j].transpose() * C);
        }
    }
    return G;
}

}  // namespace

DescentResult commutator_penalty_descent(const MatrixDictionary& dict, double lambda,
                                         int iters, double lr) {
    if (lambda < 0.0) throw std::invalid_argument("commutator_penalty_descent: lambda < 0");
    std::vector<Matrix> B = dict.generators;
    const std::vector<Matrix>& A = dict.generators;
    double loss = penalty_loss(B, A, lambda);
    std::vector<Matrix> grad;
    int done = 0;
    for (int it = 0; it < iters; ++it, ++done) {
        grad = penalty_gradient(B, A, lambda);
        double gnorm2 = 0.0;
        for (const Matrix& g : grad) gnorm2 += g.squaredNorm();
        if (gnorm2 == 0.0) break;
        double step = lr;
        bool accepted = false;
        for (int halvings = 0; halvings <= 30; ++halvings, step *= 0.5) {
            std::vector<Matrix> trial = B;
            for (size_t i = 0; i < trial.size(); ++i) trial[i] -= step * grad[i];
            const double trial_loss = penalty_loss(trial, A, lambda);
            if (trial_loss <= loss) {
                B = std::move(trial);
                loss = trial_loss;
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
    }
    grad = penalty_gradient(B, A, lambda);
    double gnorm = 0.0;
    for (const Matrix& g : grad) gnorm += g.squaredNorm();

    DescentResult out;
    out.dict = MatrixDictionary(std::move(B));
    out.final_loss = loss;
    out.final_gradient_norm = std::sqrt(gnorm);
    out.iterations = done;
    return out;
}

GeneratorFit recover_generator(const std::vector<std::pair<double, Vector>>& trajectory) {
    if (trajectory.size() < 2)
        throw std::invalid_argument("recover_generator: need at least n+1 samples");
    const Eigen::Index n = trajectory.front().second.size();
    if (static_cast<Eigen::Index>(trajectory.size()) < n + 1)
        throw std::invalid_argument("recover_generator: need at least n+1 samples");
    for (size_t k = 1; k < trajectory.size(); ++k)
        if (trajectory[k].first == trajectory[k - 1].first)
            throw std::invalid_argument("recover_generator: sample times must be distinct");

    // Midpoint finite-difference velocities.
    const Eigen::Index K = static_cast<Eigen::Index>(trajectory.size()) - 1;
    Matrix X(n, K), V(n, K);
    for (Eigen::Index k = 0; k < K; ++k) {
        const auto& [t0, x0] = trajectory[static_cast<size_t>(k)];
        const auto& [t1, x1] = trajectory[static_cast<size_t>(k) + 1];
        X.col(k) = 0.5 * (x0 + x1);
        V.col(k) = (x1 - x0) / (t1 - t0);
    }

    GeneratorFit fit;
    const double xscale = X.norm();
    if (V.norm() <= 1e-12 * std::max(1.0, xscale)) {
        // Fixed point of the flow: every generator with x in its kernel fits;
        // report the zero matrix.
        fit.A = Matrix::Zero(n, n);
        fit.residual = V.norm();
        return fit;
    }

    const Matrix gram = X * X.transpose();
    Eigen::JacobiSVD<Matrix> svd(gram);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= 1e-12 * sv(0))
        throw RankDeficientError(
            "recover_generator: trajectory confined to an invariant subspace");
    fit.A = gram.ldlt().solve(X * V.transpose()).transpose();
    fit.residual = (fit.A * X - V).norm();
    return fit;
}

}  // namespace commutant
