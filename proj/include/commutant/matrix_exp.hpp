#pragma once

#include <utility>
#include <vector>

#include "commutant/core.hpp"

namespace commutant {

// ---------------------------------------------------------------------------
// Dictionaries of square generator matrices

struct MatrixDictionary {
    std::vector<Matrix> generators;
    int n = 0;

    MatrixDictionary() = default;
    /// Validates shapes and linear independence of the flattened generators.
    explicit MatrixDictionary(std::vector<Matrix> gens);

    int count() const { return static_cast<int>(generators.size()); }
    double max_norm() const;
};

struct Diagonalization {
    ComplexMatrix P;
    std::vector<ComplexVector> diags;
    double residual = 0.0;
    double condition = 0.0;
};

// ---------------------------------------------------------------------------

/// Scaling-and-squaring matrix exponential, degree-13 Pade approximant.
Matrix expm(const Matrix& A);

Matrix commutator(const Matrix& A, const Matrix& B);

/// True iff the max pairwise ||[A_i,A_j]||_F is at or below tol
/// (tol <= 0 picks the scale-aware default 1e-10 * max||A_i||_F^2).
std::pair<bool, double> commutes(const MatrixDictionary& dict, double tol = 0.0);

double default_commute_tol(const MatrixDictionary& dict);

/// Simultaneous diagonalization of a commuting dictionary via the
/// eigenvectors of a fixed-seed random linear combination of the generators.
Diagonalization joint_diagonalize(const MatrixDictionary& dict, double tol = 0.0);

/// P exp(sum alpha_i D_i) P^-1 p, entry-wise exponential on the diagonal.
Vector fast_apply(const Diagonalization& diag, const Vector& alpha, const Vector& p);

/// ||exp(sA + tB) - exp(sA) exp(tB)||_F
double splitting_defect(const Matrix& A, const Matrix& B, double s, double t);

/// Frechet derivative of expm at sum alpha0_j A_j in direction A_i, via the
/// 2n x 2n block identity expm([[M, E], [0, M]]).
Matrix expm_directional_derivative(const MatrixDictionary& dict, const Vector& alpha0, int i);

struct DescentResult {
    MatrixDictionary dict;
    double final_loss = 0.0;
    double final_gradient_norm = 0.0;
    int iterations = 0;
};

/// Gradient descent on L(B) = sum ||B_i - A_i||_F^2
///                          + lambda * sum_{i<j} ||[B_i,B_j]||_F^2
/// with backtracking halving; the loss never increases across accepted steps.
DescentResult commutator_penalty_descent(const MatrixDictionary& dict, double lambda,
                                         int iters, double lr);

struct GeneratorFit {
    Matrix A;
    double residual = 0.0;
};

/// Least-squares fit of A from a sampled trajectory of x' = A x.
GeneratorFit recover_generator(const std::vector<std::pair<double, Vector>>& trajectory);

}  // namespace commutant
