#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "commutant/core.hpp"

namespace commutant {

// ---------------------------------------------------------------------------
// Points and tangent vectors.  Points are plain coordinate vectors in a chart;
// a TangentVector remembers the base point it was evaluated at.

struct TangentVector {
    Vector components;
    Vector base;
};

// ---------------------------------------------------------------------------
// Vector fields

enum class FieldKind { Analytic, LinearGenerator, FrameField };

struct VectorField {
    FieldKind kind = FieldKind::Analytic;
    int dim = 0;
    std::string name;
    std::function<Vector(const Vector&)> eval;
    // Analytic Jacobian of the field (d components / d coordinates), optional.
    std::function<Matrix(const Vector&)> jacobian;
    // Populated for LinearGenerator only.
    Matrix generator;
};

/// X(p) = A p.
VectorField linear_generator_field(const Matrix& A, std::string name = "linear");

/// Constant field X(p) = c.
VectorField constant_field(const Vector& c, std::string name = "constant");

VectorField analytic_field(std::string name, int dim,
                           std::function<Vector(const Vector&)> eval,
                           std::function<Matrix(const Vector&)> jacobian = nullptr);

TangentVector evaluate_field(const VectorField& X, const Vector& p);

/// Jacobian of the field's components, analytic when available, otherwise
/// central differences with step h (h <= 0 picks the default step).
Matrix field_jacobian(const VectorField& X, const Vector& p, double h = 0.0);

/// [X,Y](p) = dY(p)·X(p) - dX(p)·Y(p).
TangentVector lie_bracket(const VectorField& X, const VectorField& Y, const Vector& p,
                          double h = 0.0);

/// Entry (i,j) = max over the sample of ||[X_i,X_j](p)||_2; diagonal is 0.
Matrix commutativity_matrix(const std::vector<VectorField>& fields,
                            const std::vector<Vector>& sample, double h = 0.0);

/// Per-point test: smallest singular value of the stacked field values
/// exceeds tol times the largest.
std::vector<bool> linear_independence_check(const std::vector<VectorField>& fields,
                                            const std::vector<Vector>& sample, double tol);

// ---------------------------------------------------------------------------
// Smooth maps between coordinate spaces

struct SmoothMap {
    std::string id;
    int domain_dim = 0;
    int codomain_dim = 0;
    Box domain;  // evaluator is total here
    std::function<Vector(const Vector&)> eval;
    std::function<Matrix(const Vector&)> jacobian;  // optional analytic Jacobian
    std::function<Vector(const Vector&)> inverse;   // optional
    // Sub-box of `domain` on which inverse(eval(x)) == x holds (branch of the
    // inverse); defaults to `domain` when unset.
    std::optional<Box> inverse_domain;

    Box inverse_box() const { return inverse_domain ? *inverse_domain : domain; }
};

/// Central-difference Jacobian (codomain_dim x domain_dim); analytic Jacobian
/// is NOT consulted, so this doubles as its independent check.
Matrix numerical_jacobian(const SmoothMap& f, const Vector& x, double h = 0.0);

/// Jacobian via the analytic route when present, else numerically.
Matrix map_jacobian(const SmoothMap& f, const Vector& x, double h = 0.0);

/// Frame field of latent i: Y(y) = (i-th Jacobian column of f) at x = f^-1(y).
VectorField pushforward_field(const SmoothMap& f, int latent_index);

std::vector<VectorField> frame_fields(const SmoothMap& f);

// ---------------------------------------------------------------------------
// Flows

struct Flow {
    enum class Kind { ClosedForm, Integrated } kind = Kind::ClosedForm;
    std::string name;
    int dim = 0;
    Box domain;           // spatial part of the flow's domain
    double t_max = 10.0;  // |t| bound of the flow's domain
    std::function<Vector(double, const Vector&)> closed;  // ClosedForm
    VectorField field;                                    // Integrated
    int steps_per_unit = 100;
};

Flow closed_form_flow(std::string name, int dim, Box domain,
                      std::function<Vector(double, const Vector&)> eval);

Flow integrated_flow(VectorField field, Box domain, int steps_per_unit = 100);

/// Classical fixed-step RK4 with step t/steps.  When a domain box is given,
/// every intermediate state must stay inside it.
Vector integrate_flow(const VectorField& X, const Vector& p, double t, int steps,
                      const Box* domain = nullptr);

Vector flow_eval(const Flow& f, double t, const Vector& p);

/// || theta_i(s, theta_j(t,p)) - theta_j(t, theta_i(s,p)) ||_2
double flow_commutator_defect(const Flow& fi, const Flow& fj, double s, double t,
                              const Vector& p);

}  // namespace commutant
