#include "commutant/geometry.hpp"

#include <cmath>

namespace commutant {

VectorField linear_generator_field(const Matrix& A, std::string name) {
    if (A.rows() != A.cols()) throw DimensionError("linear_generator_field: matrix not square");
    VectorField X;
    X.kind = FieldKind::LinearGenerator;
    X.dim = static_cast<int>(A.rows());
    X.name = std::move(name);
    X.generator = A;
    X.eval = [A](const Vector& p) -> Vector { return A * p; };
    X.jacobian = [A](const Vector&) -> Matrix { return A; };
    return X;
}

VectorField constant_field(const Vector& c, std::string name) {
    VectorField X;
    X.kind = FieldKind::Analytic;
    X.dim = static_cast<int>(c.size());
    X.name = std::move(name);
    X.eval = [c](const Vector&) -> Vector { return c; };
    const int n = static_cast<int>(c.size());
    X.jacobian = [n](const Vector&) -> Matrix { return Matrix::Zero(n, n); };
    return X;
}

VectorField analytic_field(std::string name, int dim,
                           std::function<Vector(const Vector&)> eval,
                           std::function<Matrix(const Vector&)> jacobian) {
    VectorField X;
    X.kind = FieldKind::Analytic;
    X.dim = dim;
    X.name = std::move(name);
    X.eval = std::move(eval);
    X.jacobian = std::move(jacobian);
    return X;
}

TangentVector evaluate_field(const VectorField& X, const Vector& p) {
    require_dim(p, X.dim, "evaluate_field");
    require_finite(p, "evaluate_field point");
    Vector v = X.eval(p);
    if (v.size() != X.dim)
        throw DimensionError("evaluate_field: field returned wrong dimension");
    if (!v.allFinite())
        throw NumericalError("evaluate_field: non-finite field value at given point");
    return TangentVector{std::move(v), p};
}

Matrix field_jacobian(const VectorField& X, const Vector& p, double h) {
    require_dim(p, X.dim, "field_jacobian");
    if (X.jacobian) return X.jacobian(p);
    if (h <= 0.0) h = default_fd_step(p);
    Matrix J(X.dim, X.dim);
    Vector e = Vector::Zero(X.dim);
    for (int j = 0; j < X.dim; ++j) {
        e[j] = h;
        J.col(j) = (X.eval(p + e) - X.eval(p - e)) / (2.0 * h);
        e[j] = 0.0;
    }
    return J;
}

TangentVector lie_bracket(const VectorField& X, const VectorField& Y, const Vector& p,
                          double h) {
    if (X.dim != Y.dim) throw DimensionError("lie_bracket: field dims differ");
    require_dim(p, X.dim, "lie_bracket");
    require_finite(p, "lie_bracket point");
    const Vector xv = X.eval(p);
    const Vector yv = Y.eval(p);
    const Matrix jx = field_jacobian(X, p, h);
    const Matrix jy = field_jacobian(Y, p, h);
    return TangentVector{jy * xv - jx * yv, p};
}

Matrix commutativity_matrix(const std::vector<VectorField>& fields,
                            const std::vector<Vector>& sample, double h) {
    if (fields.empty()) throw std::invalid_argument("commutativity_matrix: no fields");
    if (sample.empty()) throw std::invalid_argument("commutativity_matrix: no sample points");
    const int k = static_cast<int>(fields.size());
    Matrix M = Matrix::Zero(k, k);
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            double worst = 0.0;
            for (const Vector& p : sample)
                worst = std::max(worst, lie_bracket(fields[i], fields[j], p, h).components.norm());
            M(i, j) = M(j, i) = worst;
        }
    }
    return M;
}

std::vector<bool> linear_independence_check(const std::vector<VectorField>& fields,
                                            const std::vector<Vector>& sample, double tol) {
    if (fields.empty()) throw std::invalid_argument("linear_independence_check: no fields");
    const int dim = fields.front().dim;
    for (const auto& f : fields)
        if (f.dim != dim) throw DimensionError("linear_independence_check: mixed dims");
    std::vector<bool> out;
    out.reserve(sample.size());
    for (const Vector& p : sample) {
        Matrix S(dim, static_cast<Eigen::Index>(fields.size()));
        for (size_t i = 0; i < fields.size(); ++i) S.col(static_cast<Eigen::Index>(i)) = fields[i].eval(p);
        Eigen::JacobiSVD<Matrix> svd(S);
        const auto& sv = svd.singularValues();
        const double smax = sv.size() ? sv(0) : 0.0;
        const double smin = sv.size() ? sv(sv.size() - 1) : 0.0;
        out.push_back(static_cast<Eigen::Index>(fields.size()) <= std::min(S.rows(), S.cols()) &&
                      smin > tol * smax && smax > 0.0);
    }
    return out;
}

// ---------------------------------------------------------------------------

Matrix numerical_jacobian(const SmoothMap& f, const Vector& x, double h) {
    require_dim(x, f.domain_dim, "numerical_jacobian");
    if (f.domain.dim() == f.domain_dim && !f.domain.contains(x))
        throw std::domain_error("numerical_jacobian: point outside the map's domain box");
    if (h <= 0.0) h = default_fd_step(x);
    Matrix J(f.codomain_dim, f.domain_dim);
    Vector e = Vector::Zero(f.domain_dim);
    for (int j = 0; j < f.domain_dim; ++j) {
        e[j] = h;
        J.col(j) = (f.eval(x + e) - f.eval(x - e)) / (2.0 * h);
        e[j] = 0.0;
    }
    return J;
}

Matrix map_jacobian(const SmoothMap& f, const Vector& x, double h) {
    if (f.jacobian) return f.jacobian(x);
    return numerical_jacobian(f, x, h);
}

VectorField pushforward_field(const SmoothMap& f, int latent_index) {
    if (!f.inverse) throw std::invalid_argument("pushforward_field: map has no inverse");
    if (f.domain_dim != f.codomain_dim)
        throw DimensionError("pushforward_field: map must be square");
    if (latent_index < 0 || latent_index >= f.domain_dim)
        throw std::invalid_argument("pushforward_field: latent index out of range");
    VectorField X;
    X.kind = FieldKind::FrameField;
    X.dim = f.codomain_dim;
    X.name = f.id + ".frame_" + std::to_string(latent_index);
    SmoothMap fc = f;  // capture by value; maps are immutable after construction
    X.eval = [fc, latent_index](const Vector& y) -> Vector {
        const Vector x = fc.inverse(y);
        return map_jacobian(fc, x).col(latent_index);
    };
    return X;
}

std::vector<VectorField> frame_fields(const SmoothMap& f) {
    std::vector<VectorField> out;
    out.reserve(static_cast<size_t>(f.domain_dim));
    for (int i = 0; i < f.domain_dim; ++i) out.push_back(pushforward_field(f, i));
    return out;
}

// ---------------------------------------------------------------------------

Flow closed_form_flow(std::string name, int dim, Box domain,
                      std::function<Vector(double, const Vector&)> eval) {
    Flow f;
    f.kind = Flow::Kind::ClosedForm;
    f.name = std::move(name);
    f.dim = dim;
    f.domain = std::move(domain);
    f.closed = std::move(eval);
    return f;
}

Flow integrated_flow(VectorField field, Box domain, int steps_per_unit) {
    Flow f;
    f.kind = Flow::Kind::Integrated;
    f.name = field.name + ".flow";
    f.dim = field.dim;
    f.domain = std::move(domain);
    f.field = std::move(field);
    f.steps_per_unit = steps_per_unit;
    return f;
}

Vector integrate_flow(const VectorField& X, const Vector& p, double t, int steps,
                      const Box* domain) {
    require_dim(p, X.dim, "integrate_flow");
    if (steps < 1) throw std::invalid_argument("integrate_flow: steps must be >= 1");
    if (domain && !domain->contains(p)) throw DomainExitError(0.0);
    if (t == 0.0) return p;
    const double dt = t / steps;
    Vector y = p;
    for (int k = 0; k < steps; ++k) {
        const Vector k1 = X.eval(y);
        const Vector k2 = X.eval(y + 0.5 * dt * k1);
        const Vector k3 = X.eval(y + 0.5 * dt * k2);
        const Vector k4 = X.eval(y + dt * k3);
        y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!y.allFinite() || (domain && !domain->contains(y)))
            throw DomainExitError((k + 1) * dt);
    }
    return y;
}

Vector flow_eval(const Flow& f, double t, const Vector& p) {
    require_dim(p, f.dim, "flow_eval");
    if (std::abs(t) > f.t_max) throw DomainExitError(t);
    if (f.domain.dim() == f.dim && !f.domain.contains(p)) throw DomainExitError(0.0);
    if (f.kind == Flow::Kind::ClosedForm) {
        Vector q = f.closed(t, p);
        if (f.domain.dim() == f.dim && !f.domain.contains(q)) throw DomainExitError(t);
        return q;
    }
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(t) * f.steps_per_unit)));
    const Box* box = f.domain.dim() == f.dim ? &f.domain : nullptr;
    return integrate_flow(f.field, p, t, steps, box);
}

double flow_commutator_defect(const Flow& fi, const Flow& fj, double s, double t,
                              const Vector& p) {
    const Vector a = flow_eval(fi, s, flow_eval(fj, t, p));
    const Vector b = flow_eval(fj, t, flow_eval(fi, s, p));
    return (a - b).norm();
}

}  // namespace commutant
