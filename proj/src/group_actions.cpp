#include "commutant/group_actions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace commutant {

MatrixGroupAction::MatrixGroupAction(std::string name_, std::vector<Matrix> basis, int data_dim_)
    : name(std::move(name_)), algebra_basis(std::move(basis)), data_dim(data_dim_) {
    if (algebra_basis.empty()) throw std::invalid_argument("MatrixGroupAction: empty basis");
    const Eigen::Index n = algebra_basis.front().rows();
    if (n != data_dim && n != data_dim + 1)
        throw DimensionError("MatrixGroupAction: basis must be d x d or (d+1) x (d+1)");
    for (const Matrix& E : algebra_basis)
        if (E.rows() != n || E.cols() != n)
            throw DimensionError("MatrixGroupAction: mixed basis shapes");
}

bool MatrixGroupAction::homogeneous() const {
    return algebra_basis.front().rows() == data_dim + 1;
}

Matrix MatrixGroupAction::group_element(const Vector& u) const {
    if (u.size() != param_dim())
        throw DimensionError("MatrixGroupAction: wrong parameter count");
    Matrix G = Matrix::Zero(algebra_basis.front().rows(), algebra_basis.front().cols());
    for (int i = 0; i < param_dim(); ++i) G += u[i] * algebra_basis[static_cast<size_t>(i)];
    return expm(G);
}

Vector MatrixGroupAction::apply(const Matrix& g, const Vector& p) const {
    require_dim(p, data_dim, "MatrixGroupAction::apply");
    if (!homogeneous()) return g * p;
    Vector ph(data_dim + 1);
    ph.head(data_dim) = p;
    ph[data_dim] = 1.0;
    const Vector qh = g * ph;
    return qh.head(data_dim) / qh[data_dim];
}

Vector MatrixGroupAction::act(const Vector& u, const Vector& p) const {
    return apply(group_element(u), p);
}

std::pair<bool, double> actions_commute(const MatrixGroupAction& a1,
                                        const MatrixGroupAction& a2, const Box& point_box,
                                        double tol, int samples) {
    if (a1.data_dim != a2.data_dim)
        throw DimensionError("actions_commute: data dims differ");
    const int du = a1.param_dim();
    const int dv = a2.param_dim();
    const int dp = point_box.dim();
    double worst = 0.0;
    for (int k = 0; k < samples; ++k) {
        const Vector q = kronecker_point(k, du + dv + dp);
        const Vector u = 2.0 * q.head(du).array() - 1.0;
        const Vector v = 2.0 * q.segment(du, dv).array() - 1.0;
        const Vector p = point_box.from_unit(q.tail(dp));
        const double defect = (a1.act(u, a2.act(v, p)) - a2.act(v, a1.act(u, p))).norm();
        worst = std::max(worst, defect);
    }
    return {worst <= tol, worst};
}

MatrixGroupAction product_action(const std::vector<MatrixGroupAction>& actions,
                                 const std::vector<int>& order, const Box& point_box,
                                 double tol) {
    if (actions.empty()) throw std::invalid_argument("product_action: no factors");
    if (order.size() != actions.size())
        throw std::invalid_argument("product_action: order must permute the factor list");
    {
        std::vector<int> check = order;
        std::sort(check.begin(), check.end());
        for (size_t i = 0; i < check.size(); ++i)
            if (check[i] != static_cast<int>(i))
                throw std::invalid_argument("product_action: invalid permutation");
    }
    for (size_t i = 0; i < actions.size(); ++i)
        for (size_t j = i + 1; j < actions.size(); ++j) {
            const auto [ok, defect] = actions_commute(actions[i], actions[j], point_box, tol);
            if (!ok)
                throw NonCommutingError(static_cast<int>(i), static_cast<int>(j), defect);
        }
    if (actions.size() == 1) return actions.front();

    // Concatenate parameters; apply factors in the given order.
    MatrixGroupAction prod;
    prod.data_dim = actions.front().data_dim;
    prod.name = "product";
    std::vector<MatrixGroupAction> factors = actions;
    std::vector<int> ord = order;
    std::vector<int> offsets(actions.size());
    int total = 0;
    for (size_t i = 0; i < actions.size(); ++i) {
        offsets[i] = total;
        total += actions[i].param_dim();
        prod.name += "." + actions[i].name;
    }
    // Every factor basis is embedded in a common homogeneous (d+1) frame and
    // concatenated.  The composite acts through exp of the summed algebra,
    // which by the commuting precondition matches ordered factor application;
    // the sample check below asserts that.
    const int d = prod.data_dim;
    for (size_t i = 0; i < factors.size(); ++i) {
        for (const Matrix& E : factors[i].algebra_basis) {
            Matrix H = Matrix::Zero(d + 1, d + 1);
            if (E.rows() == d)
                H.topLeftCorner(d, d) = E;
            else
                H = E;
            prod.algebra_basis.push_back(H);
        }
    }
    // Verify the composite satisfies the compatibility invariant on samples:
    // exp of the summed algebra must agree with ordered factor application.
    for (int k = 0; k < 16; ++k) {
        const Vector q = kronecker_point(k, total + point_box.dim());
        const Vector u = 2.0 * q.head(total).array() - 1.0;
        const Vector p = point_box.from_unit(q.tail(point_box.dim()));
        Vector via_factors = p;
        for (auto it = ord.rbegin(); it != ord.rend(); ++it)
            via_factors = factors[static_cast<size_t>(*it)].act(
                u.segment(offsets[static_cast<size_t>(*it)], factors[static_cast<size_t>(*it)].param_dim()),
                via_factors);
        const Vector via_sum = prod.act(u, p);
        if ((via_factors - via_sum).norm() > std::max(tol, 1e-8))
            throw NumericalError("product_action: composite failed the compatibility check");
    }
    return prod;
}

RankReport orbit_rank(const MatrixGroupAction& action, const Vector& p, double tol) {
    require_dim(p, action.data_dim, "orbit_rank");
    const int k = action.param_dim();
    const double h = std::cbrt(std::numeric_limits<double>::epsilon());
    Matrix J(action.data_dim, k);
    Vector u = Vector::Zero(k);
    for (int j = 0; j < k; ++j) {
        u[j] = h;
        const Vector plus = action.act(u, p);
        u[j] = -h;
        const Vector minus = action.act(u, p);
        u[j] = 0.0;
        J.col(j) = (plus - minus) / (2.0 * h);
    }
    return rank_report(J, p, tol);
}

bool is_free_near_identity(const MatrixGroupAction& action, const Vector& p, double tol) {
    return orbit_rank(action, p, tol).rank == action.param_dim();
}

}  // namespace commutant
