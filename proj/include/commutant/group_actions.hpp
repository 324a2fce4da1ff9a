#pragma once

#include <string>
#include <utility>
#include <vector>

#include "commutant/distillation.hpp"
#include "commutant/matrix_exp.hpp"

namespace commutant {

/// A matrix Lie group acting on R^d through exponential coordinates of its
/// algebra basis.  Basis matrices are either d x d (linear action) or
/// (d+1) x (d+1), acting on homogeneous coordinates (p, 1).
struct MatrixGroupAction {
    std::string name;
    std::vector<Matrix> algebra_basis;
    int data_dim = 0;

    MatrixGroupAction() = default;
    MatrixGroupAction(std::string name_, std::vector<Matrix> basis, int data_dim_);

    int param_dim() const { return static_cast<int>(algebra_basis.size()); }
    bool homogeneous() const;

    Matrix group_element(const Vector& u) const;  // expm(sum u_i E_i)
    Vector apply(const Matrix& g, const Vector& p) const;
    Vector act(const Vector& u, const Vector& p) const;
};

/// Max order-swap defect over 64 deterministic low-discrepancy (u, v, p)
/// triples with u, v in [-1,1]^k and p in the given box.
std::pair<bool, double> actions_commute(const MatrixGroupAction& a1,
                                        const MatrixGroupAction& a2, const Box& point_box,
                                        double tol, int samples = 64);

/// Concatenated-parameter action applying the factors in the given order.
/// Requires pairwise commuting factors.
MatrixGroupAction product_action(const std::vector<MatrixGroupAction>& actions,
                                 const std::vector<int>& order, const Box& point_box,
                                 double tol);

/// Rank of the orbit map u -> act(u, p) at u = 0.
RankReport orbit_rank(const MatrixGroupAction& action, const Vector& p, double tol = 1e-8);

/// Local surrogate for freeness: orbit rank equals the parameter dimension.
bool is_free_near_identity(const MatrixGroupAction& action, const Vector& p, double tol = 1e-8);

}  // namespace commutant
