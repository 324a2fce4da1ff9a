#include "commutant/distillation.hpp"

#include <algorithm>
#include <cmath>

namespace commutant {

RankReport rank_report(const Matrix& J, const Vector& at, double tol) {
    Eigen::JacobiSVD<Matrix> svd(J);
    RankReport r;
    r.point = at;
    r.tol = tol;
    const auto& sv = svd.singularValues();
    r.singular_values.assign(sv.data(), sv.data() + sv.size());
    const double smax = sv.size() ? sv(0) : 0.0;
    for (double s : r.singular_values)
        if (s > tol * smax) ++r.rank;
    if (smax == 0.0) r.rank = 0;
    return r;
}

RankReport local_rank(const SmoothMap& f, const Vector& x, double tol) {
    return rank_report(map_jacobian(f, x), x, tol);
}

namespace {

bool restricted_full_rank(const SmoothMap& f, const Vector& x, const std::vector<int>& selected,
                          double tol) {
    if (!f.domain.contains(x)) return false;
    const Matrix J = map_jacobian(f, x);
    Matrix R(J.rows(), static_cast<Eigen::Index>(selected.size()));
    for (size_t j = 0; j < selected.size(); ++j) R.col(static_cast<Eigen::Index>(j)) = J.col(selected[j]);
    Eigen::JacobiSVD<Matrix> svd(R);
    const auto& sv = svd.singularValues();
    return sv.size() > 0 && sv(sv.size() - 1) > tol * sv(0) && sv(0) > 0.0;
}

// 20 low-discrepancy probes inside the candidate validity box.
bool radius_feasible(const SmoothMap& f, const Vector& base, const std::vector<int>& selected,
                     double r, double tol) {
    for (int k = 0; k < 20; ++k) {
        const Vector u = kronecker_point(k, static_cast<int>(selected.size()));
        Vector x = base;
        for (size_t j = 0; j < selected.size(); ++j)
            x[selected[j]] = base[selected[j]] + r * (2.0 * u[static_cast<Eigen::Index>(j)] - 1.0);
        if (!restricted_full_rank(f, x, selected, tol)) return false;
    }
    return true;
}

}  // namespace

LocalDistillation distill_at(const SmoothMap& f, const Vector& x, double tol) {
    const Matrix J = map_jacobian(f, x);
    const RankReport rr = rank_report(J, x, tol);
    const int m = f.domain_dim;
    const int n = f.codomain_dim;

    LocalDistillation d;
    d.base = x;
    if (rr.rank == n && n <= m) {
        // Submersion case: pick n latent columns by pivoted QR.
        Eigen::ColPivHouseholderQR<Matrix> qr(J);
        const auto& perm = qr.colsPermutation().indices();
        for (int j = 0; j < n; ++j) d.selected.push_back(perm[j]);
    } else if (rr.rank == m && m <= n) {
        // Immersion case: every latent is kept.
        for (int j = 0; j < m; ++j) d.selected.push_back(j);
    } else {
        throw RankDeficientError("distill_at: map has rank " + std::to_string(rr.rank) +
                                 " < min(" + std::to_string(m) + ", " + std::to_string(n) +
                                 ") at the given point");
    }
    for (int j = 0; j < m; ++j)
        if (std::find(d.selected.begin(), d.selected.end(), j) == d.selected.end())
            d.complement.push_back(j);
    d.frozen.resize(static_cast<Eigen::Index>(d.complement.size()));
    for (size_t j = 0; j < d.complement.size(); ++j) d.frozen[static_cast<Eigen::Index>(j)] = x[d.complement[j]];

    // Validity radius: bisection on full-rank probes, conservative.
    if (radius_feasible(f, x, d.selected, 1.0, tol)) {
        d.radius = 1.0;
    } else {
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 30; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (radius_feasible(f, x, d.selected, mid, tol))
                lo = mid;
            else
                hi = mid;
        }
        d.radius = lo;
    }
    return d;
}

Vector evaluate_distilled(const LocalDistillation& d, const SmoothMap& f, const Vector& w) {
    if (w.size() != static_cast<Eigen::Index>(d.selected.size()))
        throw DimensionError("evaluate_distilled: wrong parameter count");
    for (size_t j = 0; j < d.selected.size(); ++j)
        if (std::abs(w[static_cast<Eigen::Index>(j)] - d.base[d.selected[j]]) > d.radius)
            throw std::domain_error("evaluate_distilled: parameters outside validity radius");
    Vector x = d.base;
    for (size_t j = 0; j < d.selected.size(); ++j) x[d.selected[j]] = w[static_cast<Eigen::Index>(j)];
    for (size_t j = 0; j < d.complement.size(); ++j) x[d.complement[j]] = d.frozen[static_cast<Eigen::Index>(j)];
    return f.eval(x);
}

bool chart_covers(const LocalDistillation& d, const Vector& sample) {
    return (sample - d.base).lpNorm<Eigen::Infinity>() <= d.radius;
}

Atlas build_atlas(const SmoothMap& f, const std::vector<Vector>& samples, double tol) {
    Atlas atlas;
    for (const Vector& s : samples) {
        bool covered = false;
        for (const auto& chart : atlas.charts)
            if (chart_covers(chart, s)) {
                covered = true;
                break;
            }
        if (!covered) {
            LocalDistillation d = distill_at(f, s, tol);
            d.chart_id = static_cast<int>(atlas.charts.size());
            atlas.charts.push_back(std::move(d));
        }
        atlas.covered.push_back(s);
    }
    return atlas;
}

Vector match_sample(const LocalDistillation& d, const SmoothMap& f, const Vector& sample,
                    int iters) {
    Vector w(static_cast<Eigen::Index>(d.selected.size()));
    for (size_t j = 0; j < d.selected.size(); ++j) w[static_cast<Eigen::Index>(j)] = sample[d.selected[j]];
    const Vector target = f.eval(sample);
    for (int it = 0; it < iters; ++it) {
        Vector x = d.base;
        for (size_t j = 0; j < d.selected.size(); ++j) x[d.selected[j]] = w[static_cast<Eigen::Index>(j)];
        for (size_t j = 0; j < d.complement.size(); ++j) x[d.complement[j]] = d.frozen[static_cast<Eigen::Index>(j)];
        const Vector r = f.eval(x) - target;
        if (r.norm() < 1e-12) break;
        const Matrix J = map_jacobian(f, x);
        Matrix R(J.rows(), static_cast<Eigen::Index>(d.selected.size()));
        for (size_t j = 0; j < d.selected.size(); ++j) R.col(static_cast<Eigen::Index>(j)) = J.col(d.selected[j]);
        w -= R.colPivHouseholderQr().solve(r);
    }
    return w;
}

}  // namespace commutant
