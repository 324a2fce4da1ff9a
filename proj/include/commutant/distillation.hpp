#pragma once

#include <vector>

#include "commutant/geometry.hpp"

namespace commutant {

struct RankReport {
    Vector point;
    std::vector<double> singular_values;  // descending
    int rank = 0;
    double tol = 0.0;
};

/// Rank of a matrix from its singular values: count of sigma > tol * sigma_max.
RankReport rank_report(const Matrix& J, const Vector& at, double tol);

RankReport local_rank(const SmoothMap& f, const Vector& x, double tol = 1e-8);

struct LocalDistillation {
    Vector base;                // full latent base point
    std::vector<int> selected;  // latent indices kept, pivot order
    std::vector<int> complement;
    Vector frozen;              // values of the complement indices at base
    int chart_id = 0;
    double radius = 0.0;        // inf-norm validity half-width around base
};

/// Constant-rank local distillation: keeps rank-many latent indices
/// chosen by column-pivoted QR of the Jacobian, freezes the rest, and finds
/// a validity radius by bisection on full-rank probes.
LocalDistillation distill_at(const SmoothMap& f, const Vector& x, double tol = 1e-8);

/// f with selected coordinates set to w and the complement frozen.
Vector evaluate_distilled(const LocalDistillation& d, const SmoothMap& f, const Vector& w);

struct Atlas {
    std::vector<LocalDistillation> charts;
    std::vector<Vector> covered;
};

/// Greedy cover: a sample already within an existing chart's radius is
/// skipped, otherwise it seeds a new chart.  Order-dependent by construction.
Atlas build_atlas(const SmoothMap& f, const std::vector<Vector>& samples, double tol = 1e-8);

bool chart_covers(const LocalDistillation& d, const Vector& sample);

/// Gauss-Newton solve for the distilled parameters w reproducing f(sample);
/// used to witness surjectivity of the atlas onto its samples.
Vector match_sample(const LocalDistillation& d, const SmoothMap& f, const Vector& sample,
                    int iters = 20);

}  // namespace commutant
