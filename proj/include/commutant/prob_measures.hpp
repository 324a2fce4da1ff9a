#pragma once

#include <functional>
#include <vector>

#include "commutant/geometry.hpp"

namespace commutant {

/// Equal-weight empirical measure.
struct SampleMeasure {
    std::vector<Vector> samples;
    int dim = 0;

    SampleMeasure() = default;
    explicit SampleMeasure(std::vector<Vector> pts);
};

SampleMeasure pushforward(const SampleMeasure& m, const std::function<Vector(const Vector&)>& f);
SampleMeasure pushforward(const SampleMeasure& m, const SmoothMap& f);

/// Max over samples s of || phi2(s) - (phi2 . phi1^-1)(phi1(s)) ||; validates
/// chart/inverse wiring, so the contract is <= 1e-10.
double consistency_check(const SampleMeasure& m, const SmoothMap& phi1, const SmoothMap& phi2);

struct GaussianLikelihoodFamily {
    double sigma = 0.1;  // data-space noise scale
    int dim = 1;

    GaussianLikelihoodFamily(double sigma_, int dim_);
};

/// Isotropic Gaussian log-density of data x about manifold point m.
double log_likelihood(const GaussianLikelihoodFamily& fam, const Vector& mean, const Vector& x);

/// Symmetric KL divergence between the two charts' likelihoods per probe:
/// || phi1^-1(v) - phi2^-1(v) ||^2 / sigma^2.
std::vector<double> likelihood_gap(const GaussianLikelihoodFamily& fam,
                                   const std::function<Vector(const Vector&)>& inv1,
                                   const std::function<Vector(const Vector&)>& inv2,
                                   const std::vector<Vector>& probes);

struct MixtureReport {
    std::vector<Vector> means;     // one per permutation, lexicographic order
    std::vector<double> weights;   // renormalized prior
    bool collapsed = false;
    double max_separation = 0.0;
    bool prior_renormalized = false;  // input prior deviated from sum 1 by > 1e-6
};

/// Order-marginalized likelihood components: enumerate all k! orderings of
/// the factor flows, composing theta_{sigma(1)} o ... o theta_{sigma(k)} at p.
/// Prior has k! entries in lexicographic permutation order (uniform if empty).
MixtureReport mixture_likelihood(const std::vector<Flow>& factors, const Vector& T,
                                 const Vector& p, std::vector<double> prior,
                                 const GaussianLikelihoodFamily& fam,
                                 double collapse_tol = -1.0);

}  // namespace commutant
