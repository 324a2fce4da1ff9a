#include "commutant/prob_measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace commutant {

SampleMeasure::SampleMeasure(std::vector<Vector> pts) : samples(std::move(pts)) {
    if (samples.empty()) throw std::invalid_argument("SampleMeasure: empty sample set");
    dim = static_cast<int>(samples.front().size());
    for (const Vector& s : samples) {
        if (s.size() != dim) throw DimensionError("SampleMeasure: mixed dims");
        require_finite(s, "SampleMeasure sample");
    }
}

SampleMeasure pushforward(const SampleMeasure& m, const std::function<Vector(const Vector&)>& f) {
    std::vector<Vector> out;
    out.reserve(m.samples.size());
    for (const Vector& s : m.samples) {
        Vector y = f(s);
        if (!y.allFinite()) throw NumericalError("pushforward: map produced non-finite image");
        out.push_back(std::move(y));
    }
    return SampleMeasure(std::move(out));
}

SampleMeasure pushforward(const SampleMeasure& m, const SmoothMap& f) {
    if (m.dim != f.domain_dim) throw DimensionError("pushforward: dim mismatch");
    return pushforward(m, f.eval);
}

double consistency_check(const SampleMeasure& m, const SmoothMap& phi1, const SmoothMap& phi2) {
    if (!phi1.inverse) throw std::invalid_argument("consistency_check: phi1 has no inverse");
    double worst = 0.0;
    for (const Vector& s : m.samples) {
        const Vector via_transition = phi2.eval(phi1.inverse(phi1.eval(s)));
        worst = std::max(worst, (phi2.eval(s) - via_transition).norm());
    }
    return worst;
}

GaussianLikelihoodFamily::GaussianLikelihoodFamily(double sigma_, int dim_)
    : sigma(sigma_), dim(dim_) {
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw std::invalid_argument("GaussianLikelihoodFamily: sigma must be finite positive");
    if (dim < 1) throw std::invalid_argument("GaussianLikelihoodFamily: dim must be positive");
}

double log_likelihood(const GaussianLikelihoodFamily& fam, const Vector& mean, const Vector& x) {
    require_dim(mean, fam.dim, "log_likelihood mean");
    require_dim(x, fam.dim, "log_likelihood x");
    const double two_pi = 2.0 * M_PI;
    return -0.5 * fam.dim * std::log(two_pi * fam.sigma * fam.sigma) -
           (x - mean).squaredNorm() / (2.0 * fam.sigma * fam.sigma);
}

std::vector<double> likelihood_gap(const GaussianLikelihoodFamily& fam,
                                   const std::function<Vector(const Vector&)>& inv1,
                                   const std::function<Vector(const Vector&)>& inv2,
                                   const std::vector<Vector>& probes) {
    std::vector<double> gaps;
    gaps.reserve(probes.size());
    for (const Vector& v : probes)
        gaps.push_back((inv1(v) - inv2(v)).squaredNorm() / (fam.sigma * fam.sigma));
    return gaps;
}

MixtureReport mixture_likelihood(const std::vector<Flow>& factors, const Vector& T,
                                 const Vector& p, std::vector<double> prior,
                                 const GaussianLikelihoodFamily& fam, double collapse_tol) {
    const int k = static_cast<int>(factors.size());
    if (k < 1) throw std::invalid_argument("mixture_likelihood: no factors");
    if (k > 6) throw std::invalid_argument("mixture_likelihood: more than 6 factors");
    require_dim(T, k, "mixture_likelihood T");
    require_dim(p, fam.dim, "mixture_likelihood p");

    size_t kfact = 1;
    for (int i = 2; i <= k; ++i) kfact *= static_cast<size_t>(i);

    MixtureReport rep;
    if (prior.empty()) prior.assign(kfact, 1.0 / static_cast<double>(kfact));
    if (prior.size() != kfact)
        throw std::invalid_argument("mixture_likelihood: prior must have k! entries");
    double sum = std::accumulate(prior.begin(), prior.end(), 0.0);
    for (double w : prior)
        if (w < 0.0) throw std::invalid_argument("mixture_likelihood: negative prior weight");
    if (sum <= 0.0) throw std::invalid_argument("mixture_likelihood: prior sums to zero");
    rep.prior_renormalized = std::abs(sum - 1.0) > 1e-6;
    for (double& w : prior) w /= sum;
    rep.weights = std::move(prior);

    if (collapse_tol < 0.0) {
        // Couple the collapse tolerance to the integrator's global O(h^4)
        // error for any numerically integrated factor.
        double rk4 = 0.0;
        for (int i = 0; i < k; ++i)
            if (factors[static_cast<size_t>(i)].kind == Flow::Kind::Integrated) {
                const double h = 1.0 / factors[static_cast<size_t>(i)].steps_per_unit;
                rk4 = std::max(rk4, std::abs(T[i]) * h * h * h * h);
            }
        collapse_tol = 1e-9 + 10.0 * rk4;
    }

    // f_sigma(T) = theta_{sigma(1)} o ... o theta_{sigma(k)} applied to p.
    std::vector<int> perm(static_cast<size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    do {
        Vector q = p;
        for (int j = k - 1; j >= 0; --j) {
            const int i = perm[static_cast<size_t>(j)];
            q = flow_eval(factors[static_cast<size_t>(i)], T[i], q);
        }
        rep.means.push_back(std::move(q));
    } while (std::next_permutation(perm.begin(), perm.end()));

    for (size_t a = 0; a < rep.means.size(); ++a)
        for (size_t b = a + 1; b < rep.means.size(); ++b)
            rep.max_separation = std::max(rep.max_separation,
                                          (rep.means[a] - rep.means[b]).norm());
    rep.collapsed = rep.max_separation <= collapse_tol;
    return rep;
}

}  // namespace commutant
