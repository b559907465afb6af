#include "smlsom/datagen.hpp"

#include <cmath>
#include <numbers>

namespace smlsom
{

std::string CovarianceStructure::to_string() const
{
    return std::string(spherical ? "spherical" : "nonspherical") + "-" +
           (homogeneous ? "homogeneous" : "heterogeneous");
}

CovarianceStructure CovarianceStructure::parse(const std::string& s)
{
    const auto dash = s.find('-');
    if (dash == std::string::npos)
        throw std::invalid_argument("structure must look like spherical-heterogeneous");
    const std::string shape = s.substr(0, dash);
    const std::string mix   = s.substr(dash + 1);
    CovarianceStructure out;
    if (shape == "spherical")
        out.spherical = true;
    else if (shape == "nonspherical")
        out.spherical = false;
    else
        throw std::invalid_argument("unknown covariance shape '" + shape + "'");
    if (mix == "homogeneous")
        out.homogeneous = true;
    else if (mix == "heterogeneous")
        out.homogeneous = false;
    else
        throw std::invalid_argument("unknown covariance mix '" + mix + "'");
    return out;
}

void MixtureSpec::validate() const
{
    const std::size_t m = components();
    if (m < 1 || means.size() != m || covariances.size() != m)
        throw std::invalid_argument("mixture components are inconsistent");
    double total = 0.0;
    for (double w : pi)
    {
        if (!(w >= 0.0))
            throw std::invalid_argument("mixing probabilities must be non-negative");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("mixing probabilities must sum to 1");
    const auto p = static_cast<Eigen::Index>(dim());
    for (std::size_t k = 0; k < m; ++k)
    {
        if (means[k].size() != p || covariances[k].rows() != p || covariances[k].cols() != p)
            throw std::invalid_argument("mixture component has the wrong dimension");
        if (Eigen::LLT<Matrix>(covariances[k]).info() != Eigen::Success)
            throw std::invalid_argument("mixture covariance is not positive definite");
    }
}

MixtureSpec MixtureSpec::scaled(double c) const
{
    MixtureSpec out = *this;
    for (auto& s : out.covariances)
        s *= c;
    return out;
}

MixtureSpec random_mixture(std::size_t p, std::size_t components, CovarianceStructure structure,
                           Rng& rng, std::vector<double> pi)
{
    if (components < 2 || p < 1)
        throw std::invalid_argument("need p >= 1 and at least 2 components");
    if (pi.empty())
        pi.assign(components, 1.0 / static_cast<double>(components));
    if (pi.size() != components)
        throw std::invalid_argument("mixing probability count does not match components");

    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto dim = static_cast<Eigen::Index>(p);

    auto draw_cov = [&]() -> Matrix {
        if (structure.spherical)
        {
            double s = 0.0;
            while (!(s > 0.0))
                s = unif(rng);
            return s * Matrix::Identity(dim, dim);
        }
        Matrix g(dim + 1, dim);
        for (Eigen::Index r = 0; r < g.rows(); ++r)
            for (Eigen::Index c = 0; c < g.cols(); ++c)
                g(r, c) = normal(rng);
        return g.transpose() * g;
    };

    MixtureSpec spec;
    spec.pi        = std::move(pi);
    spec.structure = structure;
    for (std::size_t k = 0; k < components; ++k)
    {
        Vector mu(dim);
        for (Eigen::Index j = 0; j < dim; ++j)
            mu[j] = unif(rng);
        spec.means.push_back(std::move(mu));
    }
    if (structure.homogeneous)
        spec.covariances.assign(components, draw_cov());
    else
        for (std::size_t k = 0; k < components; ++k)
            spec.covariances.push_back(draw_cov());
    spec.validate();
    return spec;
}

namespace
{

struct Component
{
    Vector mean;
    Matrix chol;
    double log_norm;  ///< log pi - 0.5 (p log 2pi + log det)
};

std::vector<Component> factor_components(const MixtureSpec& spec)
{
    const double p = static_cast<double>(spec.dim());
    std::vector<Component> out;
    for (std::size_t k = 0; k < spec.components(); ++k)
    {
        Eigen::LLT<Matrix> llt(spec.covariances[k]);
        if (llt.info() != Eigen::Success)
            throw std::invalid_argument("mixture covariance is not positive definite");
        Matrix l           = llt.matrixL();
        const double ldet  = 2.0 * l.diagonal().array().log().sum();
        const double lpi   = spec.pi[k] > 0.0 ? std::log(spec.pi[k])
                                              : -std::numeric_limits<double>::infinity();
        out.push_back({spec.means[k], std::move(l),
                       lpi - 0.5 * (p * std::log(2.0 * std::numbers::pi) + ldet)});
    }
    return out;
}

double weighted_log_density(const Component& c, const Vector& x)
{
    const Vector y = c.chol.triangularView<Eigen::Lower>().solve(x - c.mean);
    return c.log_norm - 0.5 * y.squaredNorm();
}

} // namespace

OverlapEstimate overlap_mc(const MixtureSpec& spec, std::size_t n_mc, Rng& rng)
{
    spec.validate();
    if (n_mc < 1000)
        throw std::invalid_argument("overlap estimation needs at least 1000 draws");

    const auto comps = factor_components(spec);
    const auto m     = static_cast<Eigen::Index>(spec.components());
    const auto p     = static_cast<Eigen::Index>(spec.dim());
    std::normal_distribution<double> normal(0.0, 1.0);

    OverlapEstimate est;
    est.conditional = Matrix::Zero(m, m);
    Vector z(p);
    Vector scores(m);
    for (Eigen::Index src = 0; src < m; ++src)
    {
        std::vector<std::size_t> wrong(static_cast<std::size_t>(m), 0);
        for (std::size_t draw = 0; draw < n_mc; ++draw)
        {
            for (Eigen::Index j = 0; j < p; ++j)
                z[j] = normal(rng);
            if (spec.pi[src] <= 0.0)
                continue;
            const Vector x = comps[src].mean + comps[src].chol * z;
            for (Eigen::Index l = 0; l < m; ++l)
                scores[l] = weighted_log_density(comps[l], x);
            for (Eigen::Index l = 0; l < m; ++l)
                if (l != src && scores[l] > scores[src])
                    ++wrong[l];
        }
        for (Eigen::Index l = 0; l < m; ++l)
            est.conditional(src, l) = static_cast<double>(wrong[l]) / static_cast<double>(n_mc);
    }
    est.pairwise = est.conditional + est.conditional.transpose();

    double acc = 0.0;
    for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index b = a + 1; b < m; ++b)
            acc += est.pairwise(a, b);
    est.average = acc / (0.5 * static_cast<double>(m * (m - 1)));
    return est;
}

Calibration calibrate_overlap(const MixtureSpec& spec, double target, std::size_t n_mc, Rng& rng)
{
    if (!(target > 0.0 && target < 1.0))
        throw std::invalid_argument("target overlap must lie in (0, 1)");
    const std::uint64_t seed = rng();
    const double tol         = overlap_tolerance(target);

    Calibration cal;
    std::optional<double> best_c;
    double best_value = 0.0;
    auto evaluate     = [&](double c) {
        Rng local(seed);
        const double v = overlap_mc(spec.scaled(c), n_mc, local).average;
        ++cal.evaluations;
        if (!best_c || std::abs(v - target) < std::abs(best_value - target))
        {
            best_c     = c;
            best_value = v;
        }
        return v;
    };
    auto finish = [&]() {
        cal.scale    = *best_c;
        cal.achieved = best_value;
        cal.spec     = spec.scaled(*best_c);
        return cal;
    };

    double lo = 1e-3, hi = 1e3;
    double f_lo = evaluate(lo);
    while (f_lo > target && lo > 1e-6 * 1.0001)
    {
        lo /= 10.0;
        f_lo = evaluate(lo);
    }
    double f_hi = evaluate(hi);
    while (f_hi < target && hi < 1e6 / 1.0001)
    {
        hi *= 10.0;
        f_hi = evaluate(hi);
    }
    if (f_lo > target || f_hi < target)
        throw CalibrationError("target overlap " + std::to_string(target) +
                               " is not reachable with covariance scales in [1e-6, 1e6]");

    for (int iter = 0; iter < 40; ++iter)
    {
        const double mid = std::sqrt(lo * hi);
        const double v   = evaluate(mid);
        if (std::abs(v - target) <= tol)
        {
            best_c     = mid;
            best_value = v;
            break;
        }
        if (v < target)
            lo = mid;
        else
            hi = mid;
    }
    return finish();
}

LabeledSample sample_mixture(const MixtureSpec& spec, std::size_t n, Rng& rng)
{
    spec.validate();
    if (n < 1)
        throw std::invalid_argument("sample size must be at least 1");
    const auto comps = factor_components(spec);
    const auto p     = static_cast<Eigen::Index>(spec.dim());

    std::discrete_distribution<std::size_t> which(spec.pi.begin(), spec.pi.end());
    std::normal_distribution<double> normal(0.0, 1.0);

    LabeledSample out;
    out.values.resize(static_cast<Eigen::Index>(n), p);
    out.labels.resize(n);
    Vector z(p);
    for (std::size_t i = 0; i < n; ++i)
    {
        const std::size_t k = which(rng);
        for (Eigen::Index j = 0; j < p; ++j)
            z[j] = normal(rng);
        out.values.row(static_cast<Eigen::Index>(i)) =
            (comps[k].mean + comps[k].chol * z).transpose();
        out.labels[i] = static_cast<int>(k) + 1;
    }
    return out;
}

} // namespace smlsom
