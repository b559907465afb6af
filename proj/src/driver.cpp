#include "smlsom/driver.hpp"

#include <cmath>

namespace smlsom
{

std::string to_string(FamilyKind f)
{
    return f == FamilyKind::gaussian ? "gaussian" : "multinomial";
}

std::string to_string(InitMethod m)
{
    return m == InitMethod::pca ? "pca" : "random";
}

FamilyKind family_from_string(const std::string& s)
{
    if (s == "gaussian")
        return FamilyKind::gaussian;
    if (s == "multinomial")
        return FamilyKind::multinomial;
    throw std::invalid_argument("unknown family '" + s + "'");
}

InitMethod init_from_string(const std::string& s)
{
    if (s == "pca")
        return InitMethod::pca;
    if (s == "random")
        return InitMethod::random;
    throw std::invalid_argument("unknown init method '" + s + "'");
}

void FitConfig::validate() const
{
    if (rows < 1 || cols < 1 || rows * cols < 2)
        throw std::invalid_argument("lattice must have at least 2 nodes");
    if (!(beta >= 0.0))
        throw std::invalid_argument("beta must be non-negative");
    if (tau_max && *tau_max < 1)
        throw std::invalid_argument("tau_max must be at least 1");
}

Schedule FitConfig::schedule_for(std::size_t n) const
{
    Schedule s;
    s.alpha0  = alpha0;
    s.alpha1  = alpha1;
    s.r1      = r1.value_or(default_radius(rows, cols));
    s.tau_max = tau_max.value_or(n);
    s.validate();
    return s;
}

namespace
{

void fix_sign(Vector& v)
{
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v[arg] < 0.0)
        v = -v;
}

double lattice_step(std::size_t pos, std::size_t extent)
{
    if (extent <= 1)
        return 0.0;
    return -2.0 + static_cast<double>(pos) * 4.0 / static_cast<double>(extent - 1);
}

} // namespace

std::vector<Vector> pca_init(const Dataset& data, std::size_t rows, std::size_t cols)
{
    const auto p       = static_cast<Eigen::Index>(data.p());
    const Vector mean  = data.values().colwise().mean().transpose();
    const Matrix centered = data.values().rowwise() - mean.transpose();
    const Matrix cov   = centered.transpose() * centered / static_cast<double>(data.n());

    Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
    if (eig.info() != Eigen::Success)
        throw std::runtime_error("eigen-decomposition of the sample covariance failed");

    // eigenvalues come back ascending
    Vector z1       = eig.eigenvectors().col(p - 1);
    const double l1 = std::max(eig.eigenvalues()[p - 1], 0.0);
    fix_sign(z1);
    Vector z2 = Vector::Zero(p);
    double l2 = 0.0;
    if (p >= 2)
    {
        z2 = eig.eigenvectors().col(p - 2);
        l2 = std::max(eig.eigenvalues()[p - 2], 0.0);
        fix_sign(z2);
    }

    std::vector<Vector> out;
    out.reserve(rows * cols);
    for (std::size_t k = 0; k < rows * cols; ++k)
    {
        const double a1 = lattice_step(k % rows, rows);
        const double a2 = lattice_step(k / rows, cols);
        out.push_back(mean + a1 * std::sqrt(l1) * z1 + a2 * std::sqrt(l2) * z2);
    }
    return out;
}

Vector random_simplex_point(std::size_t p, Rng& rng)
{
    std::exponential_distribution<double> expo(1.0);
    Vector v(static_cast<Eigen::Index>(p));
    for (Eigen::Index j = 0; j < v.size(); ++j)
        v[j] = expo(rng);
    return v / v.sum();
}

} // namespace smlsom
