#include "smlsom/gaussian.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace smlsom
{

namespace
{

constexpr std::array<double, 5> kJitterSteps = {1e-10, 1e-9, 1e-8, 1e-7, 1e-6};

bool try_factor(const Matrix& sigma, Matrix& chol)
{
    Eigen::LLT<Matrix> llt(sigma);
    if (llt.info() != Eigen::Success)
        return false;
    chol = llt.matrixL();
    return (chol.diagonal().array() > 0.0).all() && chol.allFinite();
}

} // namespace

GaussParams::GaussParams(Vector mean, Matrix covariance)
    : mean_(std::move(mean)), sigma_(std::move(covariance))
{
    const auto p = mean_.size();
    if (p < 1 || sigma_.rows() != p || sigma_.cols() != p)
        throw std::invalid_argument("covariance shape does not match mean");
    if (!mean_.allFinite() || !sigma_.allFinite())
        throw SingularModelError("non-finite Gaussian parameters");

    sigma_ = 0.5 * (sigma_ + sigma_.transpose()).eval();

    if (!try_factor(sigma_, chol_))
    {
        // a zero-scatter covariance has no trace to scale by; fall back to unit scale
        double scale = sigma_.trace() / static_cast<double>(p);
        if (!(scale > 0.0))
            scale = 1.0;

        const Matrix base = sigma_;
        bool ok           = false;
        for (double eps : kJitterSteps)
        {
            sigma_ = base;
            sigma_.diagonal().array() += eps * scale;
            if (try_factor(sigma_, chol_))
            {
                ok = true;
                break;
            }
        }
        if (!ok)
            throw SingularModelError("covariance is not positive definite after jitter");
    }
    log_det_ = 2.0 * chol_.diagonal().array().log().sum();
}

double gauss_loglik(const Eigen::Ref<const Vector>& x, const GaussParams& theta)
{
    if (x.size() != theta.mean().size())
        throw std::invalid_argument("sample dimension does not match model");
    const Vector y = theta.cholesky().triangularView<Eigen::Lower>().solve(x - theta.mean());
    const double p = static_cast<double>(x.size());
    return -0.5 * (p * std::log(2.0 * std::numbers::pi) + theta.log_det() + y.squaredNorm());
}

GaussParams gauss_update(const GaussParams& theta, const Eigen::Ref<const Vector>& x, double a)
{
    const Vector d = x - theta.mean();
    Vector mu      = theta.mean() + a * d;
    Matrix sigma   = theta.covariance() + a * ((1.0 - a) * d * d.transpose() - theta.covariance());
    sigma          = 0.5 * (sigma + sigma.transpose()).eval();
    return GaussParams(std::move(mu), std::move(sigma));
}

GaussParams gauss_batch(const Dataset& data, std::span<const std::size_t> rows)
{
    if (rows.empty())
        throw EstimationError("cannot estimate a Gaussian from zero samples");
    const auto p   = static_cast<Eigen::Index>(data.p());
    const double k = static_cast<double>(rows.size());

    Vector mu = Vector::Zero(p);
    for (std::size_t i : rows)
        mu += data.row(i);
    mu /= k;

    // centered form of Z - z z^t
    Matrix scatter = Matrix::Zero(p, p);
    for (std::size_t i : rows)
    {
        const Vector d = data.row(i) - mu;
        scatter.selfadjointView<Eigen::Lower>().rankUpdate(d);
    }
    Matrix sigma = scatter.selfadjointView<Eigen::Lower>();
    sigma /= k;
    return GaussParams(std::move(mu), std::move(sigma));
}

std::size_t gauss_df(std::size_t p)
{
    return p + p * (p + 1) / 2;
}

} // namespace smlsom
