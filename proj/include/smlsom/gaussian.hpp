#pragma once

#include "smlsom/core.hpp"

#include <span>
#include <string_view>

namespace smlsom
{

/// Mean and full covariance of a p-variate normal node. The constructor
/// symmetrizes the covariance and, if it is not positive definite, adds
/// eps * tr(S)/p * I with eps stepping 1e-10 .. 1e-6. The Cholesky factor is
/// cached so log-density evaluation is a triangular solve.
class GaussParams
{
  public:
    GaussParams(Vector mean, Matrix covariance);

    const Vector& mean() const { return mean_; }
    const Matrix& covariance() const { return sigma_; }
    const Matrix& cholesky() const { return chol_; }
    double log_det() const { return log_det_; }
    std::size_t dim() const { return static_cast<std::size_t>(mean_.size()); }

  private:
    Vector mean_;
    Matrix sigma_;
    Matrix chol_;
    double log_det_ = 0.0;
};

double gauss_loglik(const Eigen::Ref<const Vector>& x, const GaussParams& theta);

/// One stochastic moment step with effective rate a. The covariance
/// increment uses the residual against the mean before it moves.
GaussParams gauss_update(const GaussParams& theta, const Eigen::Ref<const Vector>& x, double a);

/// Method-of-moments estimate (1/k denominator) from the given rows.
GaussParams gauss_batch(const Dataset& data, std::span<const std::size_t> rows);

std::size_t gauss_df(std::size_t p);

struct GaussianFamily
{
    using Params = GaussParams;
    static constexpr std::string_view name = "gaussian";

    static double loglik(const Eigen::Ref<const Vector>& x, const Params& t)
    {
        return gauss_loglik(x, t);
    }
    static Params update(const Params& t, const Eigen::Ref<const Vector>& x, double a)
    {
        return gauss_update(t, x, a);
    }
    static Params batch(const Dataset& d, std::span<const std::size_t> rows)
    {
        return gauss_batch(d, rows);
    }
    static std::size_t df(std::size_t p) { return gauss_df(p); }
};

/// Gaussian nodes whose covariance never moves during training. With
/// identity covariances this is the Euclidean Kohonen map.
struct FrozenCovarianceGaussianFamily : GaussianFamily
{
    static Params update(const Params& t, const Eigen::Ref<const Vector>& x, double a)
    {
        return GaussParams(t.mean() + a * (x - t.mean()), t.covariance());
    }
};

} // namespace smlsom
