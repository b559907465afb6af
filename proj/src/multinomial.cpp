#include "smlsom/multinomial.hpp"

#include <cmath>

namespace smlsom
{

namespace
{

// Pin entries below the floor to exactly kThetaFloor and rescale the rest so
// the total stays one. Repeats because rescaling can push another entry under.
void floor_and_normalize(Vector& theta)
{
    const auto p = theta.size();
    theta /= theta.sum();
    std::vector<bool> pinned(static_cast<std::size_t>(p), false);
    for (Eigen::Index round = 0; round <= p; ++round)
    {
        bool changed = false;
        for (Eigen::Index j = 0; j < p; ++j)
            if (!pinned[j] && theta[j] < kThetaFloor)
            {
                pinned[j] = true;
                changed   = true;
            }
        double free_mass = 0.0;
        Eigen::Index n_pinned = 0;
        for (Eigen::Index j = 0; j < p; ++j)
        {
            if (pinned[j])
                ++n_pinned;
            else
                free_mass += theta[j];
        }
        const double target = 1.0 - static_cast<double>(n_pinned) * kThetaFloor;
        for (Eigen::Index j = 0; j < p; ++j)
            theta[j] = pinned[j] ? kThetaFloor : theta[j] * target / free_mass;
        if (!changed)
            break;
    }
}

} // namespace

MultinomParams::MultinomParams(Vector theta) : theta_(std::move(theta))
{
    if (theta_.size() < 2)
        throw std::invalid_argument("multinomial needs at least 2 categories");
    if (!theta_.allFinite() || (theta_.array() < 0.0).any() || !(theta_.sum() > 0.0))
        throw std::invalid_argument("multinomial probabilities must be finite and non-negative");
    floor_and_normalize(theta_);
    log_theta_ = theta_.array().log();
}

double multinom_loglik(const Eigen::Ref<const Vector>& x, const MultinomParams& theta)
{
    if (x.size() != theta.theta().size())
        throw std::invalid_argument("sample dimension does not match model");
    double total  = 0.0;
    double result = 0.0;
    for (Eigen::Index j = 0; j < x.size(); ++j)
    {
        const double c = x[j];
        total += c;
        if (c > 0.0)
            result += c * theta.log_theta()[j] - std::lgamma(c + 1.0);
    }
    return result + std::lgamma(total + 1.0);
}

MultinomParams multinom_update(const MultinomParams& theta, const Eigen::Ref<const Vector>& x,
                               double a)
{
    const double total = x.sum();
    if (!(total > 0.0))
        return theta;
    return MultinomParams(theta.theta() + a * (x / total - theta.theta()));
}

MultinomParams multinom_batch(const Dataset& data, std::span<const std::size_t> rows)
{
    if (rows.empty())
        throw EstimationError("cannot estimate a multinomial from zero samples");
    Vector acc       = Vector::Zero(static_cast<Eigen::Index>(data.p()));
    std::size_t used = 0;
    for (std::size_t i : rows)
    {
        const auto x       = data.row(i);
        const double total = x.sum();
        if (!(total > 0.0))
            continue;
        acc += x / total;
        ++used;
    }
    if (used == 0)
        throw EstimationError("every sample row is zero");
    return MultinomParams(acc / static_cast<double>(used));
}

std::size_t multinom_df(std::size_t p)
{
    if (p < 2)
        throw std::invalid_argument("multinomial needs at least 2 categories");
    return p - 1;
}

} // namespace smlsom
