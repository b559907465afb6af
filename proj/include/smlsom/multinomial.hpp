#pragma once

#include "smlsom/core.hpp"

#include <span>
#include <string_view>

namespace smlsom
{

inline constexpr double kThetaFloor = 1e-10;

/// Category probabilities of a multinomial node. Every entry is held at or
/// above kThetaFloor and the vector sums to one.
class MultinomParams
{
  public:
    explicit MultinomParams(Vector theta);

    const Vector& theta() const { return theta_; }
    const Vector& log_theta() const { return log_theta_; }
    std::size_t dim() const { return static_cast<std::size_t>(theta_.size()); }

  private:
    Vector theta_;
    Vector log_theta_;
};

/// Full log-pmf including the multinomial coefficient.
double multinom_loglik(const Eigen::Ref<const Vector>& x, const MultinomParams& theta);

/// Convex step toward the row's relative frequencies; all-zero rows leave
/// theta untouched.
MultinomParams multinom_update(const MultinomParams& theta, const Eigen::Ref<const Vector>& x,
                               double a);

/// Mean of per-row relative frequencies, skipping all-zero rows.
MultinomParams multinom_batch(const Dataset& data, std::span<const std::size_t> rows);

std::size_t multinom_df(std::size_t p);

struct MultinomialFamily
{
    using Params = MultinomParams;
    static constexpr std::string_view name = "multinomial";

    static double loglik(const Eigen::Ref<const Vector>& x, const Params& t)
    {
        return multinom_loglik(x, t);
    }
    static Params update(const Params& t, const Eigen::Ref<const Vector>& x, double a)
    {
        return multinom_update(t, x, a);
    }
    static Params batch(const Dataset& d, std::span<const std::size_t> rows)
    {
        return multinom_batch(d, rows);
    }
    static std::size_t df(std::size_t p) { return multinom_df(p); }
};

} // namespace smlsom
