#pragma once

#include "smlsom/core.hpp"
#include "smlsom/mlsom.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace smlsom
{

struct CovarianceStructure
{
    bool spherical   = true;
    bool homogeneous = false;

    std::string to_string() const;
    static CovarianceStructure parse(const std::string& s);
};

/// Gaussian mixture used to simulate labeled data.
struct MixtureSpec
{
    std::vector<double> pi;
    std::vector<Vector> means;
    std::vector<Matrix> covariances;
    CovarianceStructure structure;

    std::size_t components() const { return pi.size(); }
    std::size_t dim() const { return means.empty() ? 0 : static_cast<std::size_t>(means[0].size()); }

    void validate() const;
    MixtureSpec scaled(double c) const;
};

class CalibrationError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Means uniform on [0,1]^p. Non-spherical covariances are standard Wishart
/// with p+1 degrees of freedom; spherical ones are sigma I with sigma
/// uniform on (0,1). Homogeneous mixtures share one draw. Empty `pi` means
/// uniform weights.
MixtureSpec random_mixture(std::size_t p, std::size_t components, CovarianceStructure structure,
                           Rng& rng, std::vector<double> pi = {});

struct OverlapEstimate
{
    /// conditional(m, l) = Pr[component l beats m | x from m]
    Matrix conditional;
    /// pairwise(m, l) = conditional(m, l) + conditional(l, m)
    Matrix pairwise;
    double average = 0.0;
};

/// Monte Carlo misclassification overlap, n_mc draws per component. Ties
/// count as correctly classified.
OverlapEstimate overlap_mc(const MixtureSpec& spec, std::size_t n_mc, Rng& rng);

struct Calibration
{
    MixtureSpec spec;
    double scale    = 1.0;
    double achieved = 0.0;
    std::size_t evaluations = 0;
};

inline double overlap_tolerance(double target)
{
    return std::max(0.002, 0.05 * target);
}

/// Finds c such that scaling every covariance by c hits the target average
/// overlap. Each evaluation reuses one seed so the objective is noise free.
Calibration calibrate_overlap(const MixtureSpec& spec, double target, std::size_t n_mc, Rng& rng);

struct LabeledSample
{
    RowMatrix values;
    std::vector<int> labels;  ///< 1-based component index
};

LabeledSample sample_mixture(const MixtureSpec& spec, std::size_t n, Rng& rng);

} // namespace smlsom
