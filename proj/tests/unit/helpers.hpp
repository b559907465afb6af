#pragma once

#include "smlsom/core.hpp"

#include <doctest.h>

#include <random>
#include <vector>

namespace testing_helpers
{

using smlsom::Dataset;
using smlsom::RowMatrix;

inline Dataset make_data(std::initializer_list<std::initializer_list<double>> rows)
{
    RowMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index r = 0;
    for (const auto& row : rows)
    {
        Eigen::Index c = 0;
        for (double v : row)
            m(r, c++) = v;
        ++r;
    }
    return Dataset(std::move(m));
}

/// Isotropic blobs around the given centers, `per` samples each.
inline Dataset blobs(const std::vector<std::vector<double>>& centers, std::size_t per, double sd,
                     std::uint64_t seed, std::vector<int>* labels = nullptr)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z(0.0, sd);
    const auto p = static_cast<Eigen::Index>(centers[0].size());
    RowMatrix m(static_cast<Eigen::Index>(centers.size() * per), p);
    Eigen::Index r = 0;
    for (std::size_t k = 0; k < centers.size(); ++k)
        for (std::size_t i = 0; i < per; ++i, ++r)
        {
            for (Eigen::Index j = 0; j < p; ++j)
                m(r, j) = centers[k][static_cast<std::size_t>(j)] + z(rng);
            if (labels)
                labels->push_back(static_cast<int>(k) + 1);
        }
    return Dataset(std::move(m));
}

inline smlsom::Matrix random_spd(std::size_t p, std::mt19937_64& rng)
{
    std::normal_distribution<double> z(0.0, 1.0);
    const auto d = static_cast<Eigen::Index>(p);
    smlsom::Matrix g(d + 2, d);
    for (Eigen::Index r = 0; r < g.rows(); ++r)
        for (Eigen::Index c = 0; c < g.cols(); ++c)
            g(r, c) = z(rng);
    return g.transpose() * g / static_cast<double>(d + 2) + 0.1 * smlsom::Matrix::Identity(d, d);
}

} // namespace testing_helpers
