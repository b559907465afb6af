#pragma once

// Brute-force references for the test suite. Everything here uses plain
// std::vector arithmetic so that it shares no code path with the library.

#include "smlsom/core.hpp"
#include "smlsom/gaussian.hpp"
#include "smlsom/multinomial.hpp"

#include <cstdint>
#include <map>
#include <random>
#include <vector>

namespace oracle
{

using Dense = std::vector<std::vector<double>>;

Dense to_dense(const smlsom::Matrix& m);
std::vector<double> to_vec(const Eigen::Ref<const smlsom::Vector>& v);

/// Gauss-Jordan inverse with partial pivoting; the determinant comes along.
Dense inverse(const Dense& a, double* det = nullptr);

double gauss_loglik(const std::vector<double>& x, const std::vector<double>& mean, const Dense& cov);

/// Exact factorials, so only safe for small counts.
double multinom_logpmf(const std::vector<double>& counts, const std::vector<double>& theta);

double gauss_kl(const smlsom::GaussParams& m, const smlsom::GaussParams& l);

double ari(const std::vector<std::int64_t>& u, const std::vector<std::int64_t>& v);
double nmi(const std::vector<std::int64_t>& u, const std::vector<std::int64_t>& v);

double mdl_gauss(const smlsom::Dataset& data, const smlsom::Assignment& assignment,
                 const std::map<smlsom::NodeId, smlsom::GaussParams>& params);
double mdl_multinom(const smlsom::Dataset& data, const smlsom::Assignment& assignment,
                    const std::map<smlsom::NodeId, smlsom::MultinomParams>& params);

/// Plain Euclidean SOM on the same lattice and schedule, drawing samples in
/// the same order as the library trainer. Returns the winner at every step.
std::vector<smlsom::NodeId> kohonen_winners(const smlsom::Dataset& data, const smlsom::MapGraph& graph,
                                            std::map<smlsom::NodeId, std::vector<double>> means,
                                            const smlsom::Schedule& sched, std::mt19937_64& rng);

/// Jacobi eigen solver for symmetric matrices, eigenvalues descending.
void symmetric_eigen(const Dense& a, std::vector<double>& values, Dense& vectors);

/// Node means of the linear principal-axis initialization, computed from scratch.
std::vector<std::vector<double>> pca_means(const smlsom::Dataset& data, std::size_t rows,
                                           std::size_t cols);

} // namespace oracle
