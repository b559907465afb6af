#pragma once

#include "smlsom/core.hpp"
#include "smlsom/gaussian.hpp"
#include "smlsom/mlsom.hpp"
#include "smlsom/multinomial.hpp"
#include "smlsom/structure.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <type_traits>
#include <vector>

namespace smlsom
{

enum class FamilyKind
{
    gaussian,
    multinomial
};

enum class InitMethod
{
    pca,
    random
};

std::string to_string(FamilyKind f);
std::string to_string(InitMethod m);
FamilyKind family_from_string(const std::string& s);
InitMethod init_from_string(const std::string& s);

struct FitConfig
{
    FamilyKind family    = FamilyKind::gaussian;
    std::size_t rows     = 3;
    std::size_t cols     = 3;
    LatticeKind lattice  = LatticeKind::hexagonal;
    double beta          = 15.0;
    double alpha0        = 0.05;
    double alpha1        = 0.01;
    std::optional<double> r1;            ///< defaults to max(rows, cols) * 2/3
    std::optional<std::size_t> tau_max;  ///< defaults to n
    std::uint64_t seed   = 1;
    InitMethod init      = InitMethod::pca;
    /// Guard against runaway loops; the outer loop normally ends long before.
    std::size_t max_cycles = 100000;

    void validate() const;
    Schedule schedule_for(std::size_t n) const;
};

struct TraceRecord
{
    std::size_t cycle = 0;
    std::size_t nodes = 0;       ///< |M| after the cycle
    std::size_t edges = 0;       ///< |B| after the cycle
    std::size_t edges_cut = 0;
    std::optional<NodeId> deleted;
    double mdl_before = 0.0;     ///< current map, before the deletion step
    double mdl = 0.0;            ///< map kept at the end of the cycle
};

template <class Params>
struct FitResult
{
    MapGraph graph;
    NodeParamsTable<Params> params;
    Assignment assignment;
    MdlScore mdl;
    std::vector<TraceRecord> trace;
    std::uint64_t seed = 0;
};

/// Linear initialization over the two leading principal axes of the
/// sample covariance: node k gets mean + A1 sqrt(l1) z1 + A2 sqrt(l2) z2 with
/// A1, A2 stepping evenly from -2 to 2 along the two lattice axes.
/// Eigenvector signs are fixed so the largest-magnitude component is positive.
std::vector<Vector> pca_init(const Dataset& data, std::size_t rows, std::size_t cols);

/// Uniform draw from the probability simplex.
Vector random_simplex_point(std::size_t p, Rng& rng);

template <class Family>
NodeParamsTable<typename Family::Params> init_params(const Dataset& data, const FitConfig& config,
                                                     Rng& rng)
{
    using Params        = typename Family::Params;
    const std::size_t m = config.rows * config.cols;
    NodeParamsTable<Params> table;

    if constexpr (std::is_same_v<Params, GaussParams>)
    {
        std::vector<Vector> means;
        if (config.init == InitMethod::pca)
            means = pca_init(data, config.rows, config.cols);
        else
        {
            std::vector<std::size_t> idx(data.n());
            for (std::size_t i = 0; i < idx.size(); ++i)
                idx[i] = i;
            if (data.n() >= m)
            {
                std::shuffle(idx.begin(), idx.end(), rng);
                idx.resize(m);
            }
            else
            {
                std::uniform_int_distribution<std::size_t> pick(0, data.n() - 1);
                idx.assign(m, 0);
                for (auto& i : idx)
                    i = pick(rng);
            }
            for (std::size_t i : idx)
                means.emplace_back(data.row(i));
        }
        const auto p = static_cast<Eigen::Index>(data.p());
        for (std::size_t k = 0; k < m; ++k)
            table.emplace(static_cast<NodeId>(k), GaussParams(means[k], Matrix::Identity(p, p)));
    }
    else
    {
        for (std::size_t k = 0; k < m; ++k)
            table.emplace(static_cast<NodeId>(k), Params(random_simplex_point(data.p(), rng)));
    }
    return table;
}

/// Shrinking loop: train, classify, cut weak links, try one node deletion;
/// stop when a cycle leaves both the node set and the edge set unchanged.
template <class Family>
FitResult<typename Family::Params> smlsom_fit(const Dataset& data, const FitConfig& config)
{
    config.validate();
    if constexpr (std::is_same_v<Family, MultinomialFamily>)
        data.require_counts();

    const Schedule sched = config.schedule_for(data.n());
    Rng rng(config.seed);

    FitResult<typename Family::Params> result;
    result.seed   = config.seed;
    result.graph  = lattice_graph(config.rows, config.cols, config.lattice);
    result.params = init_params<Family>(data, config, rng);

    for (std::size_t cycle = 1; cycle <= config.max_cycles; ++cycle)
    {
        try
        {
            result.params     = mlsom_train<Family>(data, result.graph, std::move(result.params),
                                                    sched, rng);
            result.assignment = classify<Family>(data, result.params);

            const auto cut = cut_weak_links<Family>(result.graph, data, result.assignment,
                                                    result.params, config.beta);
            auto del = try_delete_node<Family>(data, result.graph, result.assignment,
                                               result.params);

            TraceRecord rec;
            rec.cycle      = cycle;
            rec.edges_cut  = cut.size();
            rec.mdl_before = del.current.total;
            rec.mdl        = del.deleted ? del.candidate->total : del.current.total;
            if (del.deleted)
            {
                rec.deleted       = del.node;
                result.graph      = std::move(del.graph);
                result.params     = std::move(del.params);
                result.assignment = std::move(del.assignment);
            }
            rec.nodes = result.graph.node_count();
            rec.edges = result.graph.edge_count();
            result.trace.push_back(rec);

            if (cut.empty() && !del.deleted)
                break;
        }
        catch (const SingularModelError& e)
        {
            throw SingularModelError("cycle " + std::to_string(cycle) + ": " + e.what());
        }
    }

    result.assignment = classify<Family>(data, result.params);
    result.mdl        = mdl_score<Family>(data, result.assignment, result.params);
    return result;
}

/// Runs `restarts` fits with seeds seed, seed+1, ... on up to `jobs` threads
/// and keeps the lowest final MDL (earliest seed on ties). `totals`, when
/// given, receives every restart's final MDL in seed order.
template <class Family>
FitResult<typename Family::Params> fit_best_of(const Dataset& data, const FitConfig& config,
                                               std::size_t restarts, std::size_t jobs,
                                               std::vector<double>* totals = nullptr)
{
    using Result = FitResult<typename Family::Params>;
    restarts     = std::max<std::size_t>(restarts, 1);
    jobs         = std::clamp<std::size_t>(jobs, 1, restarts);

    std::vector<std::optional<Result>> results(restarts);
    std::vector<std::exception_ptr> errors(restarts);
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t k = next++; k < restarts; k = next++)
        {
            FitConfig c = config;
            c.seed      = config.seed + k;
            try
            {
                results[k] = smlsom_fit<Family>(data, c);
            }
            catch (...)
            {
                errors[k] = std::current_exception();
            }
        }
    };

    if (jobs == 1)
        worker();
    else
    {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < jobs; ++t)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }

    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);

    std::size_t best = 0;
    for (std::size_t k = 1; k < restarts; ++k)
        if (results[k]->mdl.total < results[best]->mdl.total)
            best = k;
    if (totals)
    {
        totals->clear();
        for (const auto& r : results)
            totals->push_back(r->mdl.total);
    }
    return std::move(*results[best]);
}

} // namespace smlsom
