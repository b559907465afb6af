#pragma once

#include "smlsom/core.hpp"

#include <functional>
#include <limits>
#include <map>
#include <random>

namespace smlsom
{

template <class Params>
using NodeParamsTable = std::map<NodeId, Params>;

using Rng = std::mt19937_64;

/// Called once per training step with the drawn sample and its winner.
using StepObserver = std::function<void(std::size_t tau, std::size_t sample, NodeId winner)>;

/// Maximum-likelihood node; ties go to the smallest id. `excluded` is
/// skipped, which lets node deletion reassign a candidate's samples.
template <class Family>
NodeId find_winner(const Eigen::Ref<const Vector>& x,
                   const NodeParamsTable<typename Family::Params>& params,
                   std::optional<NodeId> excluded = std::nullopt)
{
    NodeId best      = 0;
    double best_ll   = -std::numeric_limits<double>::infinity();
    bool found       = false;
    for (const auto& [id, theta] : params)
    {
        if (excluded && id == *excluded)
            continue;
        const double ll = Family::loglik(x, theta);
        if (!found || ll > best_ll)
        {
            best    = id;
            best_ll = ll;
            found   = true;
        }
    }
    if (!found)
        throw std::invalid_argument("find_winner needs at least one candidate node");
    return best;
}

template <class Family>
Assignment classify(const Dataset& data, const NodeParamsTable<typename Family::Params>& params)
{
    Assignment out(data.n());
    for (std::size_t i = 0; i < data.n(); ++i)
        out[i] = find_winner<Family>(data.row(i), params);
    return out;
}

template <class Params>
void require_consistent(const MapGraph& graph, const NodeParamsTable<Params>& params)
{
    if (params.size() != graph.node_count())
        throw std::invalid_argument("parameter table does not match the map's live nodes");
    auto it = params.begin();
    for (NodeId id : graph.nodes())
    {
        if (it->first != id)
            throw std::invalid_argument("parameter table does not match the map's live nodes");
        ++it;
    }
}

/// tau_max draws with replacement; the winner and every node within the
/// current hop radius take one moment step at rate alpha(tau).
template <class Family>
NodeParamsTable<typename Family::Params>
mlsom_train(const Dataset& data, const MapGraph& graph,
            NodeParamsTable<typename Family::Params> params, const Schedule& sched, Rng& rng,
            const StepObserver& observer = {})
{
    sched.validate();
    require_consistent(graph, params);
    if (params.empty())
        throw std::invalid_argument("cannot train an empty map");

    const auto hops = all_hop_distances(graph);
    std::uniform_int_distribution<std::size_t> pick(0, data.n() - 1);

    for (std::size_t tau = 1; tau <= sched.tau_max; ++tau)
    {
        const std::size_t i = pick(rng);
        const auto x        = data.row(i);
        const NodeId c      = find_winner<Family>(x, params);
        if (observer)
            observer(tau, i, c);

        const double alpha  = schedule_alpha(sched, tau);
        const double radius = schedule_radius(sched, tau);
        for (auto& [id, theta] : params)
            if (neighborhood_indicator(hops[c][id], radius) == 1)
                theta = Family::update(theta, x, alpha);
    }
    return params;
}

} // namespace smlsom
