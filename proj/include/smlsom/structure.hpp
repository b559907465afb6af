#pragma once

#include "smlsom/core.hpp"
#include "smlsom/mlsom.hpp"

#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace smlsom
{

/// Classification MDL: -ln L_C + df/2 ln n + n ln |M|, natural logs.
struct MdlScore
{
    double neg_loglik = 0.0;
    double complexity = 0.0;
    double indexing   = 0.0;
    double total      = 0.0;
};

/// Lower bound on the link-cut threshold scale when every node's average
/// log-likelihood is non-negative.
inline constexpr double kMinCutScale = 1e-12;

using Members = std::map<NodeId, std::vector<std::size_t>>;

/// Sample indices per node; every node in `nodes` gets an entry, possibly empty.
inline Members group_members(const Assignment& assignment, const std::vector<NodeId>& nodes)
{
    Members out;
    for (NodeId id : nodes)
        out[id];
    for (std::size_t i = 0; i < assignment.size(); ++i)
    {
        auto it = out.find(assignment[i]);
        if (it == out.end())
            throw std::invalid_argument("assignment refers to node " +
                                        std::to_string(assignment[i]) + " which is not live");
        it->second.push_back(i);
    }
    return out;
}

/// Average log-likelihood ratio of theta_m over theta_l on the members of m.
template <class Family>
double kl_estimate(const Dataset& data, std::span<const std::size_t> members,
                   const typename Family::Params& theta_m, const typename Family::Params& theta_l)
{
    if (members.empty())
        throw std::invalid_argument("kl_estimate needs at least one member");
    double acc = 0.0;
    for (std::size_t i : members)
    {
        const auto x = data.row(i);
        acc += Family::loglik(x, theta_m) - Family::loglik(x, theta_l);
    }
    return acc / static_cast<double>(members.size());
}

namespace detail
{

template <class Family>
double weakness(const Dataset& data, const Members& members,
                const NodeParamsTable<typename Family::Params>& params, NodeId m, NodeId l)
{
    const auto& sm = members.at(m);
    const auto& sl = members.at(l);
    // a node without samples gives no evidence of being a neighbor
    if (sm.empty() || sl.empty())
        return std::numeric_limits<double>::infinity();
    const auto& tm = params.at(m);
    const auto& tl = params.at(l);
    return 0.5 * kl_estimate<Family>(data, sm, tm, tl) + 0.5 * kl_estimate<Family>(data, sl, tl, tm);
}

} // namespace detail

/// Symmetrized KL estimate between adjacent nodes m and l. Infinite when
/// either node has no samples.
template <class Family>
double link_weakness(const Dataset& data, const Assignment& assignment,
                     const NodeParamsTable<typename Family::Params>& params, NodeId m, NodeId l)
{
    if (m == l)
        throw std::invalid_argument("link_weakness needs two distinct nodes");
    std::vector<NodeId> nodes;
    for (const auto& kv : params)
        nodes.push_back(kv.first);
    return detail::weakness<Family>(data, group_members(assignment, nodes), params, m, l);
}

/// Worst per-node average negative log-likelihood over nonempty nodes,
/// floored at kMinCutScale.
template <class Family>
double cut_scale(const Dataset& data, const Members& members,
                 const NodeParamsTable<typename Family::Params>& params)
{
    double h = -std::numeric_limits<double>::infinity();
    for (const auto& [id, rows] : members)
    {
        if (rows.empty())
            continue;
        double acc = 0.0;
        for (std::size_t i : rows)
            acc += Family::loglik(data.row(i), params.at(id));
        h = std::max(h, -acc / static_cast<double>(rows.size()));
    }
    return std::max(h, kMinCutScale);
}

/// Removes every edge whose weakness exceeds beta * h in a single pass and
/// returns the removed edges. beta = +inf never cuts.
template <class Family>
std::vector<Edge> cut_weak_links(MapGraph& graph, const Dataset& data, const Assignment& assignment,
                                 const NodeParamsTable<typename Family::Params>& params,
                                 double beta)
{
    if (!(beta >= 0.0))
        throw std::invalid_argument("beta must be non-negative");
    require_consistent(graph, params);

    const Members members = group_members(assignment, graph.nodes());
    const double threshold =
        std::isinf(beta) ? beta : beta * cut_scale<Family>(data, members, params);

    std::vector<Edge> removed;
    for (const auto& e : graph.edges())
    {
        const double w = detail::weakness<Family>(data, members, params, e.a, e.b);
        if (w > threshold)
            removed.push_back(e);
    }
    for (const auto& e : removed)
        graph.remove_edge(e.a, e.b);
    return removed;
}

template <class Family>
MdlScore mdl_score(const Dataset& data, const Assignment& assignment,
                   const NodeParamsTable<typename Family::Params>& params)
{
    if (assignment.size() != data.n())
        throw std::invalid_argument("assignment length does not match the dataset");
    if (params.empty())
        throw std::invalid_argument("mdl_score needs at least one node");

    MdlScore s;
    for (std::size_t i = 0; i < data.n(); ++i)
    {
        auto it = params.find(assignment[i]);
        if (it == params.end())
            throw std::invalid_argument("assignment refers to a node with no parameters");
        s.neg_loglik -= Family::loglik(data.row(i), it->second);
    }
    const double n    = static_cast<double>(data.n());
    const double m    = static_cast<double>(params.size());
    const double df   = m * static_cast<double>(Family::df(data.p()));
    s.complexity      = 0.5 * df * std::log(n);
    s.indexing        = n * std::log(m);
    s.total           = s.neg_loglik + s.complexity + s.indexing;
    return s;
}

template <class Params>
struct DeletionOutcome
{
    bool deleted = false;
    std::optional<NodeId> node;
    MapGraph graph;
    NodeParamsTable<Params> params;
    Assignment assignment;
    MdlScore current;
    /// Best candidate score, present whenever |M| >= 2.
    std::optional<MdlScore> candidate;
};

/// One pass of MDL-driven node deletion. Each live node is tentatively
/// removed, its samples go to their best remaining node, every survivor is
/// re-estimated by the batch estimator, and the best candidate replaces the
/// current map only if its MDL is strictly lower. The deleted node's former
/// neighbors are joined into a clique.
template <class Family>
DeletionOutcome<typename Family::Params>
try_delete_node(const Dataset& data, const MapGraph& graph, const Assignment& assignment,
                const NodeParamsTable<typename Family::Params>& params)
{
    using Params = typename Family::Params;
    require_consistent(graph, params);

    DeletionOutcome<Params> out{false, std::nullopt, graph, params, assignment,
                                mdl_score<Family>(data, assignment, params), std::nullopt};
    if (graph.node_count() < 2)
        return out;

    const Members members = group_members(assignment, graph.nodes());

    std::optional<NodeId> best_node;
    MdlScore best_score;
    NodeParamsTable<Params> best_params;
    Assignment best_assignment;

    for (NodeId m : graph.nodes())
    {
        Assignment cand = assignment;
        for (std::size_t i : members.at(m))
            cand[i] = find_winner<Family>(data.row(i), params, m);

        NodeParamsTable<Params> cand_params;
        Members cand_members;
        for (NodeId id : graph.nodes())
            if (id != m)
            {
                cand_members[id];
                cand_params.emplace(id, params.at(id));
            }
        for (std::size_t i = 0; i < cand.size(); ++i)
            cand_members[cand[i]].push_back(i);

        for (auto& [id, theta] : cand_params)
        {
            const auto& rows = cand_members.at(id);
            if (rows.empty())
                continue;
            try
            {
                theta = Family::batch(data, rows);
            }
            catch (const EstimationError&)
            {
                // keep the pre-deletion parameters
            }
        }

        const MdlScore score = mdl_score<Family>(data, cand, cand_params);
        if (!best_node || score.total < best_score.total)
        {
            best_node       = m;
            best_score      = score;
            best_params     = std::move(cand_params);
            best_assignment = std::move(cand);
        }
    }

    out.candidate = best_score;
    if (!(best_score.total < out.current.total))
        return out;

    const auto former = graph.neighbors(*best_node);
    out.graph.remove_node(*best_node);
    for (std::size_t a = 0; a < former.size(); ++a)
        for (std::size_t b = a + 1; b < former.size(); ++b)
            out.graph.add_edge(former[a], former[b]);

    out.deleted    = true;
    out.node       = best_node;
    out.params     = std::move(best_params);
    out.assignment = std::move(best_assignment);
    return out;
}

} // namespace smlsom
