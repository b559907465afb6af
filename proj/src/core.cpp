#include "smlsom/core.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace smlsom
{

Dataset::Dataset(RowMatrix values, std::optional<std::vector<int>> labels)
    : values_(std::move(values)), labels_(std::move(labels))
{
    if (values_.rows() < 2)
        throw DataError("dataset needs at least 2 samples");
    if (values_.cols() < 1)
        throw DataError("dataset needs at least 1 column");
    if (!values_.allFinite())
        throw DataError("dataset contains non-finite values");
    if (labels_ && labels_->size() != n())
        throw DataError("label count does not match sample count");
}

void Dataset::require_counts() const
{
    for (Eigen::Index i = 0; i < values_.rows(); ++i)
        for (Eigen::Index j = 0; j < values_.cols(); ++j)
        {
            const double v = values_(i, j);
            if (v < 0.0 || v != std::floor(v))
                throw DataError("multinomial data must be non-negative integer counts (row " +
                                std::to_string(i + 1) + ", column " + std::to_string(j + 1) +
                                ")");
        }
}

//
// MapGraph
//

MapGraph::MapGraph(std::size_t node_count) : live_(node_count, true)
{
    nodes_.resize(node_count);
    for (std::size_t k = 0; k < node_count; ++k)
        nodes_[k] = static_cast<NodeId>(k);
}

bool MapGraph::has_edge(NodeId a, NodeId b) const
{
    if (a == b)
        return false;
    return edges_.count(Edge(a, b)) != 0;
}

std::vector<NodeId> MapGraph::neighbors(NodeId id) const
{
    std::vector<NodeId> out;
    for (const auto& e : edges_)
    {
        if (e.a == id)
            out.push_back(e.b);
        else if (e.b == id)
            out.push_back(e.a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool MapGraph::add_edge(NodeId a, NodeId b)
{
    if (a == b)
        throw std::invalid_argument("self-loops are not allowed");
    if (!is_live(a) || !is_live(b))
        throw std::invalid_argument("edge endpoint is not a live node");
    return edges_.insert(Edge(a, b)).second;
}

bool MapGraph::remove_edge(NodeId a, NodeId b)
{
    if (a == b)
        return false;
    return edges_.erase(Edge(a, b)) != 0;
}

void MapGraph::remove_node(NodeId id)
{
    if (!is_live(id))
        throw std::invalid_argument("node " + std::to_string(id) + " is not live");
    live_[id] = false;
    nodes_.erase(std::find(nodes_.begin(), nodes_.end(), id));
    for (auto it = edges_.begin(); it != edges_.end();)
    {
        if (it->a == id || it->b == id)
            it = edges_.erase(it);
        else
            ++it;
    }
}

MapGraph lattice_graph(std::size_t rows, std::size_t cols, LatticeKind kind)
{
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("lattice dimensions must be at least 1");
    if (rows * cols < 2)
        throw std::invalid_argument("lattice must have at least 2 nodes");

    MapGraph g(rows * cols);
    auto id = [rows](std::size_t i, std::size_t j) { return static_cast<NodeId>(j * rows + i); };

    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = 0; i < rows; ++i)
        {
            if (i + 1 < rows)
                g.add_edge(id(i, j), id(i + 1, j));
            if (j + 1 >= cols)
                continue;
            if (kind == LatticeKind::rectangular)
            {
                g.add_edge(id(i, j), id(i, j + 1));
                continue;
            }
            // even lines are shifted right: they touch (i, j+1) and (i+1, j+1);
            // odd lines touch (i-1, j+1) and (i, j+1)
            g.add_edge(id(i, j), id(i, j + 1));
            if (j % 2 == 0 && i + 1 < rows)
                g.add_edge(id(i, j), id(i + 1, j + 1));
            if (j % 2 == 1 && i >= 1)
                g.add_edge(id(i, j), id(i - 1, j + 1));
        }
    return g;
}

namespace
{

std::vector<HopDistance> bfs(const MapGraph& g, const std::vector<std::vector<NodeId>>& adj,
                             NodeId from)
{
    std::vector<HopDistance> dist(g.capacity());
    std::queue<NodeId> q;
    dist[from] = 0;
    q.push(from);
    while (!q.empty())
    {
        const NodeId u = q.front();
        q.pop();
        for (NodeId v : adj[u])
            if (!dist[v])
            {
                dist[v] = *dist[u] + 1;
                q.push(v);
            }
    }
    return dist;
}

std::vector<std::vector<NodeId>> adjacency(const MapGraph& g)
{
    std::vector<std::vector<NodeId>> adj(g.capacity());
    for (const auto& e : g.edges())
    {
        adj[e.a].push_back(e.b);
        adj[e.b].push_back(e.a);
    }
    return adj;
}

} // namespace

HopDistance hop_distance(const MapGraph& g, NodeId from, NodeId to)
{
    if (!g.is_live(from) || !g.is_live(to))
        throw std::invalid_argument("hop_distance requires live nodes");
    return bfs(g, adjacency(g), from)[to];
}

std::vector<std::vector<HopDistance>> all_hop_distances(const MapGraph& g)
{
    const auto adj = adjacency(g);
    std::vector<std::vector<HopDistance>> out(g.capacity());
    for (NodeId id : g.nodes())
        out[id] = bfs(g, adj, id);
    return out;
}

//
// Schedule
//

void Schedule::validate() const
{
    if (!(alpha1 > 0.0 && alpha1 <= alpha0 && alpha0 < 1.0))
        throw std::invalid_argument("learning rates must satisfy 0 < alpha1 <= alpha0 < 1");
    if (!(r1 > 0.0))
        throw std::invalid_argument("initial radius must be positive");
    if (tau_max < 1)
        throw std::invalid_argument("tau_max must be at least 1");
}

namespace
{

void check_tau(const Schedule& s, std::size_t tau)
{
    if (tau < 1 || tau > s.tau_max)
        throw std::out_of_range("step " + std::to_string(tau) + " outside [1, " +
                                std::to_string(s.tau_max) + "]");
}

} // namespace

double schedule_alpha(const Schedule& s, std::size_t tau)
{
    check_tau(s, tau);
    if (s.tau_max == 1)
        return s.alpha0;
    const double frac = static_cast<double>(tau - 1) / static_cast<double>(s.tau_max - 1);
    return s.alpha0 - (s.alpha0 - s.alpha1) * frac;
}

double schedule_radius(const Schedule& s, std::size_t tau)
{
    check_tau(s, tau);
    const double r2 = -s.r1;
    const double r =
        s.r1 - (s.r1 - r2) * static_cast<double>(tau) / static_cast<double>(s.tau_max);
    return r < 1.0 ? 0.5 : r;
}

double default_radius(std::size_t rows, std::size_t cols)
{
    return static_cast<double>(std::max(rows, cols)) * 2.0 / 3.0;
}

std::string to_string(LatticeKind kind)
{
    return kind == LatticeKind::hexagonal ? "hex" : "rect";
}

LatticeKind lattice_kind_from_string(const std::string& s)
{
    if (s == "hex" || s == "hexagonal")
        return LatticeKind::hexagonal;
    if (s == "rect" || s == "rectangular")
        return LatticeKind::rectangular;
    throw std::invalid_argument("unknown lattice kind '" + s + "'");
}

} // namespace smlsom
