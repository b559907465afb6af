#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace smlsom
{

using Vector    = Eigen::VectorXd;
using Matrix    = Eigen::MatrixXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using SampleRef = Eigen::Map<const Vector>;

using NodeId     = std::uint32_t;
using Assignment = std::vector<NodeId>;

/// Raised when a covariance cannot be made positive definite.
class SingularModelError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Raised when a batch estimator has no usable samples.
class EstimationError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

class DataError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

//
// Dataset
//

/// n x p observation matrix with optional per-sample class labels.
/// Construction checks finiteness and n >= 2, p >= 1.
class Dataset
{
  public:
    explicit Dataset(RowMatrix values, std::optional<std::vector<int>> labels = std::nullopt);

    std::size_t n() const { return static_cast<std::size_t>(values_.rows()); }
    std::size_t p() const { return static_cast<std::size_t>(values_.cols()); }

    SampleRef row(std::size_t i) const
    {
        return SampleRef(values_.data() + i * p(), static_cast<Eigen::Index>(p()));
    }

    const RowMatrix& values() const { return values_; }
    const std::optional<std::vector<int>>& labels() const { return labels_; }

    /// Throws DataError unless every entry is a non-negative integer.
    void require_counts() const;

  private:
    RowMatrix values_;
    std::optional<std::vector<int>> labels_;
};

//
// Map graph
//

struct Edge
{
    NodeId a;
    NodeId b;

    Edge(NodeId x, NodeId y) : a(x < y ? x : y), b(x < y ? y : x) {}

    auto operator<=>(const Edge&) const = default;
};

enum class LatticeKind
{
    rectangular,
    hexagonal
};

/// Undirected graph over stable node ids. Deleted ids are never reused.
class MapGraph
{
  public:
    MapGraph() = default;
    explicit MapGraph(std::size_t node_count);

    std::size_t capacity() const { return live_.size(); }
    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    const std::vector<NodeId>& nodes() const { return nodes_; }
    const std::set<Edge>& edges() const { return edges_; }

    bool is_live(NodeId id) const { return id < live_.size() && live_[id]; }
    bool has_edge(NodeId a, NodeId b) const;
    std::vector<NodeId> neighbors(NodeId id) const;

    /// Returns false if the edge already existed.
    bool add_edge(NodeId a, NodeId b);
    bool remove_edge(NodeId a, NodeId b);

    /// Removes the node and every incident edge.
    void remove_node(NodeId id);

    bool operator==(const MapGraph& other) const
    {
        return nodes_ == other.nodes_ && edges_ == other.edges_;
    }

  private:
    std::vector<bool> live_;
    std::vector<NodeId> nodes_;
    std::set<Edge> edges_;
};

/// Node k sits at grid position (k mod rows, k div rows); a "line" of the
/// lattice is the set of nodes sharing k div rows. Hexagonal lattices shift
/// even lines right by half a cell.
MapGraph lattice_graph(std::size_t rows, std::size_t cols, LatticeKind kind);

using HopDistance = std::optional<std::size_t>;

HopDistance hop_distance(const MapGraph& g, NodeId from, NodeId to);

/// BFS from every live node. Entry [a][b] is indexed by node id.
std::vector<std::vector<HopDistance>> all_hop_distances(const MapGraph& g);

inline int neighborhood_indicator(HopDistance d, double radius)
{
    return d.has_value() && static_cast<double>(*d) <= radius ? 1 : 0;
}

//
// Learning schedule
//

struct Schedule
{
    double alpha0 = 0.05;
    double alpha1 = 0.01;
    double r1     = 2.0;
    std::size_t tau_max = 1;

    void validate() const;
};

double schedule_alpha(const Schedule& s, std::size_t tau);

/// Linear decay from r1 to -r1; once below one hop only the winner updates.
double schedule_radius(const Schedule& s, std::size_t tau);

double default_radius(std::size_t rows, std::size_t cols);

std::string to_string(LatticeKind kind);
LatticeKind lattice_kind_from_string(const std::string& s);

} // namespace smlsom
