#include "helpers.hpp"
#include "oracles.hpp"

#include "smlsom/gaussian.hpp"
#include "smlsom/mlsom.hpp"
#include "smlsom/multinomial.hpp"

using namespace smlsom;
using testing_helpers::blobs;
using testing_helpers::make_data;

namespace
{

Vector vec(std::initializer_list<double> v)
{
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v)
        out[i++] = x;
    return out;
}

NodeParamsTable<GaussParams> unit_nodes(const std::vector<Vector>& means)
{
    NodeParamsTable<GaussParams> t;
    for (std::size_t k = 0; k < means.size(); ++k)
        t.emplace(static_cast<NodeId>(k),
                  GaussParams(means[k], Matrix::Identity(means[k].size(), means[k].size())));
    return t;
}

// counts every update whose output breaks symmetry or PSD
int g_gauss_violations = 0;
int g_multinom_violations = 0;

struct CheckedGaussian : GaussianFamily
{
    static Params update(const Params& t, const Eigen::Ref<const Vector>& x, double a)
    {
        auto out = GaussianFamily::update(t, x, a);
        const Matrix& c = out.covariance();
        if (c != c.transpose() ||
            Eigen::SelfAdjointEigenSolver<Matrix>(c).eigenvalues().minCoeff() < -1e-12)
            ++g_gauss_violations;
        return out;
    }
};

struct CheckedMultinomial : MultinomialFamily
{
    static Params update(const Params& t, const Eigen::Ref<const Vector>& x, double a)
    {
        auto out = MultinomialFamily::update(t, x, a);
        if (std::abs(out.theta().sum() - 1.0) > 1e-12 || out.theta().minCoeff() < 0.0)
            ++g_multinom_violations;
        return out;
    }
};

} // namespace

TEST_CASE("winner selection")
{
    const auto single = unit_nodes({vec({5.0, 5.0})});
    CHECK(find_winner<GaussianFamily>(vec({0.0, 0.0}), single) == 0);

    const auto two = unit_nodes({vec({0.0, 0.0}), vec({10.0, 0.0})});
    CHECK(find_winner<GaussianFamily>(vec({1.0, 0.0}), two) == 0);
    CHECK(find_winner<GaussianFamily>(vec({1.0, 0.0}), two, NodeId{0}) == 1);

    NodeParamsTable<GaussParams> tied;
    tied.emplace(7, GaussParams(vec({1.0}), Matrix::Identity(1, 1)));
    tied.emplace(3, GaussParams(vec({1.0}), Matrix::Identity(1, 1)));
    CHECK(find_winner<GaussianFamily>(vec({0.0}), tied) == 3);

    CHECK_THROWS(find_winner<GaussianFamily>(vec({0.0}), single, NodeId{0}));
}

TEST_CASE("single step training equals one moment step")
{
    const auto data = make_data({{1.0, 2.0}, {3.0, -1.0}, {0.5, 0.5}});
    MapGraph g(1);
    const auto init = unit_nodes({vec({0.0, 0.0})});
    Schedule s;
    s.tau_max = 1;
    s.r1      = 1.0;

    Rng rng(42), replay(42);
    std::size_t drawn = 99;
    const auto out = mlsom_train<GaussianFamily>(data, g, init, s, rng,
                                                 [&](std::size_t, std::size_t i, NodeId) { drawn = i; });
    std::uniform_int_distribution<std::size_t> pick(0, data.n() - 1);
    CHECK(pick(replay) == drawn);
    const auto want = gauss_update(init.at(0), data.row(drawn), 0.05);
    CHECK(out.at(0).mean() == want.mean());
    CHECK(out.at(0).covariance() == want.covariance());
}

TEST_CASE("final radius phase moves only the winner")
{
    const auto data = make_data({{0.2}, {1.1}, {2.3}, {2.9}});
    const auto g    = lattice_graph(1, 3, LatticeKind::rectangular);
    const auto init = unit_nodes({vec({0.0}), vec({1.5}), vec({3.0})});
    Schedule s;
    s.r1      = 0.9;  // below 1 from the start, so r = 0.5 throughout
    s.tau_max = 1;
    Rng rng(1);
    NodeId winner = 0;
    const auto out = mlsom_train<GaussianFamily>(data, g, init, s, rng,
                                                 [&](std::size_t, std::size_t, NodeId c) { winner = c; });
    for (NodeId id = 0; id < 3; ++id)
        CHECK((out.at(id).mean() == init.at(id).mean()) == (id != winner));
}

TEST_CASE("two unlinked nodes settle on their blobs")
{
    const auto data = blobs({{0.0, 0.0}, {20.0, 0.0}}, 200, 1.0, 9);
    MapGraph g(2);
    const auto init = unit_nodes({vec({-1.0, 0.0}), vec({21.0, 0.0})});
    Schedule s;
    s.tau_max = 4000;
    s.r1      = 2.0;
    Rng rng(2);
    const auto out = mlsom_train<GaussianFamily>(data, g, init, s, rng);

    const auto a = classify<GaussianFamily>(data, out);
    Vector m0 = Vector::Zero(2), m1 = Vector::Zero(2);
    double c0 = 0, c1 = 0;
    for (std::size_t i = 0; i < data.n(); ++i)
    {
        const bool near0 = data.row(i).norm() < (data.row(i) - vec({20.0, 0.0})).norm();
        (near0 ? m0 : m1) += data.row(i);
        (near0 ? c0 : c1) += 1;
        CHECK(a[i] == (near0 ? 0u : 1u));
    }
    CHECK((out.at(0).mean() - m0 / c0).norm() < 0.5);
    CHECK((out.at(1).mean() - m1 / c1).norm() < 0.5);
}

TEST_CASE("classification")
{
    const auto data = make_data({{0.0}, {4.0}, {9.0}});
    const auto one  = unit_nodes({vec({2.0})});
    CHECK(classify<GaussianFamily>(data, one) == Assignment{0, 0, 0});

    const auto three = unit_nodes({vec({0.0}), vec({5.0}), vec({10.0})});
    const auto a     = classify<GaussianFamily>(data, three);
    CHECK(a == Assignment{0, 1, 2});
    CHECK(classify<GaussianFamily>(data, three) == a);

    std::vector<int> labels;
    const std::vector<std::vector<double>> centers{{0, 0}, {10, 0}, {0, 10}, {10, 10}};
    const auto four = blobs(centers, 250, 1.0, 77, &labels);
    std::vector<Vector> means;
    for (const auto& c : centers)
        means.push_back(vec({c[0], c[1]}));
    const auto got = classify<GaussianFamily>(four, unit_nodes(means));
    std::size_t hits = 0;
    for (std::size_t i = 0; i < got.size(); ++i)
        hits += static_cast<int>(got[i]) + 1 == labels[i];
    CHECK(static_cast<double>(hits) >= 0.99 * static_cast<double>(got.size()));
}

TEST_CASE("frozen identity covariance reproduces the Euclidean SOM winners")
{
    std::mt19937_64 gen(123);
    std::normal_distribution<double> z(0.0, 1.0);
    RowMatrix m(300, 3);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < 3; ++j)
            m(i, j) = z(gen);
    const Dataset data(m);
    const auto g = lattice_graph(3, 3, LatticeKind::hexagonal);

    std::vector<Vector> means;
    std::map<NodeId, std::vector<double>> plain;
    for (NodeId k = 0; k < 9; ++k)
    {
        means.push_back(vec({z(gen), z(gen), z(gen)}));
        plain[k] = oracle::to_vec(means.back());
    }
    Schedule s;
    s.tau_max = 1000;
    s.r1      = 2.0;

    Rng a(5), b(5);
    std::vector<NodeId> ours;
    mlsom_train<FrozenCovarianceGaussianFamily>(data, g, unit_nodes(means), s, a,
                                                [&](std::size_t, std::size_t, NodeId c) { ours.push_back(c); });
    const auto theirs = oracle::kohonen_winners(data, g, plain, s, b);
    CHECK(ours == theirs);
}

TEST_CASE("parameter invariants hold after every step")
{
    g_gauss_violations    = 0;
    g_multinom_violations = 0;
    const auto data = blobs({{0, 0}, {3, 3}, {6, 0}}, 50, 1.0, 31);
    const auto g    = lattice_graph(3, 3, LatticeKind::hexagonal);
    std::vector<Vector> means;
    for (int k = 0; k < 9; ++k)
        means.push_back(vec({k * 0.7, (k % 3) * 1.0}));
    Schedule s;
    s.tau_max = 3000;
    s.r1      = 2.0;
    Rng rng(8);
    mlsom_train<CheckedGaussian>(data, g, unit_nodes(means), s, rng);
    CHECK(g_gauss_violations == 0);

    const auto counts = make_data({{3, 0, 1}, {0, 0, 0}, {1, 5, 2}, {2, 2, 2}, {9, 0, 0}});
    NodeParamsTable<MultinomParams> mt;
    for (NodeId k = 0; k < 9; ++k)
        mt.emplace(k, MultinomParams(vec({1.0 + k, 2.0, 3.0})));
    mlsom_train<CheckedMultinomial>(counts, g, mt, s, rng);
    CHECK(g_multinom_violations == 0);
}

TEST_CASE("training is reproducible")
{
    const auto data = blobs({{0, 0}, {5, 5}}, 60, 1.0, 3);
    const auto g    = lattice_graph(2, 2, LatticeKind::rectangular);
    const auto init = unit_nodes({vec({0, 0}), vec({1, 1}), vec({2, 2}), vec({3, 3})});
    Schedule s;
    s.tau_max = 500;
    Rng a(10), b(10);
    const auto x = mlsom_train<GaussianFamily>(data, g, init, s, a);
    const auto y = mlsom_train<GaussianFamily>(data, g, init, s, b);
    for (const auto& [id, t] : x)
    {
        CHECK(t.mean() == y.at(id).mean());
        CHECK(t.covariance() == y.at(id).covariance());
    }
}

TEST_CASE("training checks its inputs")
{
    const auto data = make_data({{0.0}, {1.0}});
    const auto g    = lattice_graph(1, 2, LatticeKind::rectangular);
    Schedule s;
    s.tau_max = 3;
    Rng rng(1);
    CHECK_THROWS_AS(mlsom_train<GaussianFamily>(data, g, unit_nodes({vec({0.0})}), s, rng),
                    std::invalid_argument);
}
