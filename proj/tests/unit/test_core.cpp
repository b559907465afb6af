#include "helpers.hpp"

#include "smlsom/core.hpp"

using namespace smlsom;

TEST_CASE("lattice sizes")
{
    auto g = lattice_graph(1, 2, LatticeKind::rectangular);
    CHECK(g.node_count() == 2);
    CHECK(g.edge_count() == 1);

    g = lattice_graph(3, 3, LatticeKind::rectangular);
    CHECK(g.node_count() == 9);
    CHECK(g.edge_count() == 12);

    g = lattice_graph(3, 3, LatticeKind::hexagonal);
    CHECK(g.node_count() == 9);
    CHECK(g.edge_count() == 16);

    CHECK_THROWS_AS(lattice_graph(1, 1, LatticeKind::hexagonal), std::invalid_argument);

    CHECK_THROWS_AS(lattice_graph(0, 3, LatticeKind::rectangular), std::invalid_argument);
}

TEST_CASE("hex lattice uses the even-line offset")
{
    // node k sits at (k mod rows, k div rows); line 0 is even
    const auto g = lattice_graph(3, 3, LatticeKind::hexagonal);
    CHECK(g.has_edge(0, 3));
    CHECK(g.has_edge(0, 4));
    CHECK_FALSE(g.has_edge(1, 3));
    CHECK(g.has_edge(3, 6));
    CHECK(g.has_edge(4, 6));
    CHECK_FALSE(g.has_edge(3, 7));
}

TEST_CASE("hop distances")
{
    const auto line = lattice_graph(1, 2, LatticeKind::rectangular);
    CHECK(hop_distance(line, 0, 0) == std::size_t{0});
    CHECK(hop_distance(line, 0, 1) == std::size_t{1});

    const auto grid = lattice_graph(3, 3, LatticeKind::rectangular);
    CHECK(hop_distance(grid, 0, 8) == std::size_t{4});

    MapGraph split(3);
    split.add_edge(0, 1);
    CHECK_FALSE(hop_distance(split, 0, 2).has_value());
    split.remove_node(1);
    CHECK_THROWS(hop_distance(split, 0, 1));
}

TEST_CASE("hop distance is a metric on lattices up to 5x5")
{
    for (auto kind : {LatticeKind::rectangular, LatticeKind::hexagonal})
        for (std::size_t rows = 1; rows <= 5; ++rows)
            for (std::size_t cols = 1; cols <= 5; ++cols)
            {
                if (rows * cols < 2)
                    continue;
                const auto g = lattice_graph(rows, cols, kind);
                const auto d = all_hop_distances(g);
                const std::size_t m = rows * cols;
                bool ok = true;
                for (std::size_t a = 0; a < m; ++a)
                    for (std::size_t b = 0; b < m; ++b)
                    {
                        // connected: every pair has a finite distance
                        ok = ok && d[a][b].has_value();
                        ok = ok && ((*d[a][b] == 0) == (a == b));
                        ok = ok && d[a][b] == d[b][a];
                        for (std::size_t c = 0; c < m; ++c)
                            ok = ok && *d[a][c] <= *d[a][b] + *d[b][c];
                    }
                CHECK_MESSAGE(ok, rows << "x" << cols << " " << to_string(kind));
            }
}

TEST_CASE("neighborhood indicator")
{
    CHECK(neighborhood_indicator(std::size_t{0}, 0.5) == 1);
    CHECK(neighborhood_indicator(std::size_t{1}, 0.5) == 0);
    CHECK(neighborhood_indicator(std::size_t{2}, 2.0) == 1);
    CHECK(neighborhood_indicator(std::nullopt, 100.0) == 0);
    for (std::size_t d = 0; d < 10; ++d)
        CHECK((neighborhood_indicator(d, 0.5) == 1) == (d == 0));
}

TEST_CASE("learning schedule")
{
    Schedule s;
    s.tau_max = 5;
    CHECK(schedule_alpha(s, 1) == doctest::Approx(0.05));
    CHECK(schedule_alpha(s, 5) == doctest::Approx(0.01));
    CHECK(schedule_alpha(s, 3) == doctest::Approx(0.03));

    s.r1      = 2.0;
    s.tau_max = 6;
    CHECK(schedule_radius(s, 1) == doctest::Approx(2.0 - 4.0 / 6.0));
    CHECK(schedule_radius(s, 3) == 0.5);
    CHECK(schedule_radius(s, 6) == 0.5);

    CHECK_THROWS_AS(schedule_alpha(s, 0), std::out_of_range);
    CHECK_THROWS_AS(schedule_radius(s, 7), std::out_of_range);

    s.tau_max = 97;
    for (std::size_t t = 2; t <= s.tau_max; ++t)
    {
        CHECK(schedule_alpha(s, t) <= schedule_alpha(s, t - 1));
        CHECK(schedule_radius(s, t) <= schedule_radius(s, t - 1));
    }
}

TEST_CASE("map graph bookkeeping")
{
    MapGraph g(4);
    CHECK(g.add_edge(2, 1));
    CHECK_FALSE(g.add_edge(1, 2));
    CHECK_THROWS(g.add_edge(1, 1));
    CHECK(g.has_edge(1, 2));
    CHECK(g.edges().begin()->a == 1);
    g.add_edge(0, 1);
    g.remove_node(1);
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 0);
    CHECK_THROWS(g.add_edge(0, 1));
    CHECK(g.nodes() == std::vector<NodeId>{0, 2, 3});
}

TEST_CASE("dataset validation")
{
    CHECK_THROWS_AS(testing_helpers::make_data({{1.0}}), DataError);
    CHECK_THROWS_AS(testing_helpers::make_data({{1.0}, {NAN}}), DataError);
    const auto d = testing_helpers::make_data({{1.0, 2.0}, {3.0, 4.0}});
    CHECK(d.n() == 2);
    CHECK(d.p() == 2);
    CHECK(d.row(1)[0] == 3.0);
    CHECK_NOTHROW(d.require_counts());
    CHECK_THROWS_AS(testing_helpers::make_data({{1.5, 2.0}, {3.0, 4.0}}).require_counts(), DataError);
    CHECK_THROWS_AS(testing_helpers::make_data({{-1.0, 2.0}, {3.0, 4.0}}).require_counts(), DataError);
}
