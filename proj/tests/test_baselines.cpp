#include <doctest.h>

#include <vector>

#include "fixtures.hpp"
#include "wban/baselines.hpp"

using namespace wban;
namespace f3 = fixture::fig3;

TEST_SUITE("baselines") {

TEST_CASE("ensa-ban prefers more residual energy at equal prr")
{
    const std::vector<EnsaCandidate> c{{node_id(4), 0.9, 50.0, 1}, {node_id(7), 0.9, 100.0, 1}};
    CHECK(ensa_ban_next_hop(2, c, 100.0) == node_id(7));
}

TEST_CASE("ensa-ban product tie goes to the lower id")
{
    // 0.5 * 100/100 == 1.0 * 50/100
    const std::vector<EnsaCandidate> c{{node_id(9), 0.5, 100.0, 1}, {node_id(3), 1.0, 50.0, 1}};
    CHECK(ensa_ban_next_hop(2, c, 100.0) == node_id(3));
    const std::vector<EnsaCandidate> d{{node_id(3), 0.5, 100.0, 1}, {node_id(9), 1.0, 50.0, 1}};
    CHECK(ensa_ban_next_hop(2, d, 100.0) == node_id(3));
}

TEST_CASE("ensa-ban only moves toward a sink")
{
    const std::vector<EnsaCandidate> c{{node_id(1), 1.0, 100.0, 2}, {node_id(2), 1.0, 100.0, 3},
                                       {node_id(3), 0.6, 40.0, 1}};
    CHECK(ensa_ban_next_hop(2, c, 100.0) == node_id(3));
    const std::vector<EnsaCandidate> none{{node_id(1), 1.0, 100.0, 2}, {node_id(2), 1.0, 100.0, -1}};
    CHECK_FALSE(ensa_ban_next_hop(2, none, 100.0).has_value());
}

TEST_CASE("ensa-ban has no temperature input")
{
    // The candidate record carries no temperature: a hot neighbour with the
    // best score is indistinguishable from a cool one and is still chosen.
    const std::vector<EnsaCandidate> c{{node_id(4), 0.95, 90.0, 1}, {node_id(5), 0.6, 90.0, 1}};
    CHECK(ensa_ban_next_hop(3, c, 100.0) == node_id(4));
}

TEST_CASE("p-aodv takes the minimum-hop path")
{
    Graph g = fixture::fig3_graph();
    // weights are ignored, even when they favour the long way round
    g.add_edge(node_id(f3::A), node_id(f3::E), 50.0);
    const auto r = p_aodv_route(node_id(f3::S), g);
    REQUIRE(r);
    CHECK(f3::path(r->hops) == "SAED");
    CHECK(r->cost == 3.0);
}

TEST_CASE("rrls: uniform prr reduces to min-hop")
{
    const auto r = rrls_route(node_id(f3::S), fixture::fig3_graph(1.0));
    REQUIRE(r);
    CHECK(f3::path(r->hops) == "SAED");
}

TEST_CASE("rrls: (0.9,0.9) beats (1.0,0.6)")
{
    // 0 -> 1 -> 3 at prr 0.9, 0.9 ; 0 -> 2 -> 3 at prr 1.0, 0.6
    Graph g(4);
    g.sink[3] = true;
    g.add_edge(node_id(0), node_id(1), 0.9);
    g.add_edge(node_id(1), node_id(3), 0.9);
    g.add_edge(node_id(0), node_id(2), 1.0);
    g.add_edge(node_id(2), node_id(3), 0.6);
    const auto r = rrls_route(node_id(0), g);
    REQUIRE(r);
    CHECK(r->hops[1] == node_id(1));
    CHECK(r->cost == doctest::Approx(2.0 / 0.9));
    CHECK(1.0 + 1.0 / 0.6 == doctest::Approx(2.6667).epsilon(1e-4));
}

TEST_CASE("rrls routes through a stable node regardless of heat")
{
    // The graph carries only link stability; node 1 being hot cannot matter.
    Graph g(3);
    g.sink[2] = true;
    g.add_edge(node_id(0), node_id(1), 1.0);
    g.add_edge(node_id(1), node_id(2), 1.0);
    g.add_edge(node_id(0), node_id(2), 0.3);
    CHECK(rrls_route(node_id(0), g)->hops == std::vector<NodeId>{node_id(0), node_id(1), node_id(2)});
}

}
