#include <sstream>

#include "DimacsIO.h"
#include "doctest.h"

using namespace cherry;

TEST_CASE("dimacs roundtrip") {
    std::istringstream in(
        "c a comment line\n"
        "p edge 4 3\n"
        "e 1 2 5\n"
        "e 2 3 -7\n"
        "e 3 4 1099511627776\n");
    Instance inst = ReadDimacs(in);
    CHECK(inst.n == 4);
    REQUIRE(inst.edges.size() == 3);
    CHECK(inst.edges[0].u == 0);
    CHECK(inst.edges[0].v == 1);
    CHECK(inst.edges[0].w == 5);
    CHECK(inst.edges[1].w == -7);
    CHECK(inst.edges[2].w == Weight(1) << 40);

    std::ostringstream out;
    WriteDimacs(inst, out);
    std::istringstream in2(out.str());
    Instance again = ReadDimacs(in2);
    CHECK(again.n == inst.n);
    CHECK(again.edges.size() == inst.edges.size());
    CHECK(again.edges[2].w == inst.edges[2].w);
}

TEST_CASE("dimacs rejects malformed input") {
    auto expect_fail = [](const std::string &text) {
        std::istringstream in(text);
        CHECK_THROWS_AS(ReadDimacs(in), InputError);
    };
    expect_fail("");                                        // no header
    expect_fail("p edge 2 1\n");                            // missing edge
    expect_fail("p edge 2 1\ne 1 3 5\n");                   // endpoint range
    expect_fail("p edge 2 1\ne 1 1 5\n");                   // self-loop
    expect_fail("p edge 2 1\ne 1 2 1099511627777\n");       // weight too big
    expect_fail("p edge 2 1\ne 1 2 -1099511627777\n");      // negative too big
    expect_fail("p edge 2 1\ne 1 2 5\ne 2 1 5\n");          // count mismatch
    expect_fail("p edge 2 1\np edge 2 1\ne 1 2 5\n");       // duplicate header
    expect_fail("x nonsense\n");                            // unknown line
    expect_fail("p edge 2 1\ne 1 2 five\n");                // non-integer
}

TEST_CASE("dimacs keeps parallel edges") {
    std::istringstream in("p edge 2 2\ne 1 2 5\ne 1 2 9\n");
    Instance inst = ReadDimacs(in);
    CHECK(inst.edges.size() == 2);
}

TEST_CASE("solution file roundtrip with certificate") {
    SolutionFile sol;
    sol.total_weight = 12;
    sol.matching = {{0, 1}, {2, 3}};
    sol.has_duals = true;
    sol.dual_scale = 4;
    sol.node_duals = {4, 8, -2, 6};
    sol.blossom_duals.push_back({{0, 1, 2}, 16});

    std::ostringstream out;
    WriteSolution(sol, out);
    std::istringstream in(out.str());
    SolutionFile again = ReadSolution(in, 4);
    CHECK(!again.infeasible);
    CHECK(again.total_weight == 12);
    CHECK(again.matching == sol.matching);
    CHECK(again.dual_scale == 4);
    CHECK(again.node_duals == sol.node_duals);
    REQUIRE(again.blossom_duals.size() == 1);
    CHECK(again.blossom_duals[0].members == std::vector<int32_t>{0, 1, 2});
    CHECK(again.blossom_duals[0].value == 16);
}

TEST_CASE("solution file infeasible marker") {
    std::istringstream in("s INFEASIBLE\n");
    SolutionFile sol = ReadSolution(in, 3);
    CHECK(sol.infeasible);

    std::ostringstream out;
    WriteSolution(sol, out);
    CHECK(out.str() == "s INFEASIBLE\n");
}
