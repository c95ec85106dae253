#include <bit>

#include "doctest.h"
#include "support.hpp"

#include "relsig/structure.hpp"

using namespace relsig;
using test::Rng;

TEST_CASE("series structure") {
    auto phi = make_series(3);
    for (SubsetMask a = 0; a <= phi.full_mask(); ++a)
        CHECK(phi(a) == (a == phi.full_mask()));
    CHECK(is_semicoherent(phi));

    auto one = make_series(1);
    CHECK(one(0) == false);
    CHECK(one(1) == true);

    auto two = make_series(2);
    CHECK(!two(0b00));
    CHECK(!two(0b01));
    CHECK(!two(0b10));
    CHECK(two(0b11));

    CHECK_THROWS_AS(make_series(0), std::invalid_argument);
}

TEST_CASE("parallel structure") {
    auto phi = make_parallel(3);
    for (SubsetMask a = 0; a <= phi.full_mask(); ++a)
        CHECK(phi(a) == (a != 0));
    CHECK(is_semicoherent(phi));

    // Multilinear extension 1 - (1-z1)(1-z2)(1-z3).
    std::vector<Rational> z{{1, 2}, {1, 3}, {1, 4}};
    Rational expected = Rational{1} - Rational{1, 2} * Rational{2, 3} * Rational{3, 4};
    CHECK(multilinear_extension(phi, z) == expected);

    auto two = make_parallel(2);
    CHECK(!two(0b00));
    CHECK(two(0b01));
    CHECK(two(0b10));
    CHECK(two(0b11));
    CHECK_THROWS_AS(make_parallel(0), std::invalid_argument);
}

TEST_CASE("k-out-of-n structure") {
    CHECK(make_k_out_of_n(1, 3) == make_parallel(3));
    CHECK(make_k_out_of_n(3, 3) == make_series(3));

    auto phi = make_k_out_of_n(2, 3);
    unsigned working = 0;
    for (SubsetMask a = 0; a <= phi.full_mask(); ++a)
        if (phi(a)) {
            ++working;
            CHECK(std::popcount(a) >= 2);
        }
    CHECK(working == 4);

    CHECK_THROWS_AS(make_k_out_of_n(0, 3), std::invalid_argument);
    CHECK_THROWS_AS(make_k_out_of_n(4, 3), std::invalid_argument);
}

TEST_CASE("semicoherence checks") {
    CHECK(is_semicoherent(make_series(4)));

    StructureFunction zero(3);
    CHECK_FALSE(is_semicoherent(zero));

    StructureFunction bad(2);
    bad.set(0b01, true);
    bad.set(0b11, false);
    CHECK_FALSE(is_semicoherent(bad));
}

TEST_CASE("dual") {
    for (unsigned n = 1; n <= 5; ++n) {
        CHECK(dual(make_series(n)) == make_parallel(n));
        for (unsigned k = 1; k <= n; ++k)
            CHECK(dual(make_k_out_of_n(k, n)) == make_k_out_of_n(n - k + 1, n));
    }
    CHECK(dual(make_series(1)) == make_series(1));
}

TEST_CASE("dual is an involution") {
    Rng rng(7);
    for (unsigned n : {2u, 3u, 4u, 5u, 6u}) {
        // Exhaustive over all tables for small n, random beyond.
        if (n <= 4) {
            std::size_t tables = std::size_t{1} << (std::size_t{1} << n);
            for (std::size_t bits = 0; bits < tables; bits += (n == 4 ? 97 : 1)) {
                StructureFunction phi(n);
                for (SubsetMask a = 0; a <= phi.full_mask(); ++a) phi.set(a, (bits >> a) & 1);
                CHECK(dual(dual(phi)) == phi);
            }
        }
    }
    for (unsigned n : {10u, 16u, 20u}) {
        auto phi = test::random_table(n, rng);
        CHECK(dual(dual(phi)) == phi);
    }
}

TEST_CASE("conjunction structure") {
    CHECK(conjunction_structure(0b1111, 4) == make_series(4));

    auto phi = conjunction_structure(0b01, 2);
    CHECK(!phi(0b00));
    CHECK(phi(0b01));
    CHECK(!phi(0b10));
    CHECK(phi(0b11));

    auto big = conjunction_structure(0b0110, 4);
    unsigned working = 0;
    for (SubsetMask a = 0; a <= big.full_mask(); ++a)
        if (big(a)) ++working;
    CHECK(working == 4);
    CHECK(is_semicoherent(big));

    CHECK_THROWS_AS(conjunction_structure(0, 3), std::invalid_argument);
}

TEST_CASE("compose") {
    // min(max(x1, x2), x3)
    ModularSystem system{Partition(3, {{0, 1}, {2}}),
                         {make_parallel(2), make_series(1)},
                         make_series(2)};
    auto phi = compose(system);
    for (SubsetMask a = 0; a <= phi.full_mask(); ++a) {
        bool expected = ((a & 1) || (a & 2)) && (a & 4);
        CHECK(phi(a) == expected);
    }

    // The four-component example as modules {1,4} series, {2,3} parallel.
    ModularSystem example{Partition(4, {{0, 3}, {1, 2}}),
                          {make_series(2), make_parallel(2)},
                          make_series(2)};
    CHECK(compose(example) == test::phi1_structure());

    // Trivial partition returns the module unchanged.
    ModularSystem trivial{Partition(3, {{0, 1, 2}}), {make_k_out_of_n(2, 3)}, make_series(1)};
    CHECK(compose(trivial) == make_k_out_of_n(2, 3));

    ModularSystem broken{Partition(3, {{0, 1}, {2}}),
                         {make_parallel(3), make_series(1)},
                         make_series(2)};
    CHECK_THROWS_AS(compose(broken), std::invalid_argument);
}

TEST_CASE("compose matches independent projection") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        unsigned n = 2 + static_cast<unsigned>(rng() % 11);  // up to 12
        auto partition = test::random_partition(n, 4, rng);
        std::vector<StructureFunction> modules;
        for (unsigned j = 0; j < partition.block_count(); ++j)
            modules.push_back(test::random_semicoherent(partition.block_size(j), rng));
        auto organizer = test::random_semicoherent(partition.block_count(), rng);
        ModularSystem system{partition, modules, organizer};
        auto phi = compose(system);
        for (SubsetMask a = 0; a <= phi.full_mask(); ++a) {
            SubsetMask states = 0;
            for (unsigned j = 0; j < partition.block_count(); ++j) {
                SubsetMask local = 0;
                const auto& block = partition.block(j);
                for (unsigned pos = 0; pos < block.size(); ++pos)
                    if (a & (SubsetMask{1} << block[pos])) local |= SubsetMask{1} << pos;
                if (modules[j](local)) states |= SubsetMask{1} << j;
            }
            REQUIRE(phi(a) == organizer(states));
        }
    }
}

TEST_CASE("multilinear extension") {
    auto series = make_series(3);
    std::vector<Rational> z{{1, 2}, {2, 3}, {3, 5}};
    CHECK(multilinear_extension(series, z) == Rational{1, 5});

    // Vertex coincidence, including on random non-monotone tables.
    Rng rng(3);
    for (unsigned n : {1u, 2u, 3u, 4u}) {
        auto table = test::random_table(n, rng);
        for (SubsetMask a = 0; a <= table.full_mask(); ++a) {
            std::vector<Rational> vertex(n);
            for (unsigned i = 0; i < n; ++i) vertex[i] = (a >> i) & 1;
            CHECK(multilinear_extension(table, vertex) == Rational(table(a) ? 1 : 0));
        }
    }

    CHECK_THROWS_AS(multilinear_extension(series, std::vector<Rational>{{1, 2}}),
                    std::invalid_argument);
}

TEST_CASE("multilinear extension is monotone for semicoherent structures") {
    Rng rng(5);
    for (unsigned m : {1u, 2u, 3u}) {
        auto chi = test::random_semicoherent(m, rng);
        // 11-point grid per axis; step up each coordinate and compare.
        std::vector<unsigned> grid(m, 0);
        auto value_at = [&](const std::vector<unsigned>& g) {
            std::vector<Rational> z(m);
            for (unsigned i = 0; i < m; ++i) z[i] = Rational(g[i], 10u);
            return multilinear_extension(chi, z);
        };
        bool done = false;
        while (!done) {
            Rational here = value_at(grid);
            for (unsigned i = 0; i < m; ++i) {
                if (grid[i] == 10) continue;
                auto up = grid;
                ++up[i];
                REQUIRE(value_at(up) >= here);
            }
            done = true;
            for (unsigned i = 0; i < m; ++i) {
                if (grid[i] < 10) {
                    ++grid[i];
                    for (unsigned t = 0; t < i; ++t) grid[t] = 0;
                    done = false;
                    break;
                }
            }
        }
    }
}

TEST_CASE("component cap") {
    CHECK_THROWS_AS(StructureFunction(25), std::invalid_argument);
}

TEST_CASE("generated structures are monotone") {
    Rng rng(13);
    for (int trial = 0; trial < 30; ++trial) {
        unsigned n = 1 + static_cast<unsigned>(rng() % 8);
        auto phi = test::random_semicoherent(n, rng);
        CHECK(is_semicoherent(phi));
    }
}
