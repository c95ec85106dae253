#include <bit>

#include "doctest.h"
#include "support.hpp"

#include "relsig/modular.hpp"
#include "relsig/oracle.hpp"

using namespace relsig;
using test::Rng;

namespace {

std::vector<Rational> rationals(std::initializer_list<Rational> values) { return values; }

/// Random modular system plus the data needed to compose its signature the
/// slow way under symmetric quality functions.
ModularSystem random_system(unsigned n, unsigned max_blocks, Rng& rng) {
    auto partition = test::random_partition(n, max_blocks, rng);
    std::vector<StructureFunction> modules;
    for (unsigned j = 0; j < partition.block_count(); ++j)
        modules.push_back(test::random_semicoherent(partition.block_size(j), rng));
    auto organizer = test::random_semicoherent(partition.block_count(), rng);
    return ModularSystem{std::move(partition), std::move(modules), std::move(organizer)};
}

std::vector<TailSignatureVector> symmetric_module_tails(const ModularSystem& system) {
    std::vector<TailSignatureVector> tails;
    for (unsigned j = 0; j < system.partition.block_count(); ++j)
        tails.push_back(tail_probability_signature(system.modules[j],
                                                   q_symmetric(system.partition.block_size(j))));
    return tails;
}

}  // namespace

TEST_CASE("compose_tail on two singleton modules in series") {
    Partition partition(2, {{0}, {1}});
    ModularSystem system{partition, {make_series(1), make_series(1)}, make_series(2)};
    auto tail = compose_tail(system.organizer, symmetric_module_tails(system),
                             hypergeometric_coefficients(partition));
    CHECK(tail.entries == rationals({1, 0, 0}));
}

TEST_CASE("compose_tail matches direct computation for two series pairs in parallel") {
    Partition partition(4, {{0, 1}, {2, 3}});
    ModularSystem system{partition, {make_series(2), make_series(2)}, make_parallel(2)};
    auto composed = compose_tail(system.organizer, symmetric_module_tails(system),
                                 hypergeometric_coefficients(partition));
    auto direct = tail_probability_signature(compose(system), q_symmetric(4));
    CHECK(composed == direct);
    composed.validate();
}

TEST_CASE("compose_tail equals the direct tail on random systems") {
    Rng rng(71);
    for (int trial = 0; trial < 40; ++trial) {
        unsigned n = 2 + static_cast<unsigned>(rng() % 9);  // up to 10
        auto system = random_system(n, 4, rng);
        auto composed = compose_tail(system.organizer, symmetric_module_tails(system),
                                     hypergeometric_coefficients(system.partition));
        auto direct = tail_probability_signature(compose(system), q_symmetric(n));
        REQUIRE(composed == direct);
    }
}

TEST_CASE("compose_cumulative is the complement of compose_tail") {
    Rng rng(73);
    for (int trial = 0; trial < 20; ++trial) {
        unsigned n = 2 + static_cast<unsigned>(rng() % 7);
        auto system = random_system(n, 3, rng);
        auto coeffs = hypergeometric_coefficients(system.partition);
        auto tails = symmetric_module_tails(system);
        std::vector<std::vector<Rational>> cumulatives;
        for (const auto& tail : tails) cumulatives.push_back(cumulative(tail));
        auto composed_cumulative = compose_cumulative(system.organizer, cumulatives, coeffs);
        auto composed_tail = compose_tail(system.organizer, tails, coeffs);
        REQUIRE(composed_cumulative == cumulative(composed_tail));
    }
}

TEST_CASE("series convolution") {
    SUBCASE("two parallel pairs in series") {
        TailSignatureVector pair_tail;
        pair_tail.entries = rationals({1, 1, 0});
        auto tail = series_convolution({pair_tail, pair_tail}, {2, 2});
        CHECK(tail.entries == rationals({1, 1, {2, 3}, 0, 0}));

        // Same value from the permutation oracle on the explicit structure.
        ModularSystem system{Partition(4, {{0, 1}, {2, 3}}),
                             {make_parallel(2), make_parallel(2)},
                             make_series(2)};
        auto oracle = brute_force_signature(compose(system), OrderDistribution::uniform(4));
        CHECK(tail == signature_to_tail(oracle));
    }
    SUBCASE("single module is returned unchanged") {
        TailSignatureVector tail;
        tail.entries = rationals({1, {3, 4}, {1, 4}, 0});
        CHECK(series_convolution({tail}, {3}) == tail);
    }
    SUBCASE("all singleton modules give the series tail") {
        TailSignatureVector unit;
        unit.entries = rationals({1, 0});
        auto tail = series_convolution({unit, unit, unit}, {1, 1, 1});
        CHECK(tail == signature_to_tail(structural_signature(make_series(3))));
    }
    SUBCASE("matches generic composition on random symmetric cases") {
        Rng rng(75);
        for (int trial = 0; trial < 25; ++trial) {
            unsigned n = 2 + static_cast<unsigned>(rng() % 7);
            auto partition = test::random_partition(n, 3, rng);
            std::vector<StructureFunction> modules;
            for (unsigned j = 0; j < partition.block_count(); ++j)
                modules.push_back(test::random_semicoherent(partition.block_size(j), rng));
            ModularSystem system{partition, modules, make_series(partition.block_count())};
            auto tails = symmetric_module_tails(system);
            auto convolved = series_convolution(tails, partition.block_sizes());
            auto composed =
                compose_tail(system.organizer, tails, hypergeometric_coefficients(partition));
            REQUIRE(convolved == composed);
        }
    }
}

TEST_CASE("boolean tail shortcut") {
    SUBCASE("series modules under an arbitrary organizer") {
        // A series module dies at its first internal failure: threshold 1.
        Rng rng(77);
        for (int trial = 0; trial < 10; ++trial) {
            unsigned n = 2 + static_cast<unsigned>(rng() % 7);
            auto partition = test::random_partition(n, 3, rng);
            unsigned r = partition.block_count();
            auto organizer = test::random_semicoherent(r, rng);
            auto sizes = partition.block_sizes();
            std::vector<StructureFunction> modules;
            for (unsigned size : sizes) modules.push_back(make_series(size));
            ModularSystem system{partition, modules, organizer};
            std::vector<unsigned> thresholds(sizes.size(), 1);
            auto shortcut = boolean_tail_shortcut(organizer, thresholds, sizes,
                                                  hypergeometric_coefficients(partition));
            auto generic = compose_tail(organizer, symmetric_module_tails(system),
                                        hypergeometric_coefficients(partition));
            REQUIRE(shortcut == generic);
        }
    }
    SUBCASE("parallel organizer over two series pairs") {
        Partition partition(4, {{0, 1}, {2, 3}});
        auto shortcut = boolean_tail_shortcut(make_parallel(2), {1, 1}, {2, 2},
                                              hypergeometric_coefficients(partition));
        ModularSystem system{partition, {make_series(2), make_series(2)}, make_parallel(2)};
        auto generic = compose_tail(system.organizer, symmetric_module_tails(system),
                                    hypergeometric_coefficients(partition));
        CHECK(shortcut == generic);
    }
    SUBCASE("threshold modules against the generic path") {
        // A module with threshold k dies at its k-th internal failure, which
        // is the (n_j - k + 1)-out-of-n_j structure.
        Rng rng(79);
        for (int trial = 0; trial < 10; ++trial) {
            unsigned n = 2 + static_cast<unsigned>(rng() % 9);  // up to 10
            auto partition = test::random_partition(n, 3, rng);
            auto sizes = partition.block_sizes();
            std::vector<unsigned> thresholds;
            std::vector<StructureFunction> modules;
            for (unsigned size : sizes) {
                unsigned k = 1 + static_cast<unsigned>(rng() % size);
                thresholds.push_back(k);
                modules.push_back(make_k_out_of_n(size - k + 1, size));
            }
            auto organizer = test::random_semicoherent(partition.block_count(), rng);
            ModularSystem system{partition, modules, organizer};
            auto shortcut = boolean_tail_shortcut(organizer, thresholds, sizes,
                                                  hypergeometric_coefficients(partition));
            auto generic = compose_tail(organizer, symmetric_module_tails(system),
                                        hypergeometric_coefficients(partition));
            REQUIRE(shortcut == generic);
        }
    }
    SUBCASE("single module exposes its own indicator tail") {
        Partition whole(3, {{0, 1, 2}});
        auto tail = boolean_tail_shortcut(make_series(1), {2}, {3},
                                          hypergeometric_coefficients(whole));
        CHECK(tail == signature_to_tail(structural_signature(make_k_out_of_n(2, 3))));
    }
}

TEST_CASE("q recovery via conjunction systems") {
    SUBCASE("symmetric q") {
        Partition partition(4, {{0, 2}, {1, 3}});
        auto q = q_symmetric(4);
        CHECK(recover_q_via_conjunctions(q, partition) == q);
    }
    SUBCASE("worked example") {
        auto q = q_from_order_distribution(test::example_order_distribution());
        Partition pairs(4, {{0, 1}, {2, 3}});
        auto recovered = recover_q_via_conjunctions(q, pairs);
        CHECK(recovered(0b0001) == Rational{1, 6});
        CHECK(recovered == q);
    }
    SUBCASE("random distributions") {
        Rng rng(81);
        for (int trial = 0; trial < 15; ++trial) {
            unsigned n = 2 + static_cast<unsigned>(rng() % 5);  // up to 6
            auto q = q_from_order_distribution(test::random_order_distribution(n, rng));
            auto partition = test::random_partition(n, 3, rng);
            REQUIRE(recover_q_via_conjunctions(q, partition) == q);
        }
    }
}

TEST_CASE("composition theorem verification") {
    SUBCASE("uniform law always verifies") {
        Rng rng(83);
        for (int trial = 0; trial < 10; ++trial) {
            unsigned n = 2 + static_cast<unsigned>(rng() % 6);  // up to 7
            auto system = random_system(n, 3, rng);
            auto report = verify_composition_theorem(system, OrderDistribution::uniform(n));
            REQUIRE(report.decomposable);
            REQUIRE(report.matches);
        }
    }
    SUBCASE("block-exchangeable laws verify") {
        Rng rng(85);
        for (int trial = 0; trial < 10; ++trial) {
            unsigned n = 2 + static_cast<unsigned>(rng() % 6);
            auto system = random_system(n, 3, rng);
            auto dist = test::random_block_exchangeable(system.partition, rng);
            auto report = verify_composition_theorem(system, dist);
            REQUIRE(report.decomposable);
            REQUIRE(report.matches);
        }
    }
    SUBCASE("perturbed law is reported non-decomposable with a witness") {
        OrderDistribution dist = OrderDistribution::uniform(4);
        dist.set_mass({0, 1, 2, 3}, Rational{1, 24} + Rational{1, 48});
        dist.set_mass({1, 0, 2, 3}, Rational{1, 24} - Rational{1, 48});
        ModularSystem system{Partition(4, {{0, 1}, {2, 3}}),
                             {make_parallel(2), make_series(2)},
                             make_series(2)};
        auto report = verify_composition_theorem(system, dist);
        CHECK_FALSE(report.decomposable);
        CHECK(report.counterexample.has_value());
    }
}

TEST_CASE("level-cell iteration covers the grid exactly once") {
    std::vector<unsigned> sizes{2, 3, 1};
    std::size_t total = 0;
    for (unsigned k = 0; k <= 6; ++k) {
        std::vector<std::vector<unsigned>> cells;
        for_each_level_cell(sizes, k, [&](const std::vector<unsigned>& a) {
            unsigned sum = 0;
            for (std::size_t j = 0; j < a.size(); ++j) {
                CHECK(a[j] <= sizes[j]);
                sum += a[j];
            }
            CHECK(sum == k);
            cells.push_back(a);
        });
        // Lexicographic and duplicate-free.
        for (std::size_t i = 1; i < cells.size(); ++i) CHECK(cells[i - 1] < cells[i]);
        total += cells.size();
    }
    CHECK(total == std::size_t{3} * 4 * 2);
}

TEST_CASE("redundancy") {
    std::vector<StructureFunction> cases{make_series(3), make_parallel(3), make_k_out_of_n(2, 3),
                                         test::bridge_structure()};
    for (const auto& chi : cases) {
        unsigned n = chi.component_count();
        auto base = cumulative(signature_to_tail(structural_signature(chi)));
        auto closed_system = system_redundancy_cumulative(base);
        auto closed_component = component_redundancy_cumulative(chi);
        auto generic_system =
            cumulative(signature_to_tail(structural_signature(redundancy_at_system_level(chi))));
        auto generic_component = cumulative(
            signature_to_tail(structural_signature(redundancy_at_component_level(chi))));
        REQUIRE(closed_system == generic_system);
        REQUIRE(closed_component == generic_component);
        // Component-level redundancy is the more reliable arrangement.
        for (unsigned k = 0; k <= 2 * n; ++k) REQUIRE(closed_component[k] <= closed_system[k]);
    }
}

TEST_CASE("argument validation") {
    Partition pairs(4, {{0, 1}, {2, 3}});
    auto coeffs = hypergeometric_coefficients(pairs);
    TailSignatureVector short_tail;
    short_tail.entries = rationals({1, 0});
    CHECK_THROWS_AS(compose_tail(make_series(2), {short_tail, short_tail}, coeffs),
                    std::invalid_argument);
    CHECK_THROWS_AS(series_convolution({short_tail}, {2}), std::invalid_argument);
    CHECK_THROWS_AS(boolean_tail_shortcut(make_series(2), {3, 1}, {2, 2}, coeffs),
                    std::invalid_argument);
}
