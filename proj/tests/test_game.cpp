#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "gamelearn/builtin.hpp"
#include "gamelearn/game.hpp"
#include "gamelearn/rng.hpp"

using namespace gamelearn;

namespace {

// Independent oracle: full enumeration over every profile, filtering on
// player i's action, instead of the library's opponent odometer.
double brute_expected(const Game& game, int i, int s, const MixedProfile& opp) {
    PureProfile prof(static_cast<std::size_t>(game.num_players()), 0);
    double total = 0.0;
    do {
        if (prof[static_cast<std::size_t>(i)] != s) continue;
        double w = 1.0;
        for (int j = 0; j < game.num_players(); ++j)
            if (j != i) w *= opp[j][static_cast<std::size_t>(prof[static_cast<std::size_t>(j)])];
        total += w * game.payoff(i, prof);
    } while (game.next_profile(prof));
    return total;
}

double brute_partial(const Game& game, int i, int s, int j, int r, const MixedProfile& others) {
    PureProfile prof(static_cast<std::size_t>(game.num_players()), 0);
    double total = 0.0;
    do {
        if (prof[static_cast<std::size_t>(i)] != s) continue;
        if (prof[static_cast<std::size_t>(j)] != r) continue;
        double w = 1.0;
        for (int k = 0; k < game.num_players(); ++k)
            if (k != i && k != j)
                w *= others[k][static_cast<std::size_t>(prof[static_cast<std::size_t>(k)])];
        total += w * game.payoff(i, prof);
    } while (game.next_profile(prof));
    return total;
}

Game random_game(Rng& rng, const std::vector<int>& counts) {
    std::size_t total = 1;
    for (int c : counts) total *= static_cast<std::size_t>(c);
    std::vector<std::vector<double>> payoffs(counts.size());
    for (auto& tensor : payoffs) {
        tensor.resize(total);
        for (double& v : tensor) v = 2.0 * rng.uniform01() - 1.0;
    }
    return Game(counts, payoffs);
}

MixedProfile random_profile(Rng& rng, const std::vector<int>& counts) {
    std::vector<std::vector<double>> p(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        double total = 0.0;
        p[i].resize(static_cast<std::size_t>(counts[i]));
        for (double& v : p[i]) {
            v = 0.05 + rng.uniform01();
            total += v;
        }
        for (double& v : p[i]) v /= total;
    }
    return MixedProfile(p);
}

Game matching_pennies() {
    return Game::from_matrices({{0, -1}, {1, 0}}, {{0, 1}, {-1, 0}});
}

}  // namespace

TEST_CASE("expected_payoff on pure and mixed opponents", "[game]") {
    const Game mp = matching_pennies();

    MixedProfile pure({{1.0, 0.0}, {1.0, 0.0}});
    CHECK(expected_payoff(mp, 0, 0, pure) == 0.0);

    MixedProfile mixed({{1.0, 0.0}, {0.5, 0.5}});
    CHECK(expected_payoff(mp, 0, 0, mixed) == Catch::Approx(-0.5).margin(1e-15));

    const Game g13 = game13();
    const MixedProfile u = MixedProfile::uniform(g13.strategy_counts());
    CHECK(expected_payoff(g13, 0, 0, u) == Catch::Approx(1.0 / 3.0).margin(1e-15));
}

TEST_CASE("expected_payoff equals tensor entry at pure opponents", "[game]") {
    Rng rng(11);
    const Game g = random_game(rng, {2, 3, 2});
    PureProfile prof = {1, 2, 0};
    MixedProfile pure({{0.0, 1.0}, {0.0, 0.0, 1.0}, {1.0, 0.0}});
    for (int i = 0; i < 3; ++i)
        CHECK(expected_payoff(g, i, prof[static_cast<std::size_t>(i)], pure) ==
              g.payoff(i, prof));
}

TEST_CASE("expected_payoff is linear in each opponent mixture", "[game]") {
    Rng rng(12);
    const Game g = random_game(rng, {2, 3});
    MixedProfile a = random_profile(rng, g.strategy_counts());
    MixedProfile b = random_profile(rng, g.strategy_counts());
    for (double t : {0.0, 0.25, 0.7, 1.0}) {
        MixedProfile mix = a;
        for (std::size_t s = 0; s < mix[1].size(); ++s)
            mix[1][s] = t * a[1][s] + (1.0 - t) * b[1][s];
        const double lhs = expected_payoff(g, 0, 1, mix);
        const double rhs =
            t * expected_payoff(g, 0, 1, a) + (1.0 - t) * expected_payoff(g, 0, 1, b);
        CHECK(lhs == Catch::Approx(rhs).margin(1e-14));
    }
}

TEST_CASE("expected_payoff matches enumeration oracle on small games", "[game]") {
    Rng rng(13);
    const std::vector<std::vector<int>> shapes = {{2, 2}, {3, 4}, {2, 2, 2}, {2, 3, 2}, {4, 4, 4}};
    for (const auto& counts : shapes) {
        const Game g = random_game(rng, counts);
        REQUIRE(g.num_profiles() <= 64);
        const MixedProfile pi = random_profile(rng, counts);
        for (int i = 0; i < g.num_players(); ++i)
            for (int s = 0; s < g.num_strategies(i); ++s)
                CHECK(expected_payoff(g, i, s, pi) ==
                      Catch::Approx(brute_expected(g, i, s, pi)).margin(1e-13));
    }
}

TEST_CASE("partial_expected_payoff special cases and oracle", "[game]") {
    // Two players: reduces to the tensor entry exactly.
    const Game mp = matching_pennies();
    MixedProfile u2 = MixedProfile::uniform(mp.strategy_counts());
    CHECK(partial_expected_payoff(mp, 0, 1, 1, 0, u2) == mp.payoff(0, {1, 0}));

    // Constant tensor: always the constant.
    const Game gc({2, 2, 2}, std::vector<std::vector<double>>(3, std::vector<double>(8, 2.5)));
    MixedProfile u3 = MixedProfile::uniform(gc.strategy_counts());
    for (int s = 0; s < 2; ++s)
        for (int r = 0; r < 2; ++r)
            CHECK(partial_expected_payoff(gc, 0, s, 1, r, u3) == Catch::Approx(2.5).margin(1e-15));

    // Random 3-player game vs brute force.
    Rng rng(14);
    const Game g = random_game(rng, {2, 2, 2});
    const MixedProfile pi = random_profile(rng, g.strategy_counts());
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            for (int s = 0; s < 2; ++s)
                for (int r = 0; r < 2; ++r)
                    CHECK(partial_expected_payoff(g, i, s, j, r, pi) ==
                          Catch::Approx(brute_partial(g, i, s, j, r, pi)).margin(1e-14));
        }

    CHECK_THROWS_AS(partial_expected_payoff(g, 1, 0, 1, 0, pi), std::invalid_argument);
}

TEST_CASE("partial averaged over r recovers expected_payoff", "[game]") {
    Rng rng(15);
    const Game g = random_game(rng, {3, 2, 3});
    const MixedProfile pi = random_profile(rng, g.strategy_counts());
    for (int i = 0; i < 3; ++i)
        for (int s = 0; s < g.num_strategies(i); ++s)
            for (int j = 0; j < 3; ++j) {
                if (j == i) continue;
                double avg = 0.0;
                for (int r = 0; r < g.num_strategies(j); ++r)
                    avg += pi[j][static_cast<std::size_t>(r)] *
                           partial_expected_payoff(g, i, s, j, r, pi);
                CHECK(avg == Catch::Approx(expected_payoff(g, i, s, pi)).margin(1e-13));
            }
}

TEST_CASE("eta values and shift invariance", "[game]") {
    const Game gc({2, 2}, std::vector<std::vector<double>>(2, std::vector<double>(4, 3.0)));
    CHECK(eta(gc) == 0.0);
    CHECK(eta(game13()) == 1.0);
    CHECK(eta(zerosum17()) == 1.0);

    // One-player game: no opponents to deviate.
    CHECK(eta(Game({3}, {{1.0, 5.0, -2.0}})) == 0.0);

    Rng rng(16);
    const Game g = random_game(rng, {2, 3, 2});
    std::vector<std::vector<double>> shifted;
    for (int i = 0; i < g.num_players(); ++i) {
        shifted.push_back(g.tensor(i));
        for (double& v : shifted.back()) v += 7.25;
    }
    const Game gs(g.strategy_counts(), shifted);
    CHECK(eta(gs) == Catch::Approx(eta(g)).margin(1e-12));
}

TEST_CASE("perturbed_payoff entropy term and frozen oracle value", "[game]") {
    const Game zero({2, 2}, std::vector<std::vector<double>>(2, std::vector<double>(4, 0.0)));
    const MixedProfile u = MixedProfile::uniform(zero.strategy_counts());
    CHECK(perturbed_payoff(zero, 0, u, 1.0) == Catch::Approx(1.0 + std::log(2.0)).margin(1e-14));

    // Independently computed: 1/3 + 2.5 * (1 + ln 3).
    const Game g13 = game13();
    const MixedProfile u3 = MixedProfile::uniform(g13.strategy_counts());
    CHECK(perturbed_payoff(g13, 0, u3, 0.4) ==
          Catch::Approx(5.579864055003608).margin(1e-12));

    // Entropy contribution vanishes as beta grows at fixed pi.
    const double linear_part = 1.0 / 3.0;
    CHECK(std::abs(perturbed_payoff(g13, 0, u3, 1e12) - linear_part) < 1e-11);

    MixedProfile boundary({{1.0, 0.0}, {0.5, 0.5}});
    CHECK_THROWS_AS(perturbed_payoff(zero, 0, boundary, 1.0), std::domain_error);
}

TEST_CASE("is_logit_equilibrium detects uniform and closed-form points", "[game]") {
    const Game zero({2, 2}, std::vector<std::vector<double>>(2, std::vector<double>(4, 0.0)));
    const MixedProfile u = MixedProfile::uniform(zero.strategy_counts());
    CHECK(is_logit_equilibrium(zero, u, {0.3, 9.0}, 1e-12));

    // Zero-sum built-in at beta = 1: sigma^i = (1/(1+e), e/(1+e)).
    const double e1 = std::exp(1.0);
    MixedProfile star({{1.0 / (1.0 + e1), e1 / (1.0 + e1)},
                       {1.0 / (1.0 + e1), e1 / (1.0 + e1)}});
    CHECK(is_logit_equilibrium(zerosum17(), star, {1.0, 1.0}, 1e-12));

    // And a perturbed copy is rejected.
    MixedProfile off = star;
    off[0][0] += 1e-3;
    off[0][1] -= 1e-3;
    CHECK_FALSE(is_logit_equilibrium(zerosum17(), off, {1.0, 1.0}, 1e-6));
}

TEST_CASE("construction and validation errors", "[game]") {
    CHECK_THROWS_AS(Game({2, 2}, {std::vector<double>(4, 0.0)}), std::invalid_argument);
    CHECK_THROWS_AS(Game({2, 2}, std::vector<std::vector<double>>(2, std::vector<double>(3, 0.0))),
                    std::invalid_argument);
    CHECK_THROWS_AS(Game({0}, {std::vector<double>{}}), std::invalid_argument);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(Game({2}, {std::vector<double>{1.0, inf}}), std::invalid_argument);

    CHECK_THROWS_AS(MixedProfile({{0.5, 0.6}}), std::invalid_argument);
    CHECK_THROWS_AS(MixedProfile({{1.2, -0.2}}), std::invalid_argument);

    const Game mp = matching_pennies();
    const MixedProfile u = MixedProfile::uniform(mp.strategy_counts());
    CHECK_THROWS_AS(expected_payoff(mp, 0, 5, u), std::invalid_argument);
    CHECK_THROWS_AS(expected_payoff(mp, 9, 0, u), std::invalid_argument);
}

TEST_CASE("profile iteration is lexicographic, last player fastest", "[game]") {
    const Game g({2, 3}, std::vector<std::vector<double>>(2, std::vector<double>(6, 0.0)));
    PureProfile s = {0, 0};
    std::vector<PureProfile> seen = {s};
    while (g.next_profile(s)) seen.push_back(s);
    REQUIRE(seen.size() == 6);
    CHECK(seen[1] == PureProfile{0, 1});
    CHECK(seen[3] == PureProfile{1, 0});
    CHECK(g.flat_index(seen[4].data()) == 4);
}
