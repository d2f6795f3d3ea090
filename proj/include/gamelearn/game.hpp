#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gamelearn/decision.hpp"

namespace gamelearn {

// One pure action per player, 0-based.
using PureProfile = std::vector<int>;

inline constexpr double kSimplexTol = 1e-12;

// Per-player probability vector over that player's strategies.
struct MixedProfile {
    std::vector<std::vector<double>> probs;  // probs[i][s]

    MixedProfile() = default;
    explicit MixedProfile(std::vector<std::vector<double>> p) : probs(std::move(p)) { validate(); }

    int num_players() const { return static_cast<int>(probs.size()); }
    const std::vector<double>& operator[](int i) const {
        return probs[static_cast<std::size_t>(i)];
    }
    std::vector<double>& operator[](int i) { return probs[static_cast<std::size_t>(i)]; }

    void validate() const {
        for (const auto& p : probs) {
            if (p.empty()) throw std::invalid_argument("MixedProfile: empty strategy set");
            double total = 0.0;
            for (double v : p) {
                if (!std::isfinite(v) || v < 0.0)
                    throw std::invalid_argument("MixedProfile: entries must be finite and >= 0");
                total += v;
            }
            if (std::abs(total - 1.0) > kSimplexTol)
                throw std::invalid_argument("MixedProfile: does not sum to 1 (off by " +
                                            std::to_string(total - 1.0) + ")");
        }
    }

    static MixedProfile uniform(const std::vector<int>& strategy_counts) {
        std::vector<std::vector<double>> p;
        p.reserve(strategy_counts.size());
        for (int n : strategy_counts)
            p.emplace_back(static_cast<std::size_t>(n), 1.0 / static_cast<double>(n));
        return MixedProfile(std::move(p));
    }
};

// Finite N-player normal-form game. Payoff tensors are stored dense, one flat
// row-major array per player: the last player's index varies fastest.
class Game {
  public:
    Game(std::vector<int> strategy_counts, std::vector<std::vector<double>> payoffs)
        : counts_(std::move(strategy_counts)), payoffs_(std::move(payoffs)) {
        if (counts_.empty()) throw std::invalid_argument("Game: need at least one player");
        std::size_t total = 1;
        for (int c : counts_) {
            if (c < 1) throw std::invalid_argument("Game: strategy counts must be >= 1");
            total *= static_cast<std::size_t>(c);
        }
        num_profiles_ = total;
        if (payoffs_.size() != counts_.size())
            throw std::invalid_argument("Game: one payoff tensor per player required");
        for (const auto& tensor : payoffs_) {
            if (tensor.size() != total)
                throw std::invalid_argument("Game: payoff tensor shape mismatch");
            for (double v : tensor)
                if (!std::isfinite(v)) throw std::invalid_argument("Game: payoffs must be finite");
        }
        strides_.assign(counts_.size(), 1);
        for (int i = static_cast<int>(counts_.size()) - 2; i >= 0; --i)
            strides_[static_cast<std::size_t>(i)] =
                strides_[static_cast<std::size_t>(i + 1)] *
                static_cast<std::size_t>(counts_[static_cast<std::size_t>(i + 1)]);
    }

    // Convenience for 2-player games given per-player (own action, opponent
    // action) matrices.
    static Game from_matrices(const std::vector<std::vector<double>>& a1,
                              const std::vector<std::vector<double>>& a2) {
        const int n1 = static_cast<int>(a1.size());
        const int n2 = static_cast<int>(a1.empty() ? 0 : a1[0].size());
        std::vector<double> g1, g2;
        g1.reserve(static_cast<std::size_t>(n1 * n2));
        g2.reserve(static_cast<std::size_t>(n1 * n2));
        for (int s1 = 0; s1 < n1; ++s1)
            for (int s2 = 0; s2 < n2; ++s2) {
                g1.push_back(a1[static_cast<std::size_t>(s1)][static_cast<std::size_t>(s2)]);
                g2.push_back(a2[static_cast<std::size_t>(s2)][static_cast<std::size_t>(s1)]);
            }
        return Game({n1, n2}, {std::move(g1), std::move(g2)});
    }

    int num_players() const { return static_cast<int>(counts_.size()); }
    int num_strategies(int i) const { return counts_.at(static_cast<std::size_t>(i)); }
    const std::vector<int>& strategy_counts() const { return counts_; }
    std::size_t num_profiles() const { return num_profiles_; }
    int total_strategy_count() const {
        int total = 0;
        for (int c : counts_) total += c;
        return total;
    }

    std::size_t flat_index(const int* s) const {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < counts_.size(); ++i)
            idx += static_cast<std::size_t>(s[i]) * strides_[i];
        return idx;
    }

    double payoff(int i, const int* s) const {
        return payoffs_[static_cast<std::size_t>(i)][flat_index(s)];
    }

    double payoff(int i, const PureProfile& s) const {
        check_profile(s);
        return payoff(i, s.data());
    }

    const std::vector<double>& tensor(int i) const {
        return payoffs_.at(static_cast<std::size_t>(i));
    }

    double max_abs_payoff() const {
        double m = 0.0;
        for (const auto& tensor : payoffs_)
            for (double v : tensor) m = std::max(m, std::abs(v));
        return m;
    }

    // Advances s through the full profile space in lexicographic order
    // (last player fastest); returns false after the last profile.
    bool next_profile(PureProfile& s) const {
        for (int i = num_players() - 1; i >= 0; --i) {
            auto& si = s[static_cast<std::size_t>(i)];
            if (++si < counts_[static_cast<std::size_t>(i)]) return true;
            si = 0;
        }
        return false;
    }

    void check_profile(const PureProfile& s) const {
        if (static_cast<int>(s.size()) != num_players())
            throw std::invalid_argument("profile length != number of players");
        for (int i = 0; i < num_players(); ++i)
            check_strategy(i, s[static_cast<std::size_t>(i)]);
    }

    void check_strategy(int i, int s) const {
        if (i < 0 || i >= num_players()) throw std::invalid_argument("player index out of range");
        if (s < 0 || s >= counts_[static_cast<std::size_t>(i)])
            throw std::invalid_argument("strategy index out of range");
    }

  private:
    std::vector<int> counts_;
    std::vector<std::vector<double>> payoffs_;
    std::vector<std::size_t> strides_;
    std::size_t num_profiles_ = 0;
};

namespace detail {

// Enumerates full profiles with player i's action pinned to s, accumulating
// payoff times the caller-supplied opponent weight.
template <typename Weight>
double opponent_expectation(const Game& game, int i, int s, Weight&& weight) {
    PureProfile prof(static_cast<std::size_t>(game.num_players()), 0);
    prof[static_cast<std::size_t>(i)] = s;
    double total = 0.0;
    // Odometer over the opponents' coordinates only.
    for (;;) {
        total += game.payoff(i, prof.data()) * weight(prof);
        int j = game.num_players() - 1;
        for (; j >= 0; --j) {
            if (j == i) continue;
            auto& pj = prof[static_cast<std::size_t>(j)];
            if (++pj < game.num_strategies(j)) break;
            pj = 0;
        }
        if (j < 0) return total;
    }
}

}  // namespace detail

// Multilinear extension G^i(s, pi^{-i}): expected payoff to player i for the
// pure action s when every opponent j plays the mixed strategy pi^j.
inline double expected_payoff(const Game& game, int i, int s, const MixedProfile& opponents) {
    game.check_strategy(i, s);
    if (opponents.num_players() != game.num_players())
        throw std::invalid_argument("expected_payoff: profile/game player mismatch");
    return detail::opponent_expectation(game, i, s, [&](const PureProfile& prof) {
        double w = 1.0;
        for (int j = 0; j < game.num_players(); ++j)
            if (j != i) w *= opponents[j][static_cast<std::size_t>(prof[static_cast<std::size_t>(j)])];
        return w;
    });
}

// G^i(s, r, pi^{-(i,j)}): as above but with player j's action also pinned, to r.
inline double partial_expected_payoff(const Game& game, int i, int s, int j, int r,
                                      const MixedProfile& others) {
    if (i == j) throw std::invalid_argument("partial_expected_payoff: i == j");
    game.check_strategy(i, s);
    game.check_strategy(j, r);
    if (others.num_players() != game.num_players())
        throw std::invalid_argument("partial_expected_payoff: profile/game player mismatch");
    PureProfile prof(static_cast<std::size_t>(game.num_players()), 0);
    prof[static_cast<std::size_t>(i)] = s;
    prof[static_cast<std::size_t>(j)] = r;
    double total = 0.0;
    for (;;) {
        double w = 1.0;
        for (int k = 0; k < game.num_players(); ++k)
            if (k != i && k != j)
                w *= others[k][static_cast<std::size_t>(prof[static_cast<std::size_t>(k)])];
        total += game.payoff(i, prof.data()) * w;
        int k = game.num_players() - 1;
        for (; k >= 0; --k) {
            if (k == i || k == j) continue;
            auto& pk = prof[static_cast<std::size_t>(k)];
            if (++pk < game.num_strategies(k)) break;
            pk = 0;
        }
        if (k < 0) return total;
    }
}

// eta: the largest payoff change any single opponent's unilateral deviation
// can cause, max over players i, own actions s, and opponent pairs differing
// in exactly one coordinate. Games with one player have no opponents: 0.
inline double eta(const Game& game) {
    const int n = game.num_players();
    if (n < 2) return 0.0;
    double best = 0.0;
    PureProfile prof(static_cast<std::size_t>(n), 0);
    do {
        for (int i = 0; i < n; ++i) {
            const double base = game.payoff(i, prof.data());
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                PureProfile alt = prof;
                for (int r = 0; r < game.num_strategies(j); ++r) {
                    if (r == prof[static_cast<std::size_t>(j)]) continue;
                    alt[static_cast<std::size_t>(j)] = r;
                    best = std::max(best, std::abs(base - game.payoff(i, alt.data())));
                }
            }
        }
    } while (game.next_profile(prof));
    return best;
}

// Entropy-perturbed payoff
//   Gbar^i(pi) = sum_s pi^{is} G^i(s, pi^{-i}) - (1/beta_i) sum_s pi^{is}(ln pi^{is} - 1).
// Boundary profiles are rejected rather than extended by continuity.
inline double perturbed_payoff(const Game& game, int i, const MixedProfile& pi, double beta_i) {
    if (!(beta_i > 0.0)) throw std::invalid_argument("perturbed_payoff: beta must be positive");
    if (pi.num_players() != game.num_players())
        throw std::invalid_argument("perturbed_payoff: profile/game player mismatch");
    double value = 0.0;
    for (int s = 0; s < game.num_strategies(i); ++s) {
        const double p = pi[i][static_cast<std::size_t>(s)];
        if (!(p > 0.0)) throw std::domain_error("perturbed_payoff: profile must be interior");
        value += p * expected_payoff(game, i, s, pi);
        value -= p * (std::log(p) - 1.0) / beta_i;
    }
    return value;
}

// Nash point of the entropy-perturbed game == logit fixed point:
// pi^{is} proportional to exp(beta_i G^i(s, pi^{-i})) for every player.
inline bool is_logit_equilibrium(const Game& game, const MixedProfile& pi,
                                 const std::vector<double>& betas, double tol = 1e-8) {
    if (static_cast<int>(betas.size()) != game.num_players())
        throw std::invalid_argument("is_logit_equilibrium: one beta per player required");
    LogitRule rule(betas);
    for (int i = 0; i < game.num_players(); ++i) {
        std::vector<double> values(static_cast<std::size_t>(game.num_strategies(i)));
        for (int s = 0; s < game.num_strategies(i); ++s)
            values[static_cast<std::size_t>(s)] = expected_payoff(game, i, s, pi);
        const std::vector<double> response = rule.sigma(i, values);
        for (int s = 0; s < game.num_strategies(i); ++s)
            if (std::abs(pi[i][static_cast<std::size_t>(s)] -
                         response[static_cast<std::size_t>(s)]) > tol)
                return false;
    }
    return true;
}

}  // namespace gamelearn
