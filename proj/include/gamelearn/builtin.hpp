#pragma once

#include <vector>

#include "gamelearn/game.hpp"

namespace gamelearn {

// 3x3 symmetric shift game: each action beats exactly one opponent action
// for payoff 1, entries in {0,1}, constant row sum 1. With logit smoothing
// the centered point x = (1/3,...) is a rest point for every beta, and
// 2*eta*alpha = 0.8 at beta = 0.4.
inline Game game13() {
    const std::vector<std::vector<double>> m = {{0, 1, 0}, {0, 0, 1}, {1, 0, 0}};
    return Game::from_matrices(m, m);
}

// Rock-scissors-paper family with win payoff a and loss payoff -b; symmetric
// constant row sum a - b. The centered rest point sits at (a-b)/3 per
// coordinate.
inline Game rsp(double a, double b) {
    const std::vector<std::vector<double>> m = {{0, a, -b}, {-b, 0, a}, {a, -b, 0}};
    return Game::from_matrices(m, m);
}

// 2x2 zero-sum game whose unique logit rest point is known in closed form:
//   x_*^i = (-e^beta/(1+e^beta), 1/(1+e^beta)),
//   sigma^i = (1/(1+e^beta), e^beta/(1+e^beta)).
inline Game zerosum17() {
    const std::vector<std::vector<double>> m = {{0, -1}, {1, 0}};
    return Game::from_matrices(m, m);
}

}  // namespace gamelearn
