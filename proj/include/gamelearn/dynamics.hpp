#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "gamelearn/decision.hpp"
#include "gamelearn/errors.hpp"
#include "gamelearn/game.hpp"
#include "gamelearn/rng.hpp"

namespace gamelearn {

// Per-player vectors indexed like perceptions: v[i][s].
using PerPlayerVec = std::vector<std::vector<double>>;

// State of the mean dynamics: perceptions x and empirical frequencies lambda.
// lambda must be interior (the Psi field divides by it).
struct JointState {
    PerPlayerVec x;
    MixedProfile lambda;
};

// Value of a vector field at a JointState; same shape, no simplex constraint
// (the lambda components of Psi sum to zero per player).
struct StateDeriv {
    PerPlayerVec dx;
    PerPlayerVec dlambda;
};

inline PerPlayerVec zeros_like(const Game& game) {
    PerPlayerVec v(static_cast<std::size_t>(game.num_players()));
    for (int i = 0; i < game.num_players(); ++i)
        v[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(game.num_strategies(i)), 0.0);
    return v;
}

inline double inf_norm(const PerPlayerVec& v) {
    double m = 0.0;
    for (const auto& row : v)
        for (double x : row) m = std::max(m, std::abs(x));
    return m;
}

inline double inf_dist(const PerPlayerVec& a, const PerPlayerVec& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t s = 0; s < a[i].size(); ++s)
            m = std::max(m, std::abs(a[i][s] - b[i][s]));
    return m;
}

// sigma(x): evaluate the decision rule player by player.
inline MixedProfile sigma_profile(const DecisionRule& rule, const PerPlayerVec& x) {
    std::vector<std::vector<double>> probs(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        probs[i] = rule.sigma(static_cast<int>(i), x[i]);
    return MixedProfile(std::move(probs));
}

// F^{is}(x) = G^i(s, sigma^{-i}(x)): the payoff each action would earn in
// expectation against the opponents' current mixed choices. Note F^{is} does
// not depend on x^i (softmax of the own coordinates drops out).
inline PerPlayerVec F_map(const Game& game, const DecisionRule& rule, const PerPlayerVec& x) {
    const MixedProfile sig = sigma_profile(rule, x);
    PerPlayerVec out = zeros_like(game);
    for (int i = 0; i < game.num_players(); ++i)
        for (int s = 0; s < game.num_strategies(i); ++s)
            out[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)] =
                expected_payoff(game, i, s, sig);
    return out;
}

// Psi, the mean dynamics of the adjusted process:
//   Psi_x^{is} = (sigma^{is}(x^i)/lambda^{is}) (F^{is}(x) - x^{is})
//   Psi_lambda^{is} = sigma^{is}(x^i) - lambda^{is}
inline StateDeriv psi(const Game& game, const DecisionRule& rule, const JointState& state) {
    for (const auto& row : state.lambda.probs)
        for (double v : row)
            if (!(v > 0.0)) throw std::domain_error("psi: lambda must be strictly positive");
    const MixedProfile sig = sigma_profile(rule, state.x);
    const PerPlayerVec F = F_map(game, rule, state.x);
    StateDeriv d{zeros_like(game), zeros_like(game)};
    for (int i = 0; i < game.num_players(); ++i)
        for (int s = 0; s < game.num_strategies(i); ++s) {
            const auto si = static_cast<std::size_t>(i);
            const auto ss = static_cast<std::size_t>(s);
            d.dx[si][ss] = sig[i][ss] / state.lambda[i][ss] * (F[si][ss] - state.x[si][ss]);
            d.dlambda[si][ss] = sig[i][ss] - state.lambda[i][ss];
        }
    return d;
}

// Phi, the lambda-free dynamics: Phi^{is}(x) = sigma^{is}(x^i)(F^{is}(x) - x^{is}).
// Shares its rest points with Psi and with the fixed points of F.
inline PerPlayerVec phi(const Game& game, const DecisionRule& rule, const PerPlayerVec& x) {
    const MixedProfile sig = sigma_profile(rule, x);
    const PerPlayerVec F = F_map(game, rule, x);
    PerPlayerVec out = zeros_like(game);
    for (int i = 0; i < game.num_players(); ++i)
        for (int s = 0; s < game.num_strategies(i); ++s) {
            const auto si = static_cast<std::size_t>(i);
            const auto ss = static_cast<std::size_t>(s);
            out[si][ss] = sig[i][ss] * (F[si][ss] - state_entry(x, i, s));
        }
    return out;
}

inline double state_entry(const PerPlayerVec& v, int i, int s) {
    return v[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)];
}

// ------------------------------------------------------------------ solving

struct RestPoint {
    PerPlayerVec x;
    double residual = 0.0;  // ||F(x) - x||_inf
    int iterations = 0;
    std::string method;  // "fixed-point", "damped", or "newton"

    JointState joint(const Game&, const DecisionRule& rule) const {
        return JointState{x, sigma_profile(rule, x)};
    }
};

namespace detail {

inline Eigen::VectorXd flatten_pp(const PerPlayerVec& v) {
    std::size_t n = 0;
    for (const auto& row : v) n += row.size();
    Eigen::VectorXd out(static_cast<Eigen::Index>(n));
    Eigen::Index k = 0;
    for (const auto& row : v)
        for (double x : row) out[k++] = x;
    return out;
}

inline PerPlayerVec unflatten_pp(const Game& game, const Eigen::VectorXd& z, Eigen::Index offset = 0) {
    PerPlayerVec out = zeros_like(game);
    Eigen::Index k = offset;
    for (auto& row : out)
        for (double& x : row) x = z[k++];
    return out;
}

}  // namespace detail

// Solves F(x) = x. Starts with plain fixed-point iteration (a contraction
// whenever 2*eta*alpha < 1), then a damped pass, then Newton on Phi for the
// stiff regimes; throws nonconvergence_error with the final residual if all
// three fail.
inline RestPoint solve_rest_point(const Game& game, const DecisionRule& rule, PerPlayerVec x0,
                                  double tol = 1e-10, int max_iter = 5000) {
    if (!(tol > 0.0)) throw std::invalid_argument("solve_rest_point: tol must be positive");
    int iterations = 0;
    double residual = 0.0;

    auto iterate = [&](PerPlayerVec x, double damp, int budget, double* out_res) {
        double res = std::numeric_limits<double>::infinity();
        for (int it = 0; it < budget; ++it) {
            const PerPlayerVec Fx = F_map(game, rule, x);
            res = inf_dist(Fx, x);
            ++iterations;
            if (res <= tol) {
                *out_res = res;
                return std::make_pair(true, damp == 1.0 ? Fx : x);
            }
            for (std::size_t i = 0; i < x.size(); ++i)
                for (std::size_t s = 0; s < x[i].size(); ++s)
                    x[i][s] = (1.0 - damp) * x[i][s] + damp * Fx[i][s];
        }
        *out_res = res;
        return std::make_pair(false, x);
    };

    auto [ok, x] = iterate(x0, 1.0, max_iter, &residual);
    if (ok) return RestPoint{std::move(x), residual, iterations, "fixed-point"};

    auto [ok2, x2] = iterate(x0, 0.5, max_iter, &residual);
    if (ok2) return RestPoint{std::move(x2), residual, iterations, "damped"};

    // Newton on Phi with a numeric Jacobian; started from the damped iterate.
    PerPlayerVec x3 = std::move(x2);
    const int dim = game.total_strategy_count();
    for (int it = 0; it < 100; ++it) {
        const PerPlayerVec Fx = F_map(game, rule, x3);
        residual = inf_dist(Fx, x3);
        ++iterations;
        if (residual <= tol) return RestPoint{std::move(x3), residual, iterations, "newton"};

        Eigen::VectorXd z = detail::flatten_pp(x3);
        Eigen::MatrixXd J(dim, dim);
        Eigen::VectorXd phi0 = detail::flatten_pp(phi(game, rule, x3));
        for (int k = 0; k < dim; ++k) {
            const double h = 1e-6 * std::max(1.0, std::abs(z[k]));
            Eigen::VectorXd zp = z, zm = z;
            zp[k] += h;
            zm[k] -= h;
            const Eigen::VectorXd fp =
                detail::flatten_pp(phi(game, rule, detail::unflatten_pp(game, zp)));
            const Eigen::VectorXd fm =
                detail::flatten_pp(phi(game, rule, detail::unflatten_pp(game, zm)));
            J.col(k) = (fp - fm) / (2.0 * h);
        }
        const Eigen::VectorXd step = J.colPivHouseholderQr().solve(-phi0);
        if (!step.allFinite()) break;
        z += step;
        x3 = detail::unflatten_pp(game, z);
        if (inf_norm(x3) > 100.0 * (1.0 + game.max_abs_payoff())) break;  // diverged
    }
    throw nonconvergence_error("solve_rest_point: no convergence", residual, iterations);
}

// Multistart search; returns the distinct rest points found (inf-distance
// dedup). Makes no exhaustiveness claim.
inline std::vector<RestPoint> find_rest_points(const Game& game, const DecisionRule& rule,
                                               int num_starts, std::uint64_t seed,
                                               double tol = 1e-10) {
    std::vector<RestPoint> found;
    Rng rng(substream_seed(seed, 0));
    const double box = std::max(1.0, game.max_abs_payoff());
    for (int trial = 0; trial < num_starts; ++trial) {
        PerPlayerVec x0 = zeros_like(game);
        if (trial > 0)
            for (auto& row : x0)
                for (double& v : row) v = box * (2.0 * rng.uniform01() - 1.0);
        try {
            RestPoint rp = solve_rest_point(game, rule, std::move(x0), tol);
            bool duplicate = false;
            for (const auto& have : found)
                if (inf_dist(have.x, rp.x) < 1e-6) {
                    duplicate = true;
                    break;
                }
            if (!duplicate) found.push_back(std::move(rp));
        } catch (const nonconvergence_error&) {
            // keep searching from other starts
        }
    }
    return found;
}

// ------------------------------------------------------------------ ODE

enum class Dynamics { Psi, Phi };

struct OdePoint {
    double t;
    JointState state;
};

// Fixed-step classical RK4 over the chosen field. For Psi the empirical
// frequencies must stay in the open simplex; leaving it signals that dt is
// too large for this trajectory and raises integration_error. For Phi the
// state is x alone and the reported lambda is slaved to sigma(x).
inline std::vector<OdePoint> integrate(const Game& game, const DecisionRule& rule,
                                       Dynamics dynamics, const JointState& state0, double t_end,
                                       double dt = 0.01, int sample_every = 1) {
    if (!(dt > 0.0)) throw std::invalid_argument("integrate: dt must be positive");
    if (sample_every < 1) throw std::invalid_argument("integrate: sample_every must be >= 1");
    const int dim = game.total_strategy_count();
    const bool with_lambda = dynamics == Dynamics::Psi;
    const int n = with_lambda ? 2 * dim : dim;

    Eigen::VectorXd z(n);
    z.head(dim) = detail::flatten_pp(state0.x);
    if (with_lambda) z.tail(dim) = detail::flatten_pp(state0.lambda.probs);

    auto field = [&](const Eigen::VectorXd& y) {
        Eigen::VectorXd out(n);
        const PerPlayerVec x = detail::unflatten_pp(game, y);
        if (with_lambda) {
            PerPlayerVec lam = detail::unflatten_pp(game, y, dim);
            for (const auto& row : lam)
                for (double v : row)
                    if (!(v > 0.0))
                        throw integration_error("integrate: lambda left the open simplex");
            const MixedProfile sig = sigma_profile(rule, x);
            const PerPlayerVec F = F_map(game, rule, x);
            Eigen::Index k = 0;
            for (int i = 0; i < game.num_players(); ++i)
                for (int s = 0; s < game.num_strategies(i); ++s, ++k) {
                    const double l = state_entry(lam, i, s);
                    out[k] = sig[i][static_cast<std::size_t>(s)] / l *
                             (state_entry(F, i, s) - state_entry(x, i, s));
                    out[dim + k] = sig[i][static_cast<std::size_t>(s)] - l;
                }
        } else {
            out = detail::flatten_pp(phi(game, rule, x));
        }
        return out;
    };

    auto make_point = [&](double t, const Eigen::VectorXd& y) {
        JointState st;
        st.x = detail::unflatten_pp(game, y);
        st.lambda = with_lambda ? MixedProfile(detail::unflatten_pp(game, y, dim))
                                : sigma_profile(rule, st.x);
        return OdePoint{t, std::move(st)};
    };

    std::vector<OdePoint> path;
    const auto steps = static_cast<long long>(std::ceil(t_end / dt - 1e-12));
    path.reserve(static_cast<std::size_t>(steps / sample_every + 2));
    path.push_back(make_point(0.0, z));
    for (long long k = 0; k < steps; ++k) {
        const Eigen::VectorXd k1 = field(z);
        const Eigen::VectorXd k2 = field(z + 0.5 * dt * k1);
        const Eigen::VectorXd k3 = field(z + 0.5 * dt * k2);
        const Eigen::VectorXd k4 = field(z + dt * k3);
        z += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (with_lambda) {
            // Interiority and per-player normalization survive exact
            // integration; drift beyond tolerance means dt is too coarse.
            Eigen::Index off = dim;
            for (int i = 0; i < game.num_players(); ++i) {
                double total = 0.0;
                for (int s = 0; s < game.num_strategies(i); ++s, ++off) {
                    if (!(z[off] > 1e-12))
                        throw integration_error("integrate: lambda left the open simplex");
                    total += z[off];
                }
                if (std::abs(total - 1.0) > 1e-9)
                    throw integration_error("integrate: lambda normalization drifted");
            }
        }
        if ((k + 1) % sample_every == 0 || k + 1 == steps)
            path.push_back(make_point(static_cast<double>(k + 1) * dt, z));
    }
    return path;
}

// V(x, lambda) = max(||x - x_*||_inf, ||lambda - lambda_*||_inf / zeta):
// the certified Lyapunov function of the contraction regime.
inline double lyapunov_value(const JointState& state, const JointState& rest, double zeta) {
    if (!(zeta > 0.0)) throw std::invalid_argument("lyapunov_value: zeta must be positive");
    return std::max(inf_dist(state.x, rest.x),
                    inf_dist(state.lambda.probs, rest.lambda.probs) / zeta);
}

// Default zeta: strictly above the largest decision-rule Lipschitz constant.
inline double default_zeta(const LogitRule& rule) {
    double m = 0.0;
    for (int i = 0; i < rule.num_players(); ++i) m = std::max(m, logit_lipschitz_bound(rule, i));
    return 2.0 * m;
}

// ------------------------------------------------------------------ spectra

struct SpectralReport {
    Eigen::MatrixXd jacobian;
    std::vector<std::complex<double>> eigenvalues;
    double rho = 0.0;  // max real part
    std::vector<double> gershgorin_radii;  // off-diagonal row sums, x rows
    double gershgorin_radius_bound = 0.0;  // eta * alpha
    bool stable = false;  // rho < 0
};

enum class JacobianMode { Analytic, Numeric };
enum class SpectralPrecision { Double, LongDouble };

namespace detail {

template <typename Scalar>
using MatX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using PPV = std::vector<std::vector<Scalar>>;

template <typename Scalar>
PPV<Scalar> to_scalar(const PerPlayerVec& v) {
    PPV<Scalar> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out[i].assign(v[i].begin(), v[i].end());
    return out;
}

template <typename Scalar>
PPV<Scalar> sigma_profile_t(const Game& game, const LogitRule& rule, const PPV<Scalar>& x) {
    PPV<Scalar> sig(x.size());
    for (int i = 0; i < game.num_players(); ++i) {
        const auto& xi = x[static_cast<std::size_t>(i)];
        const Scalar b = static_cast<Scalar>(rule.beta(i));
        Scalar xmax = xi[0];
        for (Scalar v : xi) xmax = std::max(xmax, v);
        Scalar total = 0;
        auto& si = sig[static_cast<std::size_t>(i)];
        si.resize(xi.size());
        for (std::size_t s = 0; s < xi.size(); ++s) {
            si[s] = std::exp(b * (xi[s] - xmax));
            total += si[s];
        }
        for (auto& v : si) v /= total;
    }
    return sig;
}

template <typename Scalar>
Scalar expected_payoff_t(const Game& game, int i, int s, const PPV<Scalar>& pi) {
    PureProfile prof(static_cast<std::size_t>(game.num_players()), 0);
    prof[static_cast<std::size_t>(i)] = s;
    Scalar total = 0;
    for (;;) {
        Scalar w = 1;
        for (int j = 0; j < game.num_players(); ++j)
            if (j != i)
                w *= pi[static_cast<std::size_t>(j)][static_cast<std::size_t>(prof[static_cast<std::size_t>(j)])];
        total += static_cast<Scalar>(game.payoff(i, prof.data())) * w;
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

template <typename Scalar>
Scalar partial_expected_payoff_t(const Game& game, int i, int s, int j, int r,
                                 const PPV<Scalar>& pi) {
    PureProfile prof(static_cast<std::size_t>(game.num_players()), 0);
    prof[static_cast<std::size_t>(i)] = s;
    prof[static_cast<std::size_t>(j)] = r;
    Scalar total = 0;
    for (;;) {
        Scalar w = 1;
        for (int k = 0; k < game.num_players(); ++k)
            if (k != i && k != j)
                w *= pi[static_cast<std::size_t>(k)][static_cast<std::size_t>(prof[static_cast<std::size_t>(k)])];
        total += static_cast<Scalar>(game.payoff(i, prof.data())) * w;
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

// Polishes a rest point by fixed-point iteration in Scalar precision,
// keeping the best-residual iterate (safe at unstable rest points, where the
// input is already the best available and iteration would wander off).
template <typename Scalar>
PPV<Scalar> refine_rest_point_t(const Game& game, const LogitRule& rule, PPV<Scalar> x,
                                int iters = 64) {
    auto residual_of = [&](const PPV<Scalar>& y, PPV<Scalar>& Fy) {
        const PPV<Scalar> sig = sigma_profile_t(game, rule, y);
        Scalar res = 0;
        Fy = y;
        for (int i = 0; i < game.num_players(); ++i)
            for (int s = 0; s < game.num_strategies(i); ++s) {
                const Scalar f = expected_payoff_t(game, i, s, sig);
                res = std::max(res, std::abs(f - y[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)]));
                Fy[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)] = f;
            }
        return res;
    };
    PPV<Scalar> best = x, Fx;
    Scalar best_res = residual_of(x, Fx);
    for (int it = 0; it < iters; ++it) {
        x = Fx;
        const Scalar res = residual_of(x, Fx);
        if (res < best_res) {
            best_res = res;
            best = x;
        } else if (!(res < best_res * 2)) {
            break;  // diverging; keep the best seen
        }
    }
    return best;
}

// Analytic Jacobian of the full (Psi_x, Psi_lambda) field at a rest point
// with lambda = sigma(x). Coordinates are ordered x-block then lambda-block,
// players concatenated. Block structure:
//   d Psi_x / d x      : -1 on the diagonal, beta_j sigma^{jr} (G^i(s,r,.) - G^i(s,.))
//                        across players, 0 within a player off-diagonal
//   d Psi_x / d lambda : 0   (the (F - x) factor vanishes at the rest point)
//   d Psi_lambda / d x : the softmax differential, block diagonal per player
//   d Psi_lambda / d lambda : -1 on the diagonal
template <typename Scalar>
MatX<Scalar> jacobian_psi_analytic_t(const Game& game, const LogitRule& rule,
                                     const PPV<Scalar>& x) {
    const int dim = game.total_strategy_count();
    const PPV<Scalar> sig = sigma_profile_t(game, rule, x);
    MatX<Scalar> J = MatX<Scalar>::Zero(2 * dim, 2 * dim);

    std::vector<int> offset(static_cast<std::size_t>(game.num_players()), 0);
    for (int i = 1; i < game.num_players(); ++i)
        offset[static_cast<std::size_t>(i)] =
            offset[static_cast<std::size_t>(i - 1)] + game.num_strategies(i - 1);

    for (int i = 0; i < game.num_players(); ++i)
        for (int s = 0; s < game.num_strategies(i); ++s) {
            const int row = offset[static_cast<std::size_t>(i)] + s;
            J(row, row) = Scalar(-1);
            const Scalar base = expected_payoff_t(game, i, s, sig);
            for (int j = 0; j < game.num_players(); ++j) {
                if (j == i) continue;
                for (int r = 0; r < game.num_strategies(j); ++r) {
                    const int col = offset[static_cast<std::size_t>(j)] + r;
                    const Scalar gij = partial_expected_payoff_t(game, i, s, j, r, sig);
                    J(row, col) = static_cast<Scalar>(rule.beta(j)) *
                                  sig[static_cast<std::size_t>(j)][static_cast<std::size_t>(r)] *
                                  (gij - base);
                }
            }
            // d sigma^{is} / d x^{ir} = beta_i sigma^{is} (1{s=r} - sigma^{ir})
            for (int r = 0; r < game.num_strategies(i); ++r) {
                const int col = offset[static_cast<std::size_t>(i)] + r;
                const Scalar sis = sig[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)];
                const Scalar sir = sig[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)];
                J(dim + row, col) =
                    static_cast<Scalar>(rule.beta(i)) * sis * ((s == r ? Scalar(1) : Scalar(0)) - sir);
            }
            J(dim + row, dim + row) = Scalar(-1);
        }
    return J;
}

// Analytic Jacobian of Phi at a rest point:
//   diagonal -sigma^{is}; across players sigma^{is} beta_j sigma^{jr} (G^i(s,r,.) - G^i(s,.)).
template <typename Scalar>
MatX<Scalar> jacobian_phi_analytic_t(const Game& game, const LogitRule& rule,
                                     const PPV<Scalar>& x) {
    const int dim = game.total_strategy_count();
    const PPV<Scalar> sig = sigma_profile_t(game, rule, x);
    MatX<Scalar> J = MatX<Scalar>::Zero(dim, dim);

    std::vector<int> offset(static_cast<std::size_t>(game.num_players()), 0);
    for (int i = 1; i < game.num_players(); ++i)
        offset[static_cast<std::size_t>(i)] =
            offset[static_cast<std::size_t>(i - 1)] + game.num_strategies(i - 1);

    for (int i = 0; i < game.num_players(); ++i)
        for (int s = 0; s < game.num_strategies(i); ++s) {
            const int row = offset[static_cast<std::size_t>(i)] + s;
            const Scalar sis = sig[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)];
            J(row, row) = -sis;
            const Scalar base = expected_payoff_t(game, i, s, sig);
            for (int j = 0; j < game.num_players(); ++j) {
                if (j == i) continue;
                for (int r = 0; r < game.num_strategies(j); ++r) {
                    const int col = offset[static_cast<std::size_t>(j)] + r;
                    const Scalar gij = partial_expected_payoff_t(game, i, s, j, r, sig);
                    J(row, col) = sis * static_cast<Scalar>(rule.beta(j)) *
                                  sig[static_cast<std::size_t>(j)][static_cast<std::size_t>(r)] *
                                  (gij - base);
                }
            }
        }
    return J;
}

template <typename Scalar>
void eigensolve_into(const MatX<Scalar>& J, SpectralReport& report) {
    Eigen::EigenSolver<MatX<Scalar>> solver(J);
    const auto& vals = solver.eigenvalues();
    report.eigenvalues.clear();
    report.eigenvalues.reserve(static_cast<std::size_t>(vals.size()));
    double rho = -std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < vals.size(); ++k) {
        const std::complex<double> ev(static_cast<double>(vals[k].real()),
                                      static_cast<double>(vals[k].imag()));
        report.eigenvalues.push_back(ev);
        rho = std::max(rho, ev.real());
    }
    report.rho = rho;
    report.stable = rho < 0.0;
}

inline void gershgorin_rows(const Eigen::MatrixXd& block, SpectralReport& report) {
    report.gershgorin_radii.clear();
    report.gershgorin_radii.reserve(static_cast<std::size_t>(block.rows()));
    for (Eigen::Index r = 0; r < block.rows(); ++r) {
        double radius = 0.0;
        for (Eigen::Index c = 0; c < block.cols(); ++c)
            if (c != r) radius += std::abs(block(r, c));
        report.gershgorin_radii.push_back(radius);
    }
}

template <typename F>
Eigen::MatrixXd numeric_jacobian(F&& field, const Eigen::VectorXd& z0) {
    const Eigen::Index n = z0.size();
    Eigen::MatrixXd J(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double h = 1e-6 * std::max(1.0, std::abs(z0[k]));
        Eigen::VectorXd zp = z0, zm = z0;
        zp[k] += h;
        zm[k] -= h;
        J.col(k) = (field(zp) - field(zm)) / (2.0 * h);
    }
    return J;
}

inline void require_rest_point(const Game& game, const DecisionRule& rule, const JointState& state,
                               const char* who) {
    const PerPlayerVec F = F_map(game, rule, state.x);
    const MixedProfile sig = sigma_profile(rule, state.x);
    if (inf_dist(F, state.x) > 1e-8 || inf_dist(sig.probs, state.lambda.probs) > 1e-8)
        throw std::invalid_argument(std::string(who) +
                                    ": analytic mode requires a rest point with lambda = sigma(x)");
}

}  // namespace detail

// Jacobian of the full (Psi_x, Psi_lambda) field together with its spectrum.
// Analytic mode is only valid at a rest point (checked); numeric mode uses
// scaled central differences and works anywhere. LongDouble precision first
// polishes the rest point and then assembles/solves in extended precision —
// needed when the spectrum is defective and double roundoff alone would
// split eigenvalues by ~1e-8.
inline SpectralReport jacobian_psi(const Game& game, const LogitRule& rule, const JointState& state,
                                   JacobianMode mode = JacobianMode::Analytic,
                                   SpectralPrecision precision = SpectralPrecision::Double) {
    const int dim = game.total_strategy_count();
    SpectralReport report;
    report.gershgorin_radius_bound = eta(game) * alpha(rule);

    if (mode == JacobianMode::Analytic) {
        detail::require_rest_point(game, rule, state, "jacobian_psi");
        if (precision == SpectralPrecision::LongDouble) {
            auto xl = detail::refine_rest_point_t<long double>(
                game, rule, detail::to_scalar<long double>(state.x));
            const auto Jl = detail::jacobian_psi_analytic_t<long double>(game, rule, xl);
            report.jacobian = Jl.template cast<double>();
            detail::eigensolve_into<long double>(Jl, report);
        } else {
            auto xd = detail::refine_rest_point_t<double>(game, rule,
                                                          detail::to_scalar<double>(state.x));
            const auto J = detail::jacobian_psi_analytic_t<double>(game, rule, xd);
            report.jacobian = J;
            detail::eigensolve_into<double>(J, report);
        }
    } else {
        Eigen::VectorXd z0(2 * dim);
        z0.head(dim) = detail::flatten_pp(state.x);
        z0.tail(dim) = detail::flatten_pp(state.lambda.probs);
        auto field = [&](const Eigen::VectorXd& z) {
            JointState st;
            st.x = detail::unflatten_pp(game, z);
            st.lambda.probs = detail::unflatten_pp(game, z, dim);
            const StateDeriv d = psi(game, rule, st);
            Eigen::VectorXd out(2 * dim);
            out.head(dim) = detail::flatten_pp(d.dx);
            out.tail(dim) = detail::flatten_pp(d.dlambda);
            return out;
        };
        report.jacobian = detail::numeric_jacobian(field, z0);
        detail::eigensolve_into<double>(Eigen::MatrixXd(report.jacobian), report);
    }
    detail::gershgorin_rows(report.jacobian.topLeftCorner(dim, dim), report);
    return report;
}

// Jacobian of Phi with its spectrum. In analytic mode (rest points only) the
// structural identities are verified: trace = -N and, under 2*eta*alpha < 1,
// -N/total_strategies <= rho < 0.
inline SpectralReport jacobian_phi(const Game& game, const LogitRule& rule, const JointState& state,
                                   JacobianMode mode = JacobianMode::Analytic,
                                   SpectralPrecision precision = SpectralPrecision::Double) {
    const int dim = game.total_strategy_count();
    SpectralReport report;
    const double eta_alpha = eta(game) * alpha(rule);
    report.gershgorin_radius_bound = eta_alpha;

    if (mode == JacobianMode::Analytic) {
        detail::require_rest_point(game, rule, state, "jacobian_phi");
        if (precision == SpectralPrecision::LongDouble) {
            auto xl = detail::refine_rest_point_t<long double>(
                game, rule, detail::to_scalar<long double>(state.x));
            const auto Jl = detail::jacobian_phi_analytic_t<long double>(game, rule, xl);
            report.jacobian = Jl.template cast<double>();
            detail::eigensolve_into<long double>(Jl, report);
        } else {
            auto xd = detail::refine_rest_point_t<double>(game, rule,
                                                          detail::to_scalar<double>(state.x));
            const auto J = detail::jacobian_phi_analytic_t<double>(game, rule, xd);
            report.jacobian = J;
            detail::eigensolve_into<double>(J, report);
        }
        const double trace = report.jacobian.trace();
        if (std::abs(trace + game.num_players()) > 1e-8)
            throw assumption_error("jacobian_phi: trace != -N at a rest point");
        if (2.0 * eta_alpha < 1.0) {
            const double floor = -static_cast<double>(game.num_players()) / dim;
            if (report.rho < floor - 1e-8 || !(report.rho < 0.0))
                throw assumption_error("jacobian_phi: rho outside [-N/sum|S|, 0) in the contraction regime");
        }
    } else {
        const Eigen::VectorXd z0 = detail::flatten_pp(state.x);
        auto field = [&](const Eigen::VectorXd& z) {
            return detail::flatten_pp(phi(game, rule, detail::unflatten_pp(game, z)));
        };
        report.jacobian = detail::numeric_jacobian(field, z0);
        detail::eigensolve_into<double>(Eigen::MatrixXd(report.jacobian), report);
    }
    detail::gershgorin_rows(report.jacobian, report);
    return report;
}

// Stable/unstable classification of a batch of rest points, with the
// uniqueness-regime flag 1 <= 2*eta*alpha < 2.
struct CensusEntry {
    PerPlayerVec x;
    SpectralReport psi_report;
    SpectralReport phi_report;
    bool prop_unique_stable_regime = false;
};

inline std::vector<CensusEntry> stability_census(const Game& game, const LogitRule& rule,
                                                 const std::vector<PerPlayerVec>& rest_points) {
    const double two_eta_alpha = 2.0 * eta(game) * alpha(rule);
    std::vector<CensusEntry> out;
    out.reserve(rest_points.size());
    for (const auto& x : rest_points) {
        const PerPlayerVec F = F_map(game, rule, x);
        if (inf_dist(F, x) > 1e-8)
            throw std::invalid_argument("stability_census: input is not a rest point");
        JointState st{x, sigma_profile(rule, x)};
        CensusEntry entry;
        entry.x = x;
        entry.psi_report = jacobian_psi(game, rule, st, JacobianMode::Analytic);
        entry.phi_report = jacobian_phi(game, rule, st, JacobianMode::Analytic);
        entry.prop_unique_stable_regime = two_eta_alpha >= 1.0 && two_eta_alpha < 2.0;
        out.push_back(std::move(entry));
    }
    return out;
}

}  // namespace gamelearn
