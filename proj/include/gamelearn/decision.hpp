#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace gamelearn {

// Decision-rule contract: a continuous map from a player's perception vector
// x^i to a fully mixed strategy (every component strictly positive). The
// simulators and mean dynamics only rely on this interface, so rules other
// than Logit can be plugged in as long as they keep strict interiority.
class DecisionRule {
  public:
    virtual ~DecisionRule() = default;

    virtual int num_players() const = 0;

    // Writes sigma^i(x) into out[0..n). Must produce strictly positive
    // entries summing to 1 (within roundoff).
    virtual void sigma(int i, const double* x, int n, double* out) const = 0;

    std::vector<double> sigma(int i, const std::vector<double>& x) const {
        std::vector<double> out(x.size());
        sigma(i, x.data(), static_cast<int>(x.size()), out.data());
        return out;
    }
};

// Logit (softmax) choice: sigma^{is}(x) = exp(beta_i x^{is}) / sum_r exp(beta_i x^{ir}).
// beta_i > 0 is the smoothing parameter; larger beta concentrates the choice
// on the perceived best action.
class LogitRule final : public DecisionRule {
  public:
    explicit LogitRule(std::vector<double> betas) : betas_(std::move(betas)) {
        if (betas_.empty()) throw std::invalid_argument("LogitRule: empty beta list");
        for (double b : betas_)
            if (!(b > 0.0) || !std::isfinite(b))
                throw std::invalid_argument("LogitRule: beta must be positive and finite");
    }

    LogitRule(int num_players, double beta) : LogitRule(std::vector<double>(num_players, beta)) {}

    using DecisionRule::sigma;

    int num_players() const override { return static_cast<int>(betas_.size()); }
    double beta(int i) const { return betas_.at(static_cast<std::size_t>(i)); }
    const std::vector<double>& betas() const { return betas_; }

    void sigma(int i, const double* x, int n, double* out) const override {
        const double b = betas_.at(static_cast<std::size_t>(i));
        double xmax = -std::numeric_limits<double>::infinity();
        for (int s = 0; s < n; ++s) {
            if (std::isnan(x[s])) throw std::invalid_argument("logit_sigma: NaN perception");
            xmax = std::max(xmax, x[s]);
        }
        // Max subtraction keeps every exponent <= 0, so nothing overflows
        // even for huge beta*x.
        double total = 0.0;
        for (int s = 0; s < n; ++s) {
            out[s] = std::exp(b * (x[s] - xmax));
            total += out[s];
        }
        for (int s = 0; s < n; ++s) out[s] /= total;
    }

  private:
    std::vector<double> betas_;
};

inline std::vector<double> logit_sigma(const LogitRule& rule, int i, const std::vector<double>& x_i) {
    return rule.sigma(i, x_i);
}

// alpha = max_i sum_{j != i} beta_j; the coupling strength that appears in
// the contraction condition 2*eta*alpha < 1.
inline double alpha(const LogitRule& rule) {
    const auto& b = rule.betas();
    if (b.size() < 2) return 0.0;
    double total = 0.0;
    for (double v : b) total += v;
    double best = 0.0;
    for (double v : b) best = std::max(best, total - v);
    return best;
}

// Lipschitz bound of x^i -> sigma^i(x^i) in the sup norm.
inline double logit_lipschitz_bound(const LogitRule& rule, int i) { return 2.0 * rule.beta(i); }

// Interiority bound xi: on the box |x^{is}| <= M every component of the
// logit choice is at least exp(-2 beta_i M) / num_strategies.
inline double interiority_bound(const LogitRule& rule, int i, double box_radius, int num_strategies) {
    if (num_strategies < 1) throw std::invalid_argument("interiority_bound: empty strategy set");
    return std::exp(-2.0 * rule.beta(i) * box_radius) / static_cast<double>(num_strategies);
}

}  // namespace gamelearn
