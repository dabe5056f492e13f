#pragma once

#include <optional>
#include <vector>

#include "ruinlab/claims.hpp"

namespace ruinlab {

// Surplus process parameters:
//   dX_t = (a X_t + c) dt + sigma X_t dW_t - dP_t,   X_0 = u,
// with P a compound Poisson claim process of intensity lambda and the given
// claim-size law.  a is the investment return rate, sigma the investment
// volatility, c the premium rate.
struct ModelParams {
    double a;
    double sigma;
    double c;
    double lambda;
    ClaimDistribution claim;

    ModelParams(double a_, double sigma_, double c_, double lambda_, ClaimDistribution claim_);
};

// rho = 2a / sigma^2.  rho > 1 is the decay regime, rho <= 1 the certain-ruin
// regime.
double rho(const ModelParams& p);

// Net profit condition c > lambda * E[claim] (strict).
bool net_profit_condition(const ModelParams& p);

// The law of min(claim, M); see ClaimDistribution::capped.
ClaimDistribution cap_claims(const ClaimDistribution& d, double M);

// Default growth exponent used by the rho < 1 machinery: halfway into the
// admissible interval (0, 1 - rho).
double default_alpha(const ModelParams& p);

// Test functions fed to the generator.  Evaluation below domain_lo (inclusive)
// is a DomainError.
class TestFunction {
public:
    enum class Kind {
        PowerDecay,  // x^{1-rho}, rho > 1, decreasing and convex
        PowerGrowth, // x^alpha, 0 < alpha < 1 - rho, increasing and concave
        LogLog,      // ln ln x, defined here for x > e
    };

    static TestFunction power_decay(double rho_value);
    // Needs the model's rho to validate alpha < 1 - rho.
    static TestFunction power_growth(double alpha, double rho_value);
    static TestFunction loglog();

    Kind kind() const { return kind_; }
    double domain_lo() const { return domain_lo_; }
    // 1-rho for PowerDecay, alpha for PowerGrowth, unused for LogLog.
    double exponent() const { return exponent_; }

    double value(double x) const;
    double d1(double x) const;
    double d2(double x) const;

private:
    TestFunction(Kind k, double exponent, double domain_lo)
        : kind_(k), exponent_(exponent), domain_lo_(domain_lo) {}
    void check_domain(double x) const;

    Kind kind_;
    double exponent_;
    double domain_lo_;
};

// Thresholds above which the verification arguments run, plus the descent
// ladder used by the certain-ruin induction.
struct ThresholdReport {
    double u_star = 0.0;
    std::optional<double> alpha_used;
    std::optional<double> u_tilde;          // empty when the root does not exist
    std::vector<double> descent_levels;     // K_j, strictly decreasing, ends at 0
    std::size_t n_iterations = 0;           // ceil(2 u_star / M)
};

// rho < 1 threshold: max(M, 2c / (sigma^2 (1 - rho - alpha))).
// RegimeError unless rho < 1 and 0 < alpha < 1 - rho; claims must be bounded.
double threshold_lemma_A(const ModelParams& p, double alpha);

// Largest root of sigma^2 x = 2c ln x, or nullopt when the curves never meet.
// Bisection to absolute tolerance 1e-10.
std::optional<double> solve_u_tilde(const ModelParams& p);

// rho = 1 threshold: max(M + 3, u_tilde or 0).  RegimeError unless rho == 1
// to relative tolerance 1e-12; claims must be bounded.
double threshold_lemma_B(const ModelParams& p);

// Descent ladder K_j = max(u_star - j*M/2, 0), j = 1..ceil(2 u_star / M).
ThresholdReport descent_sequence(double u_star, double M);

} // namespace ruinlab
