#pragma once

#include <limits>
#include <optional>
#include <string>

namespace ruinlab {

enum class ClaimKind {
    Exponential,          // mean m, support (0, inf)
    Uniform,              // support (0, hi)
    TruncatedExponential, // min(Exponential(m), cap): density on (0,cap), atom at cap
    Deterministic,        // point mass at size
};

// A claim-size law.  Laws are built from three base families (exponential,
// uniform, point mass) plus an optional cap C that turns a sample xi into
// min(xi, C).  TruncatedExponential(m, C) is exactly Exponential(m) with a
// cap, including the atom of mass exp(-C/m) sitting at C.
//
// Sampling is inverse-CDF throughout, and a capped law's quantile is computed
// as min(base_quantile(u), C).  Feeding the same uniforms to a law and to its
// capped version therefore yields samples coupled pathwise: capped == min of
// the original draw and C, bit for bit.
class ClaimDistribution {
public:
    static ClaimDistribution exponential(double mean);
    static ClaimDistribution uniform(double hi);
    static ClaimDistribution truncated_exponential(double mean, double cap);
    static ClaimDistribution deterministic(double size);

    ClaimKind kind() const;

    double mean() const { return mean_; }
    // Recorded for reporting; no operation consumes it.
    double variance() const { return var_; }
    // +inf for the uncapped exponential.
    double essential_sup() const { return ess_sup_; }
    bool bounded() const { return ess_sup_ < std::numeric_limits<double>::infinity(); }

    // Continuous density part; 0 outside the support.  The point masses are
    // reported separately via atom_mass()/atom_location().
    double density(double x) const;
    double atom_mass() const;
    double atom_location() const { return ess_sup_; }

    // Inverse CDF at u in (0,1).
    double quantile(double u) const;

    // The law of min(xi, M).
    ClaimDistribution capped(double M) const;

    std::string describe() const;

private:
    enum class Base { Exponential, Uniform, Deterministic };
    ClaimDistribution(Base base, double p0, std::optional<double> cap);
    void refresh_moments();

    Base base_;
    double p0_;                 // mean (exponential), hi (uniform), size (deterministic)
    std::optional<double> cap_; // active cap, strictly below the base support end
    double mean_ = 0, var_ = 0, ess_sup_ = 0;
};

} // namespace ruinlab
