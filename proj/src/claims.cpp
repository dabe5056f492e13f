#include "ruinlab/claims.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ruinlab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}
} // namespace

ClaimDistribution::ClaimDistribution(Base base, double p0, std::optional<double> cap)
    : base_(base), p0_(p0), cap_(cap) {
    refresh_moments();
}

ClaimDistribution ClaimDistribution::exponential(double mean) {
    require(std::isfinite(mean) && mean > 0, "claim: exponential mean must be > 0 and finite");
    return {Base::Exponential, mean, std::nullopt};
}

ClaimDistribution ClaimDistribution::uniform(double hi) {
    require(std::isfinite(hi) && hi > 0, "claim: uniform upper endpoint must be > 0 and finite");
    return {Base::Uniform, hi, std::nullopt};
}

ClaimDistribution ClaimDistribution::truncated_exponential(double mean, double cap) {
    require(std::isfinite(mean) && mean > 0, "claim: exponential mean must be > 0 and finite");
    require(std::isfinite(cap) && cap > 0, "claim: cap must be > 0 and finite");
    return {Base::Exponential, mean, cap};
}

ClaimDistribution ClaimDistribution::deterministic(double size) {
    require(std::isfinite(size) && size > 0, "claim: deterministic size must be > 0 and finite");
    return {Base::Deterministic, size, std::nullopt};
}

void ClaimDistribution::refresh_moments() {
    switch (base_) {
    case Base::Exponential: {
        const double m = p0_;
        if (!cap_) {
            mean_ = m;
            var_ = m * m;
            ess_sup_ = kInf;
        } else {
            const double C = *cap_;
            const double q = std::exp(-C / m); // atom mass at C
            mean_ = m * (1.0 - q);
            const double ex2 = 2.0 * m * m - (2.0 * m * C + 2.0 * m * m) * q;
            var_ = ex2 - mean_ * mean_;
            ess_sup_ = C;
        }
        break;
    }
    case Base::Uniform: {
        const double hi = p0_;
        if (!cap_) {
            mean_ = hi / 2.0;
            var_ = hi * hi / 12.0;
            ess_sup_ = hi;
        } else {
            const double C = *cap_;
            mean_ = C - C * C / (2.0 * hi);
            const double ex2 = C * C * C / (3.0 * hi) + C * C * (1.0 - C / hi);
            var_ = ex2 - mean_ * mean_;
            ess_sup_ = C;
        }
        break;
    }
    case Base::Deterministic:
        mean_ = p0_;
        var_ = 0.0;
        ess_sup_ = p0_;
        break;
    }
}

ClaimKind ClaimDistribution::kind() const {
    switch (base_) {
    case Base::Exponential:
        return cap_ ? ClaimKind::TruncatedExponential : ClaimKind::Exponential;
    case Base::Uniform:
        return ClaimKind::Uniform;
    case Base::Deterministic:
        return ClaimKind::Deterministic;
    }
    return ClaimKind::Deterministic; // unreachable
}

double ClaimDistribution::density(double x) const {
    if (x <= 0.0) return 0.0;
    switch (base_) {
    case Base::Exponential: {
        const double m = p0_;
        if (cap_ && x >= *cap_) return 0.0;
        return std::exp(-x / m) / m;
    }
    case Base::Uniform: {
        const double end = cap_ ? *cap_ : p0_;
        return x < end ? 1.0 / p0_ : 0.0;
    }
    case Base::Deterministic:
        return 0.0;
    }
    return 0.0;
}

double ClaimDistribution::atom_mass() const {
    switch (base_) {
    case Base::Exponential:
        return cap_ ? std::exp(-*cap_ / p0_) : 0.0;
    case Base::Uniform:
        return cap_ ? (p0_ - *cap_) / p0_ : 0.0;
    case Base::Deterministic:
        return 1.0;
    }
    return 0.0;
}

double ClaimDistribution::quantile(double u) const {
    double q = 0.0;
    switch (base_) {
    case Base::Exponential:
        q = -p0_ * std::log1p(-u);
        break;
    case Base::Uniform:
        q = u * p0_;
        break;
    case Base::Deterministic:
        q = p0_;
        break;
    }
    // Capped law: min with the cap, never a reparametrised draw, so the same
    // uniform yields min(original sample, cap) exactly.
    if (cap_ && q > *cap_) q = *cap_;
    return q;
}

ClaimDistribution ClaimDistribution::capped(double M) const {
    require(std::isfinite(M) && M > 0, "cap_claims: M must be > 0 and finite");
    if (M >= ess_sup_) return *this; // no-op, including Deterministic(size <= M)
    if (base_ == Base::Deterministic) return deterministic(M);
    return {base_, p0_, M};
}

std::string ClaimDistribution::describe() const {
    std::ostringstream os;
    switch (kind()) {
    case ClaimKind::Exponential:
        os << "Exponential(mean=" << p0_ << ")";
        break;
    case ClaimKind::TruncatedExponential:
        os << "TruncatedExponential(mean=" << p0_ << ",cap=" << *cap_ << ")";
        break;
    case ClaimKind::Uniform:
        os << "Uniform(0," << p0_ << ")";
        if (cap_) os << " capped at " << *cap_;
        break;
    case ClaimKind::Deterministic:
        os << "Deterministic(" << p0_ << ")";
        break;
    }
    return os.str();
}

} // namespace ruinlab
