#include "ruinlab/model.hpp"

#include <cmath>
#include <sstream>

#include "ruinlab/errors.hpp"

namespace ruinlab {

namespace {
void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

std::string fmt_regime(const char* what, double rho_value) {
    std::ostringstream os;
    os << what << " (rho = " << rho_value << ")";
    return os.str();
}
} // namespace

ModelParams::ModelParams(double a_, double sigma_, double c_, double lambda_,
                         ClaimDistribution claim_)
    : a(a_), sigma(sigma_), c(c_), lambda(lambda_), claim(std::move(claim_)) {
    require(std::isfinite(a) && a > 0, "model: a must be > 0 and finite");
    require(std::isfinite(sigma) && sigma > 0, "model: sigma must be > 0 and finite");
    require(std::isfinite(c) && c >= 0, "model: c must be >= 0 and finite");
    require(std::isfinite(lambda) && lambda >= 0, "model: lambda must be >= 0 and finite");
}

double rho(const ModelParams& p) { return 2.0 * p.a / (p.sigma * p.sigma); }

bool net_profit_condition(const ModelParams& p) { return p.c > p.lambda * p.claim.mean(); }

ClaimDistribution cap_claims(const ClaimDistribution& d, double M) { return d.capped(M); }

double default_alpha(const ModelParams& p) {
    const double r = rho(p);
    if (r >= 1.0) throw RegimeError(fmt_regime("default_alpha: requires rho < 1", r));
    return (1.0 - r) / 2.0;
}

TestFunction TestFunction::power_decay(double rho_value) {
    if (!(rho_value > 1.0))
        throw RegimeError(fmt_regime("power_decay: requires rho > 1", rho_value));
    return {Kind::PowerDecay, 1.0 - rho_value, 0.0};
}

TestFunction TestFunction::power_growth(double alpha, double rho_value) {
    if (!(rho_value < 1.0))
        throw RegimeError(fmt_regime("power_growth: requires rho < 1", rho_value));
    if (!(alpha > 0.0 && alpha < 1.0 - rho_value)) {
        std::ostringstream os;
        os << "power_growth: alpha must lie in (0, 1 - rho) = (0, " << 1.0 - rho_value
           << "), got " << alpha;
        throw RegimeError(os.str());
    }
    return {Kind::PowerGrowth, alpha, 0.0};
}

TestFunction TestFunction::loglog() {
    // ln ln x: restricted to x > e so the function is positive-slope and the
    // second derivative formula below is well behaved.
    return {Kind::LogLog, 0.0, std::exp(1.0)};
}

void TestFunction::check_domain(double x) const {
    if (!(x > domain_lo_)) {
        std::ostringstream os;
        os << "test function: x must be > " << domain_lo_ << ", got " << x;
        throw DomainError(os.str());
    }
}

double TestFunction::value(double x) const {
    check_domain(x);
    switch (kind_) {
    case Kind::PowerDecay:
    case Kind::PowerGrowth:
        return std::pow(x, exponent_);
    case Kind::LogLog:
        return std::log(std::log(x));
    }
    return 0.0;
}

double TestFunction::d1(double x) const {
    check_domain(x);
    switch (kind_) {
    case Kind::PowerDecay:
    case Kind::PowerGrowth:
        return exponent_ * std::pow(x, exponent_ - 1.0);
    case Kind::LogLog:
        return 1.0 / (x * std::log(x));
    }
    return 0.0;
}

double TestFunction::d2(double x) const {
    check_domain(x);
    switch (kind_) {
    case Kind::PowerDecay:
    case Kind::PowerGrowth:
        return exponent_ * (exponent_ - 1.0) * std::pow(x, exponent_ - 2.0);
    case Kind::LogLog: {
        const double lx = std::log(x);
        const double xlx = x * lx;
        return -(lx + 1.0) / (xlx * xlx);
    }
    }
    return 0.0;
}

double threshold_lemma_A(const ModelParams& p, double alpha) {
    const double r = rho(p);
    if (!(r < 1.0)) throw RegimeError(fmt_regime("threshold_lemma_A: requires rho < 1", r));
    if (!(alpha > 0.0 && alpha < 1.0 - r)) {
        std::ostringstream os;
        os << "threshold_lemma_A: alpha must lie in (0, 1 - rho) = (0, " << 1.0 - r
           << "), got " << alpha;
        throw RegimeError(os.str());
    }
    if (!p.claim.bounded())
        throw DomainError("threshold_lemma_A: requires a bounded claim law");
    const double M = p.claim.essential_sup();
    const double pivot = 2.0 * p.c / (p.sigma * p.sigma * (1.0 - r - alpha));
    return std::max(M, pivot);
}

std::optional<double> solve_u_tilde(const ModelParams& p) {
    // g(x) = sigma^2 x - 2c ln x, minimised at x_min = 2c/sigma^2 with
    // g(x_min) = 2c (1 - ln(2c/sigma^2)).  Roots exist iff 2c/sigma^2 >= e,
    // and the largest one lies in [x_min, inf).
    if (p.c <= 0.0) return std::nullopt; // g = sigma^2 x > 0 everywhere
    const double s2 = p.sigma * p.sigma;
    const double t = 2.0 * p.c / s2;
    const double logt = std::log(t);
    if (logt < 1.0 - 1e-12) return std::nullopt;
    if (logt <= 1.0 + 1e-12) return t; // tangency: double root at x = t ~ e
    const auto g = [&](double x) { return s2 * x - 2.0 * p.c * std::log(x); };
    double lo = t;        // g(lo) < 0 strictly here
    double hi = 2.0 * t;
    while (g(hi) <= 0.0) hi *= 2.0;
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) <= 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double threshold_lemma_B(const ModelParams& p) {
    const double r = rho(p);
    if (std::abs(r - 1.0) > 1e-12)
        throw RegimeError(fmt_regime("threshold_lemma_B: requires rho == 1", r));
    if (!p.claim.bounded())
        throw DomainError("threshold_lemma_B: requires a bounded claim law");
    const double M = p.claim.essential_sup();
    const auto root = solve_u_tilde(p);
    return std::max(M + 3.0, root.value_or(0.0));
}

ThresholdReport descent_sequence(double u_star, double M) {
    require(std::isfinite(u_star) && u_star > 0, "descent_sequence: u_star must be > 0");
    require(std::isfinite(M) && M > 0, "descent_sequence: M must be > 0");
    ThresholdReport rep;
    rep.u_star = u_star;
    const auto n = static_cast<std::size_t>(std::ceil(2.0 * u_star / M));
    rep.n_iterations = n;
    rep.descent_levels.reserve(n);
    for (std::size_t j = 1; j <= n; ++j) {
        rep.descent_levels.push_back(std::max(u_star - static_cast<double>(j) * M / 2.0, 0.0));
    }
    if (!rep.descent_levels.empty()) rep.descent_levels.back() = 0.0; // exact zero tail
    return rep;
}

} // namespace ruinlab
