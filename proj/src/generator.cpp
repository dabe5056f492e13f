#include "ruinlab/generator.hpp"

#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ruinlab/errors.hpp"

namespace ruinlab {

double generator_apply(const TestFunction& F, const ModelParams& p, double x,
                       const QuadConfig& quad) {
    const double fx = F.value(x); // also validates x itself
    double out = (p.a * x + p.c) * F.d1(x) + 0.5 * p.sigma * p.sigma * x * x * F.d2(x);

    if (p.lambda == 0.0) return out;

    if (!p.claim.bounded())
        throw DomainError("generator: jump term needs a bounded claim law (or lambda = 0)");
    const double M = p.claim.essential_sup();
    if (!(x - M > F.domain_lo())) {
        std::ostringstream os;
        os << "generator: x - ess_sup = " << x - M << " must exceed the test function's domain edge "
           << F.domain_lo();
        throw DomainError(os.str());
    }

    double jump = 0.0;
    if (p.claim.kind() == ClaimKind::Deterministic) {
        jump = F.value(x - M) - fx;
    } else {
        const auto integrand = [&](double y) { return (F.value(x - y) - fx) * p.claim.density(y); };
        double err = 0.0;
        const double integral = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
            integrand, 0.0, M, quad.max_depth, quad.tol, &err);
        if (!(err <= quad.tol)) {
            std::ostringstream os;
            os << "generator: jump integral error estimate " << err << " exceeds " << quad.tol;
            throw QuadratureFailure(os.str());
        }
        jump = integral;
        const double atom = p.claim.atom_mass();
        if (atom > 0.0) jump += atom * (F.value(x - p.claim.atom_location()) - fx);
    }
    return out + p.lambda * jump;
}

} // namespace ruinlab
