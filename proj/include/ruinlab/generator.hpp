#pragma once

#include "ruinlab/model.hpp"

namespace ruinlab {

struct QuadConfig {
    double tol = 1e-9;        // absolute error demanded of the jump integral
    unsigned max_depth = 15;  // adaptive refinement levels
};

// Infinitesimal generator of the surplus process applied to F at x:
//
//   L F(x) = (a x + c) F'(x) + (sigma^2/2) x^2 F''(x)
//          + lambda * ( E[F(x - xi)] - F(x) )
//
// The expectation splits into the continuous density part (Gauss-Kronrod,
// QuadratureFailure if the error estimate exceeds tol) and a point mass at
// the cap when the law has one; deterministic claims need no quadrature.
//
// DomainError when x - ess_sup(claim) is not inside F's domain, or when
// lambda > 0 and the claim law is unbounded (the integral would leave the
// domain of F).  lambda = 0 skips the jump term entirely.
double generator_apply(const TestFunction& F, const ModelParams& p, double x,
                       const QuadConfig& quad = {});

} // namespace ruinlab
