#pragma once

#include <latshift/kernels.hpp>
#include <latshift/weights.hpp>

namespace latshift {

/// Options shared by the error functionals.
struct WceOptions {
    /// Compensated (Kahan) accumulation of the pair sum.  Off by default;
    /// plain double accumulation keeps relative rounding well below 1e-10
    /// for the supported point counts.
    bool kahan = false;
};

/// Squared worst-case error of the shifted rule in the weighted unanchored
/// Sobolev space with product weights:
///   (1/n^2) sum_{k,k'} [ prod_j (1 + gamma_j ((1/2) B2({(k-k') z_j/n})
///                                 + A_{k,k',z_j}(delta_j))) - 1 ].
/// Exploits (k,k') symmetry: upper triangle twice plus the diagonal.
/// Cost O(s n^2).
double squared_wce(const LatticeRule& rule, const RealShift& shift,
                   const ProductWeights& w, const WceOptions& opts = {});

/// Shift-averaged squared worst-case error,
///   (1/n) sum_k [ prod_j (1 + gamma_j B2({k z_j/n})) - 1 ].
/// Cost O(s n).
double shift_avg_sq_wce(const LatticeRule& rule, const ProductWeights& w);

/// Squared worst-case error averaged over all half-shifts in S_n^s, without
/// enumerating the grid.  The average of the pair kernel over S_n has the
/// closed form
///   (1/n) sum_m A_{k,k',z}(mu_m) = (1/2) B2({(k-k') z/n}) - 1/(12 n^2)
/// (the composite midpoint rule is exact on the piecewise-linear parts and
/// the piecewise-quadratic part has constant second derivative), so each
/// pair term depends on (k-k') mod n only and the double sum collapses:
///   (1/n) sum_d [ prod_j (1 + gamma_j (B2({d z_j/n}) - 1/(12 n^2))) - 1 ].
/// Cost O(s n).
double half_shift_avg_sq_wce(const LatticeRule& rule, const ProductWeights& w);

/// kappa = sqrt(squared_wce / shift_avg_sq_wce).  A nonpositive denominator
/// is flagged as degenerate (cannot occur for positive weights and n >= 2).
double kappa(const LatticeRule& rule, const RealShift& shift, const ProductWeights& w);

/// kappa with the zero shift.
double kappa_zero(const LatticeRule& rule, const ProductWeights& w);

/// Euler totient, by trial-division factorization.
std::int64_t euler_phi(std::int64_t n);

/// Riemann zeta for real x > 1: truncated series plus Euler-Maclaurin tail,
/// absolute error <= 1e-12.
double riemann_zeta(double x, std::int64_t terms = 1'000'000);

/// Quality bound for the CBC-constructed generating vector: for
/// lambda in (1/2, 1],
///   ( (1/phi(n)) sum_{u != 0} gamma_u^lambda (2 zeta(2 lambda) /
///     (2 pi^2)^lambda)^{|u|} )^{1/(2 lambda)},
/// with the subset sum in product form prod_j (1 + gamma_j^lambda t) - 1.
/// Values of lambda so close to 1/2 that zeta(2 lambda) is not finite are
/// reported as unstable.
double theoretical_bound(std::int64_t n, const ProductWeights& w, Index s, double lambda);

/// Bound on |shift-averaged - half-shift-averaged| squared error:
///   (1/(4 n^2)) sum_{u != 0} gamma_u (1/3)^{|u|} |u|,
/// computed for product weights via the derivative-of-product identity
///   sum_u gamma_u t^{|u|} |u| = (sum_i gamma_i t/(1+gamma_i t))
///                               * prod_j (1+gamma_j t),  t = 1/3.
double theorem1_bound(std::int64_t n, const ProductWeights& w, Index s);

}  // namespace latshift
