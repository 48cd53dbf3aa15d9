#pragma once

#include <latshift/wce.hpp>

namespace latshift {

struct CbcOptions {
    /// Search all of {1,...,n-1} instead of only the candidates coprime to n.
    bool all_candidates = false;
    /// Worker threads for the per-stage candidate scans.  Results are
    /// independent of the worker count: every candidate value is produced by
    /// a fixed per-candidate computation and the argmin scan is serial.
    int jobs = 1;
    /// Largest n admitted by the O(n^2)-memory pair cache used in the shift
    /// search (the cache holds n^2 doubles).
    std::int64_t max_pair_n = 4096;
};

/// Result of the component-by-component construction of the generating
/// vector: z*_1 = 1, and each later component minimizes the shift-averaged
/// squared worst-case error of the prefix rule.
struct CbcVectorResult {
    std::int64_t n = 0;
    IndexVector z;
    /// shift-averaged squared error of each prefix rule (z*_1..z*_s)
    ArrayXd shift_avg_sq;
    bool coprime_candidates = true;
};

/// Classical CBC for the generating vector.  Ties break to the smallest
/// candidate.  Cost O(s_max n |candidates|) via per-point running products.
CbcVectorResult cbc_vector(std::int64_t n, Index s_max, const ProductWeights& w,
                           const CbcOptions& opts = {});

/// Result of the CBC-for-shift construction over half-shifts.
struct CbcShiftResult {
    std::int64_t n = 0;
    IndexVector z;       ///< generating vector used
    IndexVector m_star;  ///< half-shift indices, delta*_s = (2 m*_s - 1)/(2n)
    ArrayXd delta;       ///< the shift components themselves
    ArrayXd sq_wce;          ///< e^2 of the prefix rule at (z, delta*)
    ArrayXd shift_avg_sq;    ///< shift-averaged squared error of the prefix rule
    ArrayXd kappa;           ///< sqrt(sq_wce / shift_avg_sq), per dimension
    ArrayXd kappa0;          ///< same ratio with the zero shift
};

/// CBC for the shift: with z fixed, chooses delta*_s from S_n one dimension
/// at a time, minimizing the squared worst-case error of the prefix rule;
/// ties break to the smallest index m.  Records kappa and kappa0 for every
/// dimension.  Cost O(s_max n^3) with an O(n^2) pair-product cache; the
/// per-stage candidate scan is organized as dense matrix products.
CbcShiftResult cbc_shift(std::int64_t n, const IndexVector& z, Index s_max,
                         const ProductWeights& w, const CbcOptions& opts = {});

/// kappa0(n, s) = e(z, 0) / e^sh(z) for each prefix dimension s = 1..s_max.
/// Cost O(s_max n^2) with its own pair-product cache.
ArrayXd zero_shift_kappas(std::int64_t n, const IndexVector& z, Index s_max,
                          const ProductWeights& w, const CbcOptions& opts = {});

}  // namespace latshift
