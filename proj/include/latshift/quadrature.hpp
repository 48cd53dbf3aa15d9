#pragma once

#include <latshift/kernels.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

namespace latshift {

/// An integrand on [0,1)^s, with its exact integral when known (used by the
/// built-in test functions).
struct Integrand {
    Index dim = 0;
    std::function<double(const ArrayXd&)> eval;
    std::optional<double> exact;
    std::string name;
};

/// Built-in integrands with analytic integrals:
///   "const"    f = 1                              I = 1
///   "prodx"    f = prod_j x_j                     I = 2^-s
///   "prodlin"  f = prod_j (1 + c_j (x_j - 1/2))   I = 1,  c_j = 1/j
///   "quadsum"  f = sum_j x_j^2 / j                I = (1/3) sum_j 1/j
Integrand named_integrand(const std::string& name, Index dim);

/// Q = (1/n) sum_k f({k z/n + delta}).  Aborts with the offending point in
/// the message if f produces a non-finite value.
double apply_rule(const LatticeRule& rule, const RealShift& shift, const Integrand& f);

/// Randomly shifted estimate over q independent uniform shifts.
struct RandomShiftEstimate {
    double mean = 0.0;
    /// sample std / sqrt(q), with the unbiased (q-1) variance divisor;
    /// defined only for q >= 2
    std::optional<double> std_error;
    int q = 0;
    std::uint64_t seed = 0;
};

/// The seed fully determines all q shifts.  Generator: mt19937_64; doubles
/// are built as (x >> 11) * 2^-53, so runs are reproducible bit-for-bit.
RandomShiftEstimate random_shift_estimate(const LatticeRule& rule, const Integrand& f,
                                          int q, std::uint64_t seed);

}  // namespace latshift
