#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>

namespace latshift {

using Eigen::ArrayXd;
using Eigen::ArrayXXd;
using Eigen::Index;

/// Integer vector type used for generating vectors and half-shift indices.
/// 64-bit so that products k*z stay exact for any supported point count.
using IndexVector = Eigen::Array<std::int64_t, Eigen::Dynamic, 1>;

/// Fractional part x - floor(x), always in [0,1).  A result that rounds up
/// to exactly 1.0 is clamped back to 0.0 so the half-open contract holds.
template <typename Scalar>
inline Scalar frac_part(Scalar x) {
    if (!std::isfinite(x))
        throw std::invalid_argument("frac_part: input must be finite");
    Scalar f = x - std::floor(x);
    return f >= Scalar(1) ? Scalar(0) : f;
}

/// Second Bernoulli polynomial B2(x) = x^2 - x + 1/6 on [0,1].
/// Satisfies |B2(x)| <= 1/6 and B2(x) = B2(1-x).
template <typename Scalar>
inline Scalar bernoulli2(Scalar x) {
    if (!(x >= Scalar(0) && x <= Scalar(1)))
        throw std::invalid_argument("bernoulli2: argument must lie in [0,1]");
    return (x - Scalar(1)) * x + Scalar(1) / Scalar(6);
}

/// Rank-1 lattice rule: point count n and generating vector z with
/// components in {1,...,n-1}.  The rule's points are {k z / n}, k = 1..n.
struct LatticeRule {
    std::int64_t n = 0;
    IndexVector z;

    LatticeRule(std::int64_t n_, IndexVector z_) : n(n_), z(std::move(z_)) {
        if (n < 2) throw std::invalid_argument("LatticeRule: n must be >= 2");
        if (z.size() < 1) throw std::invalid_argument("LatticeRule: dimension must be >= 1");
        for (Index j = 0; j < z.size(); ++j)
            if (z[j] < 1 || z[j] > n - 1)
                throw std::invalid_argument("LatticeRule: z components must lie in {1,...,n-1}");
    }

    Index dim() const { return z.size(); }
};

/// General shift vector with components in [0,1).
struct RealShift {
    ArrayXd delta;

    explicit RealShift(ArrayXd d) : delta(std::move(d)) {
        for (Index j = 0; j < delta.size(); ++j)
            if (!(delta[j] >= 0.0 && delta[j] < 1.0))
                throw std::invalid_argument("RealShift: components must lie in [0,1)");
    }

    static RealShift zero(Index s) { return RealShift(ArrayXd::Zero(s)); }

    Index dim() const { return delta.size(); }
};

/// Half-shift: every component is an odd multiple of 1/(2n), encoded by
/// indices m in {1,...,n} with delta_j = (2 m_j - 1) / (2 n).
struct HalfShift {
    std::int64_t n = 0;
    IndexVector m;

    HalfShift(std::int64_t n_, IndexVector m_) : n(n_), m(std::move(m_)) {
        if (n < 1) throw std::invalid_argument("HalfShift: n must be >= 1");
        for (Index j = 0; j < m.size(); ++j)
            if (m[j] < 1 || m[j] > n)
                throw std::invalid_argument("HalfShift: indices must lie in {1,...,n}");
    }

    Index dim() const { return m.size(); }

    ArrayXd delta() const {
        ArrayXd d(m.size());
        for (Index j = 0; j < m.size(); ++j)
            d[j] = static_cast<double>(2 * m[j] - 1) / static_cast<double>(2 * n);
        return d;
    }

    RealShift as_real() const { return RealShift(delta()); }
};

/// Shift-dependent pair kernel
///   A_{k,k',z}(delta) = ({k z/n + delta} - 1/2) ({k' z/n + delta} - 1/2),
/// symmetric in (k,k'), with values in [-1/4, 1/4].
inline double pair_kernel(std::int64_t k, std::int64_t kp, std::int64_t z,
                          std::int64_t n, double delta) {
    if (n < 2) throw std::invalid_argument("pair_kernel: n must be >= 2");
    if (k < 1 || k > n || kp < 1 || kp > n)
        throw std::invalid_argument("pair_kernel: k, k' must lie in {1,...,n}");
    if (z < 1 || z > n - 1)
        throw std::invalid_argument("pair_kernel: z must lie in {1,...,n-1}");
    if (!(delta >= 0.0 && delta < 1.0))
        throw std::invalid_argument("pair_kernel: delta must lie in [0,1)");
    const double nd = static_cast<double>(n);
    const double a = frac_part(static_cast<double>((k * z) % n) / nd + delta);
    const double b = frac_part(static_cast<double>((kp * z) % n) / nd + delta);
    return (a - 0.5) * (b - 0.5);
}

/// All n points of the shifted rule, {k z/n + delta}, k = 1..n, in index
/// order.  Row k-1 holds point k; column j holds coordinate j.
inline ArrayXXd lattice_points(const LatticeRule& rule, const RealShift& shift) {
    if (shift.dim() != rule.dim())
        throw std::invalid_argument("lattice_points: shift dimension mismatch");
    const Index s = rule.dim();
    const double nd = static_cast<double>(rule.n);
    ArrayXXd pts(rule.n, s);
    for (Index j = 0; j < s; ++j) {
        const std::int64_t zj = rule.z[j];
        for (std::int64_t k = 1; k <= rule.n; ++k)
            pts(k - 1, j) = frac_part(static_cast<double>((k * zj) % rule.n) / nd + shift.delta[j]);
    }
    return pts;
}

}  // namespace latshift
