#include <latshift/wce.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace latshift {

namespace {

void check_dims(const LatticeRule& rule, Index shift_dim, const ProductWeights& w) {
    if (shift_dim != rule.dim())
        throw std::invalid_argument("wce: shift dimension does not match rule");
    if (w.size() < rule.dim())
        throw std::invalid_argument("wce: not enough weights for rule dimension");
}

/// B2({d z/n}) for d = 0..n-1, indexed by the difference (k-k') mod n.
ArrayXd b2_difference_table(std::int64_t n, std::int64_t z) {
    ArrayXd t(n);
    const double nd = double(n);
    for (std::int64_t d = 0; d < n; ++d)
        t[d] = bernoulli2(double((d * z) % n) / nd);
    return t;
}

struct KahanSum {
    double s = 0.0, c = 0.0;
    void add(double x) {
        double y = x - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

/// prod_j (1 + a_j) - 1 without the cancellation of forming the product
/// first: r <- r + a + r a.  Exact for one factor, stable for tiny weights.
struct ProductMinusOne {
    double r = 0.0;
    void mul(double a) { r += a + r * a; }
};

}  // namespace

double squared_wce(const LatticeRule& rule, const RealShift& shift,
                   const ProductWeights& w, const WceOptions& opts) {
    check_dims(rule, shift.dim(), w);
    const std::int64_t n = rule.n;
    const Index s = rule.dim();

    // per-dimension tables: half the B2 difference kernel, and point offsets
    std::vector<ArrayXd> halfb2(static_cast<std::size_t>(s));
    ArrayXXd g(n, s);
    for (Index j = 0; j < s; ++j) {
        halfb2[std::size_t(j)] = 0.5 * b2_difference_table(n, rule.z[j]);
        const std::int64_t zj = rule.z[j];
        for (std::int64_t k = 1; k <= n; ++k)
            g(k - 1, j) = frac_part(double((k * zj) % n) / double(n) + shift.delta[j]) - 0.5;
    }

    KahanSum ks;
    double plain = 0.0;
    for (std::int64_t k = 0; k < n; ++k) {
        for (std::int64_t kp = k; kp < n; ++kp) {
            ProductMinusOne prod;
            const std::int64_t d = kp - k;
            for (Index j = 0; j < s; ++j)
                prod.mul(w[j] * (halfb2[std::size_t(j)][d] + g(k, j) * g(kp, j)));
            const double term = (kp == k ? 1.0 : 2.0) * prod.r;
            if (opts.kahan)
                ks.add(term);
            else
                plain += term;
        }
    }
    const double total = opts.kahan ? ks.s : plain;
    return total / (double(n) * double(n));
}

double shift_avg_sq_wce(const LatticeRule& rule, const ProductWeights& w) {
    check_dims(rule, rule.dim(), w);
    const std::int64_t n = rule.n;
    const Index s = rule.dim();
    std::vector<ArrayXd> b2(static_cast<std::size_t>(s));
    for (Index j = 0; j < s; ++j) b2[std::size_t(j)] = b2_difference_table(n, rule.z[j]);

    double acc = 0.0;
    for (std::int64_t k = 1; k <= n; ++k) {
        ProductMinusOne prod;
        for (Index j = 0; j < s; ++j) prod.mul(w[j] * b2[std::size_t(j)][k % n]);
        acc += prod.r;
    }
    return acc / double(n);
}

double half_shift_avg_sq_wce(const LatticeRule& rule, const ProductWeights& w) {
    check_dims(rule, rule.dim(), w);
    const std::int64_t n = rule.n;
    const Index s = rule.dim();
    const double corr = 1.0 / (12.0 * double(n) * double(n));
    std::vector<ArrayXd> b2(static_cast<std::size_t>(s));
    for (Index j = 0; j < s; ++j) b2[std::size_t(j)] = b2_difference_table(n, rule.z[j]);

    double acc = 0.0;
    for (std::int64_t d = 0; d < n; ++d) {
        ProductMinusOne prod;
        for (Index j = 0; j < s; ++j) prod.mul(w[j] * (b2[std::size_t(j)][d] - corr));
        acc += prod.r;
    }
    return acc / double(n);
}

double kappa(const LatticeRule& rule, const RealShift& shift, const ProductWeights& w) {
    const double denom = shift_avg_sq_wce(rule, w);
    if (!(denom > 0.0))
        throw std::runtime_error("kappa: degenerate shift-averaged error (nonpositive)");
    return std::sqrt(squared_wce(rule, shift, w) / denom);
}

double kappa_zero(const LatticeRule& rule, const ProductWeights& w) {
    return kappa(rule, RealShift::zero(rule.dim()), w);
}

std::int64_t euler_phi(std::int64_t n) {
    if (n < 1) throw std::invalid_argument("euler_phi: n must be >= 1");
    std::int64_t result = n, m = n;
    for (std::int64_t p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            result -= result / p;
            while (m % p == 0) m /= p;
        }
    }
    if (m > 1) result -= result / m;
    return result;
}

double riemann_zeta(double x, std::int64_t terms) {
    if (!(x > 1.0)) throw std::invalid_argument("riemann_zeta: requires x > 1");
    const double M = double(terms);
    double sum = 0.0;
    for (std::int64_t k = terms - 1; k >= 1; --k)  // small terms first
        sum += std::pow(double(k), -x);
    // Euler-Maclaurin tail starting at M
    const double Mx = std::pow(M, -x);
    double tail = std::pow(M, 1.0 - x) / (x - 1.0) + 0.5 * Mx + x * Mx / (12.0 * M);
    tail -= x * (x + 1.0) * (x + 2.0) * Mx / (720.0 * M * M * M);
    return sum + tail;
}

double theoretical_bound(std::int64_t n, const ProductWeights& w, Index s, double lambda) {
    if (n < 2) throw std::invalid_argument("theoretical_bound: n must be >= 2");
    if (!(lambda > 0.5 && lambda <= 1.0))
        throw std::invalid_argument("theoretical_bound: lambda must lie in (1/2, 1]");
    if (w.size() < s) throw std::invalid_argument("theoretical_bound: not enough weights");
    const double zeta2l = riemann_zeta(2.0 * lambda);
    const double t = 2.0 * zeta2l / std::pow(2.0 * std::numbers::pi * std::numbers::pi, lambda);
    if (!std::isfinite(t))
        throw std::runtime_error("theoretical_bound: unstable, zeta(2 lambda) overflows");
    ProductMinusOne prod;
    for (Index j = 0; j < s; ++j) prod.mul(std::pow(w[j], lambda) * t);
    const double inner = prod.r / double(euler_phi(n));
    return std::pow(inner, 1.0 / (2.0 * lambda));
}

double theorem1_bound(std::int64_t n, const ProductWeights& w, Index s) {
    if (n < 2) throw std::invalid_argument("theorem1_bound: n must be >= 2");
    if (w.size() < s) throw std::invalid_argument("theorem1_bound: not enough weights");
    double prod = 1.0, ratio_sum = 0.0;
    for (Index j = 0; j < s; ++j) {
        const double gj3 = w[j] / 3.0;
        prod *= 1.0 + gj3;
        ratio_sum += gj3 / (1.0 + gj3);
    }
    return ratio_sum * prod / (4.0 * double(n) * double(n));
}

}  // namespace latshift
