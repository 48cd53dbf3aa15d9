#include <latshift/cbc.hpp>

#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <vector>

namespace latshift {

namespace {

ArrayXd b2_table(std::int64_t n) {
    ArrayXd t(n);
    for (std::int64_t r = 0; r < n; ++r) t[r] = bernoulli2(double(r) / double(n));
    return t;
}

std::vector<std::int64_t> candidate_set(std::int64_t n, bool all) {
    std::vector<std::int64_t> c;
    c.reserve(std::size_t(n - 1));
    for (std::int64_t z = 1; z < n; ++z)
        if (all || std::gcd(z, n) == 1) c.push_back(z);
    return c;
}

void run_partitioned(int jobs, Index count, const std::function<void(Index, Index)>& body) {
    if (jobs <= 1 || count < 2) {
        body(0, count);
        return;
    }
    const int nt = int(std::min<Index>(jobs, count));
    std::vector<std::thread> pool;
    pool.reserve(std::size_t(nt));
    const Index chunk = (count + nt - 1) / nt;
    for (int t = 0; t < nt; ++t) {
        const Index lo = Index(t) * chunk;
        const Index hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(body, lo, hi);
    }
    for (auto& th : pool) th.join();
}

// strict-less scan; first (smallest-index) minimum wins
Index argmin_first(const ArrayXd& v) {
    Index best = 0;
    for (Index i = 1; i < v.size(); ++i)
        if (v[i] < v[best]) best = i;
    return best;
}

}  // namespace

CbcVectorResult cbc_vector(std::int64_t n, Index s_max, const ProductWeights& w,
                           const CbcOptions& opts) {
    if (n < 2) throw std::invalid_argument("cbc_vector: n must be >= 2");
    if (s_max < 1) throw std::invalid_argument("cbc_vector: s_max must be >= 1");
    if (w.size() < s_max) throw std::invalid_argument("cbc_vector: not enough weights");

    const ArrayXd b2 = b2_table(n);
    const auto cands = candidate_set(n, opts.all_candidates);
    if (cands.empty()) throw std::runtime_error("cbc_vector: empty candidate set");

    CbcVectorResult res;
    res.n = n;
    res.z.resize(s_max);
    res.shift_avg_sq.resize(s_max);
    res.coprime_candidates = !opts.all_candidates;

    // running per-point products over the fixed dimensions, stored as their
    // offset from one so the candidate objectives never cancel against n
    ArrayXd q = ArrayXd::Zero(n);
    for (Index dim = 0; dim < s_max; ++dim) {
        const double g = w[dim];
        std::int64_t zstar = 1;
        if (dim > 0) {
            ArrayXd vals(Index(cands.size()));
            run_partitioned(opts.jobs, Index(cands.size()), [&](Index lo, Index hi) {
                for (Index c = lo; c < hi; ++c) {
                    const std::int64_t z = cands[std::size_t(c)];
                    double acc = 0.0;
                    for (std::int64_t k = 1; k <= n; ++k) {
                        const double a = g * b2[(k * z) % n];
                        acc += q[k - 1] + a + q[k - 1] * a;
                    }
                    vals[c] = acc / double(n);
                }
            });
            zstar = cands[std::size_t(argmin_first(vals))];
        }
        res.z[dim] = zstar;
        for (std::int64_t k = 1; k <= n; ++k) {
            const double a = g * b2[(k * zstar) % n];
            q[k - 1] += a + q[k - 1] * a;
        }
        res.shift_avg_sq[dim] = q.sum() / double(n);
    }
    return res;
}

namespace {

/// Pair-product cache for the shift search.  The running per-pair products
///   P[k,k'] = prod_{j <= fixed dims} (1 + gamma_j (c_j[k,k'] + g_j[k] g_j[k']))
/// are stored as their offset from one, Q = P - 1, so that the n^2-term
/// sums never form totals of order n^2 (summing P directly and subtracting
/// n^2 loses four to five digits at n = 2048).
class PairKernelCache {
public:
    PairKernelCache(std::int64_t n, std::int64_t max_n) : n_(n) {
        if (n > max_n)
            throw std::runtime_error("cbc_shift: n exceeds the configured pair-cache ceiling (" +
                                     std::to_string(max_n) + ")");
        Q_ = Eigen::MatrixXd::Zero(n, n);
    }

    /// loads the difference kernel (1/2) B2({d z/n}) for the next dimension
    void set_dimension(std::int64_t z, const ArrayXd& b2) {
        halfc_.resize(n_);
        for (std::int64_t d = 0; d < n_; ++d) halfc_[d] = 0.5 * b2[(d * z) % n_];
    }

    /// sum over all pairs of (1 + Q)(1 + g c) - 1 = Q + g c + g Q c; the
    /// shift-independent part of the stage objective
    double base_sum(double g) const {
        double acc = 0.0;
        for (Index k = 0; k < n_; ++k) {
            const auto row = Q_.row(k).transpose().array();
            // d = (k - k') mod n splits each row into two contiguous runs
            const auto c_lo = halfc_.head(k + 1).reverse();
            acc += (row.head(k + 1) + g * c_lo * (1.0 + row.head(k + 1))).sum();
            if (k + 1 < n_) {
                const auto c_hi = halfc_.tail(n_ - k - 1).reverse();
                acc += (row.tail(n_ - k - 1) + g * c_hi * (1.0 + row.tail(n_ - k - 1))).sum();
            }
        }
        return acc;
    }

    /// quadratic forms g_m' P g_m = (sum g)^2 + g_m' Q g_m for a block of
    /// candidate offset vectors
    Eigen::VectorXd quad_forms(const Eigen::MatrixXd& G) const {
        Eigen::MatrixXd W;
        W.noalias() = Q_ * G;
        Eigen::VectorXd S(G.cols());
        for (Index c = 0; c < G.cols(); ++c) {
            const double colsum = G.col(c).sum();
            S[c] = colsum * colsum + G.col(c).dot(W.col(c));
        }
        return S;
    }

    /// folds the accepted dimension into the cache:
    /// Q' = Q + g tau + g Q tau with tau = c + g_k g_k'
    void accept(double g, const ArrayXd& gk) {
        for (Index k = 0; k < n_; ++k) {
            auto row = Q_.row(k).transpose().array();
            {
                const auto tau = g * (halfc_.head(k + 1).reverse() + gk[k] * gk.head(k + 1));
                row.head(k + 1) += tau * (1.0 + row.head(k + 1));
            }
            if (k + 1 < n_) {
                const auto tau =
                    g * (halfc_.tail(n_ - k - 1).reverse() + gk[k] * gk.tail(n_ - k - 1));
                row.tail(n_ - k - 1) += tau * (1.0 + row.tail(n_ - k - 1));
            }
        }
    }

    /// accept() and return the new sum of all Q entries in one pass
    double accept_and_sum(double g, const ArrayXd& gk) {
        accept(g, gk);
        return Q_.sum();
    }

private:
    std::int64_t n_;
    Eigen::MatrixXd Q_;
    ArrayXd halfc_;
};

// fixed so results do not depend on the worker count
constexpr Index kCandidateBlock = 256;

}  // namespace

CbcShiftResult cbc_shift(std::int64_t n, const IndexVector& z, Index s_max,
                         const ProductWeights& w, const CbcOptions& opts) {
    if (n < 2) throw std::invalid_argument("cbc_shift: n must be >= 2");
    if (s_max < 1) throw std::invalid_argument("cbc_shift: s_max must be >= 1");
    if (z.size() < s_max)
        throw std::invalid_argument("cbc_shift: generating vector shorter than s_max");
    if (w.size() < s_max) throw std::invalid_argument("cbc_shift: not enough weights");
    for (Index j = 0; j < s_max; ++j)
        if (z[j] < 1 || z[j] > n - 1)
            throw std::invalid_argument("cbc_shift: z components must lie in {1,...,n-1}");

    const ArrayXd b2 = b2_table(n);

    CbcShiftResult res;
    res.n = n;
    res.z = z.head(s_max);
    res.m_star.resize(s_max);
    res.delta.resize(s_max);
    res.sq_wce.resize(s_max);
    res.shift_avg_sq.resize(s_max);
    res.kappa.resize(s_max);
    res.kappa0.resize(s_max);

    // candidate offsets: column m-1 holds {x_k + mu_m} - 1/2 for the stage's
    // point values x_k; all entries are exact odd multiples of 1/(2n)
    ArrayXd mu(n);
    for (std::int64_t m = 1; m <= n; ++m) mu[m - 1] = double(2 * m - 1) / double(2 * n);

    {
        PairKernelCache cache(n, opts.max_pair_n);
        ArrayXd psh = ArrayXd::Ones(n);  // running products for the shift-averaged error

        for (Index dim = 0; dim < s_max; ++dim) {
            const double g = w[dim];
            const std::int64_t zj = z[dim];
            cache.set_dimension(zj, b2);

            ArrayXd x(n);
            for (std::int64_t k = 1; k <= n; ++k)
                x[k - 1] = double((k * zj) % n) / double(n);

            const double base = cache.base_sum(g);

            // stage objective per candidate, via fixed-width blocks of
            // quadratic forms so results are block-layout deterministic
            ArrayXd e2(n);
            const Index nblocks = (n + kCandidateBlock - 1) / kCandidateBlock;
            run_partitioned(opts.jobs, nblocks, [&](Index blo, Index bhi) {
                for (Index b = blo; b < bhi; ++b) {
                    const Index m0 = b * kCandidateBlock;
                    const Index cols = std::min<Index>(kCandidateBlock, n - m0);
                    Eigen::MatrixXd G(n, cols);
                    for (Index c = 0; c < cols; ++c)
                        for (Index k = 0; k < n; ++k) {
                            const double t = x[k] + mu[m0 + c];
                            G(k, c) = (t < 1.0 ? t : t - 1.0) - 0.5;
                        }
                    const Eigen::VectorXd S = cache.quad_forms(G);
                    for (Index c = 0; c < cols; ++c)
                        e2[m0 + c] = (base + g * S[c]) / (double(n) * double(n));
                }
            });

            const Index mbest = argmin_first(e2);
            res.m_star[dim] = mbest + 1;
            res.delta[dim] = mu[mbest];
            res.sq_wce[dim] = e2[mbest];

            ArrayXd gk(n);
            for (Index k = 0; k < n; ++k) {
                const double t = x[k] + mu[mbest];
                gk[k] = (t < 1.0 ? t : t - 1.0) - 0.5;
            }
            cache.accept(g, gk);

            for (std::int64_t k = 1; k <= n; ++k)
                psh[k - 1] *= 1.0 + g * b2[(k * zj) % n];
            res.shift_avg_sq[dim] = (psh.sum() - double(n)) / double(n);
            res.kappa[dim] = std::sqrt(res.sq_wce[dim] / res.shift_avg_sq[dim]);
        }
    }  // release the search cache before the zero-shift pass

    res.kappa0 = zero_shift_kappas(n, z, s_max, w, opts);
    return res;
}

ArrayXd zero_shift_kappas(std::int64_t n, const IndexVector& z, Index s_max,
                          const ProductWeights& w, const CbcOptions& opts) {
    if (n < 2) throw std::invalid_argument("zero_shift_kappas: n must be >= 2");
    if (z.size() < s_max)
        throw std::invalid_argument("zero_shift_kappas: generating vector shorter than s_max");
    if (w.size() < s_max) throw std::invalid_argument("zero_shift_kappas: not enough weights");

    const ArrayXd b2 = b2_table(n);
    PairKernelCache cache(n, opts.max_pair_n);
    ArrayXd psh = ArrayXd::Ones(n);
    ArrayXd kappas(s_max);

    for (Index dim = 0; dim < s_max; ++dim) {
        const double g = w[dim];
        const std::int64_t zj = z[dim];
        cache.set_dimension(zj, b2);

        ArrayXd g0(n);
        for (std::int64_t k = 1; k <= n; ++k)
            g0[k - 1] = double((k * zj) % n) / double(n) - 0.5;

        const double e2 = cache.accept_and_sum(g, g0) / (double(n) * double(n));

        for (std::int64_t k = 1; k <= n; ++k)
            psh[k - 1] *= 1.0 + g * b2[(k * zj) % n];
        const double esh2 = (psh.sum() - double(n)) / double(n);
        kappas[dim] = std::sqrt(e2 / esh2);
    }
    return kappas;
}

}  // namespace latshift
