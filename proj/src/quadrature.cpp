#include <latshift/quadrature.hpp>

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace latshift {

Integrand named_integrand(const std::string& name, Index dim) {
    if (dim < 1) throw std::invalid_argument("named_integrand: dimension must be >= 1");
    Integrand f;
    f.dim = dim;
    f.name = name;
    if (name == "const") {
        f.eval = [](const ArrayXd&) { return 1.0; };
        f.exact = 1.0;
    } else if (name == "prodx") {
        f.eval = [](const ArrayXd& x) { return x.prod(); };
        f.exact = std::pow(0.5, double(dim));
    } else if (name == "prodlin") {
        f.eval = [dim](const ArrayXd& x) {
            double p = 1.0;
            for (Index j = 0; j < dim; ++j) p *= 1.0 + (x[j] - 0.5) / double(j + 1);
            return p;
        };
        f.exact = 1.0;
    } else if (name == "quadsum") {
        f.eval = [dim](const ArrayXd& x) {
            double s = 0.0;
            for (Index j = 0; j < dim; ++j) s += x[j] * x[j] / double(j + 1);
            return s;
        };
        double I = 0.0;
        for (Index j = 0; j < dim; ++j) I += 1.0 / (3.0 * double(j + 1));
        f.exact = I;
    } else {
        throw std::invalid_argument("named_integrand: unknown integrand '" + name + "'");
    }
    return f;
}

double apply_rule(const LatticeRule& rule, const RealShift& shift, const Integrand& f) {
    if (f.dim != rule.dim())
        throw std::invalid_argument("apply_rule: integrand dimension does not match rule");
    if (shift.dim() != rule.dim())
        throw std::invalid_argument("apply_rule: shift dimension does not match rule");
    const Index s = rule.dim();
    const double nd = double(rule.n);
    ArrayXd x(s);
    double acc = 0.0;
    for (std::int64_t k = 1; k <= rule.n; ++k) {
        for (Index j = 0; j < s; ++j)
            x[j] = frac_part(double((k * rule.z[j]) % rule.n) / nd + shift.delta[j]);
        const double v = f.eval(x);
        if (!std::isfinite(v)) {
            std::ostringstream msg;
            msg << "apply_rule: integrand '" << f.name << "' returned a non-finite value at (";
            for (Index j = 0; j < s; ++j) msg << (j ? ", " : "") << x[j];
            msg << ")";
            throw std::runtime_error(msg.str());
        }
        acc += v;
    }
    return acc / nd;
}

RandomShiftEstimate random_shift_estimate(const LatticeRule& rule, const Integrand& f,
                                          int q, std::uint64_t seed) {
    if (q < 1) throw std::invalid_argument("random_shift_estimate: q must be >= 1");
    std::mt19937_64 rng(seed);
    const auto uniform = [&rng]() { return double(rng() >> 11) * 0x1.0p-53; };

    const Index s = rule.dim();
    ArrayXd qs(q);
    for (int i = 0; i < q; ++i) {
        ArrayXd d(s);
        for (Index j = 0; j < s; ++j) d[j] = uniform();
        qs[i] = apply_rule(rule, RealShift(std::move(d)), f);
    }

    RandomShiftEstimate est;
    est.q = q;
    est.seed = seed;
    est.mean = qs.mean();
    if (q >= 2) {
        const double var = (qs - est.mean).square().sum() / double(q - 1);
        est.std_error = std::sqrt(var / double(q));
    }
    return est;
}

}  // namespace latshift
