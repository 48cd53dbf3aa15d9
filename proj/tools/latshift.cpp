#include <latshift/cbc.hpp>
#include <latshift/io.hpp>
#include <latshift/quadrature.hpp>
#include <latshift/wce.hpp>

#include "../tests/oracle/oracle.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>

namespace {

using namespace latshift;

int default_jobs() {
    if (const char* env = std::getenv("LATSHIFT_JOBS")) {
        const int j = std::atoi(env);
        if (j >= 1) return j;
    }
    return 1;
}

IndexVector parse_index_list(const std::string& csv) {
    std::vector<std::int64_t> out;
    std::istringstream ls(csv);
    std::string tok;
    while (std::getline(ls, tok, ',')) out.push_back(std::stoll(tok));
    IndexVector v(Index(out.size()));
    for (Index i = 0; i < v.size(); ++i) v[i] = out[std::size_t(i)];
    return v;
}

int run_cbc_z(std::int64_t n, Index smax, const std::string& weights,
              const std::string& out, bool all_candidates, int jobs) {
    CbcOptions opts;
    opts.all_candidates = all_candidates;
    opts.jobs = jobs;
    const auto w = parse_weights(weights, smax);
    const auto res = cbc_vector(n, smax, w, opts);
    if (!out.empty()) save_vector_file(out, res.z);
    std::cout << "# n=" << n << " weights=" << w.tag()
              << " candidates=" << (res.coprime_candidates ? "coprime" : "all") << "\n";
    std::cout << "s\tz\te_sh^2\n" << std::setprecision(12);
    for (Index j = 0; j < res.z.size(); ++j)
        std::cout << (j + 1) << "\t" << res.z[j] << "\t" << res.shift_avg_sq[j] << "\n";
    return 0;
}

int run_cbc_shift(std::int64_t n, Index smax, const std::string& weights,
                  const std::string& zfile, const std::string& format,
                  const std::string& out, const std::string& shift_out, int jobs,
                  std::int64_t max_pair_n) {
    CbcOptions opts;
    opts.jobs = jobs;
    if (max_pair_n > 0) opts.max_pair_n = max_pair_n;
    const auto w = parse_weights(weights, smax);
    const auto z = load_vector_file(zfile, n, smax);
    const auto res = cbc_shift(n, z, smax, w, opts);

    TableMeta meta;
    meta.weights_tag = w.tag();
    meta.z_file = zfile;
    meta.z_digest = file_digest(zfile);
    const std::string table = emit_shift_table(res, meta, parse_table_format(format));
    if (out.empty()) {
        std::cout << table;
    } else {
        std::ofstream f(out);
        if (!f) throw std::runtime_error("cannot write '" + out + "'");
        f << table;
    }
    if (!shift_out.empty()) save_shift_file(shift_out, res);
    return 0;
}

int run_wce(std::int64_t n, const std::string& weights, const std::string& zfile,
            const std::string& shift_file, bool zero_shift,
            const std::string& half_indices, Index smax) {
    Index s = smax;
    IndexVector half;
    if (!shift_file.empty()) {
        const HalfShift hs = load_shift_file(shift_file, n);
        half = hs.m;
        s = hs.dim();
    } else if (!half_indices.empty()) {
        half = parse_index_list(half_indices);
        s = half.size();
    } else if (!zero_shift) {
        throw CLI::ValidationError(
            "wce", "one of --shift-file, --zero-shift, --half-shift-indices is required");
    }
    if (s < 1) throw CLI::ValidationError("wce", "--smax required with --zero-shift");

    const auto w = parse_weights(weights, s);
    const auto z = load_vector_file(zfile, n, s);
    const LatticeRule rule(n, z);
    const RealShift shift =
        (half.size() > 0) ? HalfShift(n, half).as_real() : RealShift::zero(s);

    const double e2 = squared_wce(rule, shift, w);
    const double esh2 = shift_avg_sq_wce(rule, w);
    std::cout << std::setprecision(12);
    std::cout << "e^2          = " << e2 << "\n";
    std::cout << "e_sh^2       = " << esh2 << "\n";
    std::cout << "kappa        = " << std::sqrt(e2 / esh2) << "\n";
    return 0;
}

int run_bound(std::int64_t n, Index smax, const std::string& weights, double lambda,
              bool theorem1) {
    const auto w = parse_weights(weights, smax);
    std::cout << std::setprecision(6) << std::fixed;
    if (theorem1)
        std::cout << theorem1_bound(n, w, smax) << "\n";
    else
        std::cout << theoretical_bound(n, w, smax, lambda) << "\n";
    return 0;
}

int run_integrate(std::int64_t n, const std::string& zfile, const std::string& fname,
                  Index dim, const std::string& shift_file, bool zero_shift, bool random,
                  int q, std::uint64_t seed) {
    Index s = dim;
    IndexVector half;
    if (!shift_file.empty()) {
        const HalfShift hs = load_shift_file(shift_file, n);
        half = hs.m;
        s = hs.dim();
    }
    if (s < 1) throw CLI::ValidationError("integrate", "--dim required");
    const auto z = load_vector_file(zfile, n, s);
    const LatticeRule rule(n, z);
    const Integrand f = named_integrand(fname, s);

    std::cout << std::setprecision(12);
    if (random) {
        const auto est = random_shift_estimate(rule, f, q, seed);
        std::cout << "mean      = " << est.mean << "\n";
        if (est.std_error) std::cout << "std_error = " << *est.std_error << "\n";
        if (f.exact) std::cout << "abs_error = " << std::abs(est.mean - *f.exact) << "\n";
        return 0;
    }
    const RealShift shift =
        (half.size() > 0) ? HalfShift(n, half).as_real()
                          : (zero_shift ? RealShift::zero(s)
                                        : throw CLI::ValidationError(
                                              "integrate",
                                              "need --shift-file, --zero-shift or --random"));
    const double Q = apply_rule(rule, shift, f);
    std::cout << "Q = " << Q << "\n";
    if (f.exact) std::cout << "abs_error = " << std::abs(Q - *f.exact) << "\n";
    return 0;
}

int run_verify(std::int64_t max_n, Index max_s, std::uint64_t seed) {
    int violations = 0;
    std::mt19937_64 rng(seed);
    const auto uniform = [&rng]() { return double(rng() >> 11) * 0x1.0p-53; };

    // Theorem-1 inequality over the grid, >= 50 z samples per (n, s)
    long checked = 0;
    for (std::int64_t n = 2; n <= max_n; ++n) {
        const auto w = ProductWeights::inverse_square(max_s);
        for (Index s = 1; s <= max_s; ++s) {
            for (int rep = 0; rep < 50; ++rep) {
                IndexVector z(s);
                for (Index j = 0; j < s; ++j) z[j] = 1 + std::int64_t(rng() % std::uint64_t(n - 1));
                const LatticeRule rule(n, z);
                const double lhs =
                    std::abs(shift_avg_sq_wce(rule, w) - half_shift_avg_sq_wce(rule, w));
                const double bound = theorem1_bound(n, w, s);
                ++checked;
                if (lhs > bound + 1e-14) {
                    std::cerr << "violation: theorem-1 bound at n=" << n << " s=" << s
                              << " lhs=" << lhs << " bound=" << bound << "\n";
                    ++violations;
                }
            }
        }
    }
    std::cout << "theorem-1 grid: " << checked << " instances checked\n";

    // oracle equivalence on random small instances
    checked = 0;
    const std::int64_t n_cap = std::min<std::int64_t>(max_n > 2 ? max_n : 16, 16);
    for (int rep = 0; rep < 200; ++rep) {
        const std::int64_t n = 2 + std::int64_t(rng() % std::uint64_t(n_cap - 1));
        const Index s = 1 + Index(rng() % std::uint64_t(std::min<Index>(max_s > 0 ? max_s : 6, 6)));
        IndexVector z(s);
        for (Index j = 0; j < s; ++j) z[j] = 1 + std::int64_t(rng() % std::uint64_t(n - 1));
        std::vector<double> g(static_cast<std::size_t>(s));
        for (auto& v : g) v = 0.05 + 0.95 * uniform();
        const auto w = ProductWeights::explicit_list(g);
        const auto sw = SubsetWeights::from_product(w, s);
        const LatticeRule rule(n, z);
        ArrayXd d(s);
        for (Index j = 0; j < s; ++j) d[j] = uniform();
        const RealShift shift{d};

        const double fast = squared_wce(rule, shift, w);
        const double slow = oracle::brute_sq_wce(rule, shift, sw);
        ++checked;
        if (std::abs(fast - slow) > 1e-12 * std::max({1.0, std::abs(fast), std::abs(slow)})) {
            std::cerr << "violation: oracle mismatch at n=" << n << " s=" << s << "\n";
            ++violations;
        }
        if (std::pow(double(n), double(s)) <= 1e5) {
            const double havg = half_shift_avg_sq_wce(rule, w);
            const double hbrute = oracle::brute_half_shift_avg(rule, sw);
            if (std::abs(havg - hbrute) > 1e-12 * std::max({1.0, havg, hbrute})) {
                std::cerr << "violation: half-shift oracle mismatch at n=" << n << " s=" << s
                          << "\n";
                ++violations;
            }
        }
    }
    std::cout << "oracle equivalence: " << checked << " instances checked\n";

    // proof-term bounds, exhaustive pairs
    for (std::int64_t n = 2; n <= std::min<std::int64_t>(max_n, 32); ++n) {
        for (std::int64_t z = 1; z < n; ++z)
            for (std::int64_t k = 1; k <= n; ++k)
                for (std::int64_t kp = 1; kp <= n; ++kp) {
                    const auto t = oracle::proof_terms(k, kp, z, n);
                    if (std::abs(t.a) > 1.0 / 3 + 1e-15 || std::abs(t.b) > 1.0 / 3 + 1e-15 ||
                        std::abs(t.a - t.b) > 1.0 / (12.0 * double(n) * double(n)) + 1e-15) {
                        std::cerr << "violation: proof-term bound at n=" << n << " z=" << z
                                  << " k=" << k << " k'=" << kp << "\n";
                        ++violations;
                    }
                }
    }
    std::cout << "proof-term bounds: exhaustive up to n=" << std::min<std::int64_t>(max_n, 32)
              << "\n";

    if (violations) {
        std::cerr << violations << " violation(s)\n";
        return 1;
    }
    std::cout << "all checks passed\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"shifted rank-1 lattice rules: worst-case errors, CBC constructions, cubature"};
    app.require_subcommand(1);

    // cbc-z
    std::int64_t n = 0;
    Index smax = 1;
    std::string weights, zfile, out, shift_out, format = "csv";
    bool all_candidates = false;
    int jobs = default_jobs();
    std::int64_t max_pair_n = 0;

    auto* cz = app.add_subcommand("cbc-z", "construct a generating vector by CBC");
    cz->add_option("--n", n, "number of points")->required();
    cz->add_option("--smax", smax, "dimensions to construct")->required();
    cz->add_option("--weights", weights, "weight specification")->required();
    cz->add_option("--out", out, "write the vector to this file");
    cz->add_flag("--all-candidates", all_candidates, "search all of {1,...,n-1}");
    cz->add_option("--jobs", jobs, "worker threads");

    auto* cs = app.add_subcommand("cbc-shift", "construct half-shifts by CBC for a given vector");
    cs->add_option("--n", n, "number of points")->required();
    cs->add_option("--smax", smax, "dimensions to construct")->required();
    cs->add_option("--weights", weights, "weight specification")->required();
    cs->add_option("--z-file", zfile, "generating-vector file")->required();
    cs->add_option("--format", format, "csv, tsv or json");
    cs->add_option("--out", out, "write the table to this file");
    cs->add_option("--shift-out", shift_out, "write the shift file");
    cs->add_option("--jobs", jobs, "worker threads");
    cs->add_option("--max-pair-n", max_pair_n, "pair-cache ceiling override");

    std::string shift_file, half_indices, fname;
    bool zero_shift = false, theorem1 = false, random = false;
    double lambda = 1.0;
    Index dim = 0;
    int q = 8;
    std::uint64_t seed = 1;

    auto* wc = app.add_subcommand("wce", "evaluate worst-case errors for a rule");
    wc->add_option("--n", n, "number of points")->required();
    wc->add_option("--weights", weights, "weight specification")->required();
    wc->add_option("--z-file", zfile, "generating-vector file")->required();
    wc->add_option("--shift-file", shift_file, "shift file (s m delta)");
    wc->add_flag("--zero-shift", zero_shift, "use the zero shift");
    wc->add_option("--half-shift-indices", half_indices, "comma-separated indices m");
    wc->add_option("--smax", smax, "dimension (with --zero-shift)");

    auto* bd = app.add_subcommand("bound", "theoretical error bounds");
    bd->add_option("--n", n, "number of points")->required();
    bd->add_option("--smax", smax, "dimension")->required();
    bd->add_option("--weights", weights, "weight specification")->required();
    bd->add_option("--lambda", lambda, "exponent in (1/2, 1]");
    bd->add_flag("--theorem1", theorem1, "print the half-shift averaging bound instead");

    auto* vf = app.add_subcommand("verify", "run the numeric verification suites");
    std::int64_t max_n = 12;
    Index max_s = 3;
    vf->add_option("--max-n", max_n, "largest point count");
    vf->add_option("--max-s", max_s, "largest dimension");
    vf->add_option("--seed", seed, "sampling seed");

    auto* ig = app.add_subcommand("integrate", "apply a rule to a named integrand");
    ig->add_option("--n", n, "number of points")->required();
    ig->add_option("--weights", weights, "weight specification (accepted, not used)");
    ig->add_option("--z-file", zfile, "generating-vector file")->required();
    ig->add_option("--f", fname, "integrand name")->required();
    ig->add_option("--dim", dim, "dimension");
    ig->add_option("--shift-file", shift_file, "shift file");
    ig->add_flag("--zero-shift", zero_shift, "use the zero shift");
    ig->add_flag("--random", random, "randomly shifted estimate");
    ig->add_option("--q", q, "number of random shifts");
    ig->add_option("--seed", seed, "random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (cz->parsed()) return run_cbc_z(n, smax, weights, out, all_candidates, jobs);
        if (cs->parsed())
            return run_cbc_shift(n, smax, weights, zfile, format, out, shift_out, jobs,
                                 max_pair_n);
        if (wc->parsed())
            return run_wce(n, weights, zfile, shift_file, zero_shift, half_indices,
                           wc->count("--smax") ? smax : (half_indices.empty() && shift_file.empty()
                                                             ? Index(0)
                                                             : smax));
        if (bd->parsed()) return run_bound(n, smax, weights, lambda, theorem1);
        if (vf->parsed()) return run_verify(max_n, max_s, seed);
        if (ig->parsed())
            return run_integrate(n, zfile, fname, dim, shift_file, zero_shift, random, q, seed);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
