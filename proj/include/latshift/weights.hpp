#pragma once

#include <latshift/kernels.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace latshift {

/// Product weights gamma_1, gamma_2, ... materialized up to a maximum
/// dimension.  The weight of a nonempty subset u is prod_{j in u} gamma_j;
/// the empty-set weight is the constant 1 and is never stored.
class ProductWeights {
public:
    ProductWeights(ArrayXd gamma, std::string tag);

    /// gamma_j = 1/j^2
    static ProductWeights inverse_square(Index s_max);
    /// gamma_j = a^j for a in (0,1)
    static ProductWeights geometric(double a, Index s_max);
    /// explicit list, used verbatim
    static ProductWeights explicit_list(const std::vector<double>& gamma);

    Index size() const { return gamma_.size(); }
    /// weight of coordinate j, 0-based
    double operator[](Index j) const { return gamma_[j]; }
    const ArrayXd& gamma() const { return gamma_; }
    const std::string& tag() const { return tag_; }

    /// prod_{j in u} gamma_j for a nonempty subset u of 0-based coordinates
    double subset_weight(const std::vector<Index>& u) const;

private:
    ArrayXd gamma_;
    std::string tag_;
};

/// Explicit per-subset weights keyed by coordinate bitmask (bit j set means
/// coordinate j belongs to u).  Intended for small dimensions only; the
/// brute-force evaluators enumerate all 2^s - 1 nonempty subsets.
struct SubsetWeights {
    Index dim = 0;
    std::map<std::uint32_t, double> value;

    static SubsetWeights from_product(const ProductWeights& w, Index s);

    double weight(std::uint32_t mask) const;
};

/// Parses a CLI weight specification:
///   "prod:1/j^2"        gamma_j = 1/j^2
///   "prod:geo:<a>"      gamma_j = a^j, 0 < a < 1
///   "prod:file:<path>"  one gamma_j per line, decimal
///   "explicit:[a,b,..]" explicit list
/// Unknown strings are rejected.
ProductWeights parse_weights(const std::string& spec, Index s_max);

}  // namespace latshift
