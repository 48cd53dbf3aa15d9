#include <latshift/weights.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace latshift {

ProductWeights::ProductWeights(ArrayXd gamma, std::string tag)
    : gamma_(std::move(gamma)), tag_(std::move(tag)) {
    if (gamma_.size() < 1)
        throw std::invalid_argument("ProductWeights: need at least one weight");
    for (Index j = 0; j < gamma_.size(); ++j)
        if (!(gamma_[j] > 0.0))
            throw std::invalid_argument("ProductWeights: weights must be positive");
}

ProductWeights ProductWeights::inverse_square(Index s_max) {
    if (s_max < 1) throw std::invalid_argument("ProductWeights: s_max must be >= 1");
    ArrayXd g(s_max);
    for (Index j = 0; j < s_max; ++j) g[j] = 1.0 / double((j + 1) * (j + 1));
    return ProductWeights(std::move(g), "prod:1/j^2");
}

ProductWeights ProductWeights::geometric(double a, Index s_max) {
    if (s_max < 1) throw std::invalid_argument("ProductWeights: s_max must be >= 1");
    if (!(a > 0.0 && a < 1.0))
        throw std::invalid_argument("ProductWeights: geometric base must lie in (0,1)");
    ArrayXd g(s_max);
    double p = 1.0;
    for (Index j = 0; j < s_max; ++j) {
        p *= a;
        g[j] = p;
    }
    std::ostringstream tag;
    tag << "prod:geo:" << a;
    return ProductWeights(std::move(g), tag.str());
}

ProductWeights ProductWeights::explicit_list(const std::vector<double>& gamma) {
    ArrayXd g = Eigen::Map<const ArrayXd>(gamma.data(), Index(gamma.size()));
    return ProductWeights(std::move(g), "explicit");
}

double ProductWeights::subset_weight(const std::vector<Index>& u) const {
    if (u.empty())
        throw std::invalid_argument("subset_weight: empty subset (the empty-set weight is the constant 1)");
    double p = 1.0;
    for (Index j : u) {
        if (j < 0 || j >= gamma_.size())
            throw std::invalid_argument("subset_weight: coordinate out of range");
        p *= gamma_[j];
    }
    return p;
}

SubsetWeights SubsetWeights::from_product(const ProductWeights& w, Index s) {
    if (s < 1 || s > 20)
        throw std::invalid_argument("SubsetWeights: dimension out of range (subset enumeration)");
    if (w.size() < s)
        throw std::invalid_argument("SubsetWeights: not enough product weights");
    SubsetWeights sw;
    sw.dim = s;
    for (std::uint32_t mask = 1; mask < (1u << s); ++mask) {
        double p = 1.0;
        for (Index j = 0; j < s; ++j)
            if (mask & (1u << j)) p *= w[j];
        sw.value[mask] = p;
    }
    return sw;
}

double SubsetWeights::weight(std::uint32_t mask) const {
    if (mask == 0)
        throw std::invalid_argument("SubsetWeights: empty subset not stored");
    auto it = value.find(mask);
    if (it == value.end())
        throw std::invalid_argument("SubsetWeights: subset has no weight");
    return it->second;
}

namespace {

std::vector<double> read_weight_file(const std::string& path, Index s_max) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("weights: cannot open file '" + path + "'");
    std::vector<double> g;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        double v;
        if (!(ls >> v)) {
            std::string rest;
            if (std::getline(ls, rest) || !line.empty()) {
                // blank lines are allowed, anything else is not
                std::istringstream probe(line);
                std::string tok;
                if (probe >> tok)
                    throw std::runtime_error("weights: malformed line " + std::to_string(lineno) +
                                             " in '" + path + "'");
            }
            continue;
        }
        g.push_back(v);
    }
    if (Index(g.size()) < s_max)
        throw std::runtime_error("weights: file '" + path + "' has only " +
                                 std::to_string(g.size()) + " weights, need " +
                                 std::to_string(s_max));
    g.resize(std::size_t(s_max));
    return g;
}

}  // namespace

ProductWeights parse_weights(const std::string& spec, Index s_max) {
    if (s_max < 1) throw std::invalid_argument("parse_weights: s_max must be >= 1");
    if (spec == "prod:1/j^2") return ProductWeights::inverse_square(s_max);
    if (spec.rfind("prod:geo:", 0) == 0) {
        const std::string num = spec.substr(9);
        std::size_t pos = 0;
        double a = std::stod(num, &pos);
        if (pos != num.size())
            throw std::invalid_argument("parse_weights: bad geometric base in '" + spec + "'");
        return ProductWeights::geometric(a, s_max);
    }
    if (spec.rfind("prod:file:", 0) == 0) {
        auto g = read_weight_file(spec.substr(10), s_max);
        ArrayXd arr = Eigen::Map<const ArrayXd>(g.data(), Index(g.size()));
        return ProductWeights(std::move(arr), spec);
    }
    if (spec.rfind("explicit:[", 0) == 0 && spec.back() == ']') {
        std::string body = spec.substr(10, spec.size() - 11);
        std::vector<double> g;
        std::istringstream ls(body);
        std::string tok;
        while (std::getline(ls, tok, ',')) {
            std::size_t pos = 0;
            g.push_back(std::stod(tok, &pos));
        }
        if (g.empty()) throw std::invalid_argument("parse_weights: empty explicit list");
        if (Index(g.size()) < s_max)
            throw std::invalid_argument("parse_weights: explicit list shorter than s_max");
        g.resize(std::size_t(s_max));
        return ProductWeights::explicit_list(g);
    }
    throw std::invalid_argument("parse_weights: unknown weight specification '" + spec + "'");
}

}  // namespace latshift
