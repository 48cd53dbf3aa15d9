#include <latshift/io.hpp>

#include <json.hpp>  // vendored nlohmann/json

#include <cctype>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace latshift {

namespace {

bool blank_or_comment(const std::string& line) {
    for (char ch : line) {
        if (ch == '#') return true;
        if (!std::isspace(static_cast<unsigned char>(ch))) return false;
    }
    return true;
}

}  // namespace

IndexVector load_vector_file(const std::string& path, std::int64_t n, Index s_max) {
    if (n < 2) throw std::invalid_argument("load_vector_file: n must be >= 2");
    if (s_max < 1) throw std::invalid_argument("load_vector_file: s_max must be >= 1");
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_vector_file: cannot open '" + path + "'");

    std::vector<std::int64_t> vals;
    std::string line;
    int lineno = 0;
    int columns = 0;  // detected on the first data line
    std::int64_t expect_index = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (blank_or_comment(line)) continue;
        std::istringstream ls(line);
        std::int64_t a = 0, b = 0;
        if (!(ls >> a))
            throw std::runtime_error("load_vector_file: malformed line " +
                                     std::to_string(lineno) + " in '" + path + "'");
        const bool two = static_cast<bool>(ls >> b);
        std::string trailing;
        if (ls >> trailing)
            throw std::runtime_error("load_vector_file: unrecognized layout at line " +
                                     std::to_string(lineno) + " in '" + path + "'");
        if (columns == 0) columns = two ? 2 : 1;
        if ((columns == 2) != two)
            throw std::runtime_error("load_vector_file: inconsistent column count at line " +
                                     std::to_string(lineno) + " in '" + path + "'");
        std::int64_t value = a;
        if (columns == 2) {
            if (a != expect_index)
                throw std::runtime_error("load_vector_file: indices must be contiguous from 1, "
                                         "got " + std::to_string(a) + " at line " +
                                         std::to_string(lineno));
            ++expect_index;
            value = b;
        }
        if (value < 1 || value > n - 1)
            throw std::runtime_error("load_vector_file: component " + std::to_string(value) +
                                     " at line " + std::to_string(lineno) +
                                     " outside {1,...," + std::to_string(n - 1) + "}");
        vals.push_back(value);
        if (Index(vals.size()) == s_max) break;
    }
    if (Index(vals.size()) < s_max)
        throw std::runtime_error("load_vector_file: '" + path + "' has only " +
                                 std::to_string(vals.size()) + " rows, need " +
                                 std::to_string(s_max));
    IndexVector z(s_max);
    for (Index j = 0; j < s_max; ++j) z[j] = vals[std::size_t(j)];
    return z;
}

void save_vector_file(const std::string& path, const IndexVector& z) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_vector_file: cannot write '" + path + "'");
    for (Index j = 0; j < z.size(); ++j) out << z[j] << "\n";
}

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("file_digest: cannot open '" + path + "'");
    std::uint64_t h = 0xcbf29ce484222325ull;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ull;
        }
        if (!in) break;
    }
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
    return std::string(hex);
}

TableFormat parse_table_format(const std::string& name) {
    if (name == "csv") return TableFormat::csv;
    if (name == "tsv") return TableFormat::tsv;
    if (name == "json") return TableFormat::json;
    throw std::invalid_argument("unknown table format '" + name + "'");
}

std::string emit_shift_table(const CbcShiftResult& result, const TableMeta& meta,
                             TableFormat format) {
    if (result.m_star.size() == 0)
        throw std::invalid_argument("emit_shift_table: empty result");

    if (format == TableFormat::json) {
        nlohmann::json j;
        j["n"] = result.n;
        j["weights"] = meta.weights_tag;
        j["z_file"] = meta.z_file;
        j["z_digest"] = meta.z_digest;
        nlohmann::json rows = nlohmann::json::array();
        for (Index i = 0; i < result.m_star.size(); ++i) {
            nlohmann::json r;
            r["s"] = i + 1;
            r["m"] = result.m_star[i];
            r["delta"] = result.delta[i];
            r["kappa"] = result.kappa[i];
            r["kappa0"] = result.kappa0[i];
            r["sq_wce"] = result.sq_wce[i];
            r["shift_avg_sq_wce"] = result.shift_avg_sq[i];
            rows.push_back(r);
        }
        j["rows"] = rows;
        return j.dump(2) + "\n";
    }

    const char sep = (format == TableFormat::csv) ? ',' : '\t';
    std::ostringstream out;
    out << "# n=" << result.n << " weights=" << meta.weights_tag;
    if (!meta.z_file.empty()) out << " z-file=" << meta.z_file;
    if (!meta.z_digest.empty()) out << " z-digest=" << meta.z_digest;
    out << "\n";
    out << "s" << sep << "m" << sep << "kappa" << sep << "kappa0" << "\n";
    out << std::fixed << std::setprecision(6);
    for (Index i = 0; i < result.m_star.size(); ++i)
        out << (i + 1) << sep << result.m_star[i] << sep << result.kappa[i] << sep
            << result.kappa0[i] << "\n";
    return out.str();
}

void save_shift_file(const std::string& path, const CbcShiftResult& result) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_shift_file: cannot write '" + path + "'");
    out << std::setprecision(17);
    for (Index i = 0; i < result.m_star.size(); ++i)
        out << (i + 1) << " " << result.m_star[i] << " " << result.delta[i] << "\n";
}

HalfShift load_shift_file(const std::string& path, std::int64_t n) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_shift_file: cannot open '" + path + "'");
    std::vector<std::int64_t> ms;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (blank_or_comment(line)) continue;
        std::istringstream ls(line);
        std::int64_t s = 0, m = 0;
        double delta = 0.0;
        if (!(ls >> s >> m >> delta))
            throw std::runtime_error("load_shift_file: malformed line " +
                                     std::to_string(lineno) + " in '" + path + "'");
        if (s != std::int64_t(ms.size()) + 1)
            throw std::runtime_error("load_shift_file: dimension column must count from 1, line " +
                                     std::to_string(lineno));
        ms.push_back(m);
    }
    if (ms.empty()) throw std::runtime_error("load_shift_file: '" + path + "' is empty");
    IndexVector m(Index(ms.size()));
    for (Index j = 0; j < m.size(); ++j) m[j] = ms[std::size_t(j)];
    return HalfShift(n, std::move(m));
}

}  // namespace latshift
