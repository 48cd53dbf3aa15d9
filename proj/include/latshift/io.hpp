#pragma once

#include <latshift/cbc.hpp>

#include <string>

namespace latshift {

/// Loads a generating-vector file.  Two layouts are accepted:
///   - one integer per line;
///   - two whitespace-separated columns "index value" with 1-based,
///     strictly increasing, contiguous indices.
/// Components are validated against {1,...,n-1}.  Malformed lines are
/// rejected with their line number; other layouts are rejected, not guessed.
IndexVector load_vector_file(const std::string& path, std::int64_t n, Index s_max);

/// Writes one component per line.
void save_vector_file(const std::string& path, const IndexVector& z);

/// FNV-1a (64-bit) digest of a file's bytes, as 16 hex digits.  Recorded in
/// emitted tables so results are traceable to their inputs.
std::string file_digest(const std::string& path);

enum class TableFormat { csv, tsv, json };

TableFormat parse_table_format(const std::string& name);

/// Metadata block attached to an emitted shift table.
struct TableMeta {
    std::string weights_tag;
    std::string z_file;
    std::string z_digest;
};

/// Renders a CbcShiftResult as a table: header "s,m,kappa,kappa0", kappa
/// columns printed with 6 decimal places; full precision in JSON.
std::string emit_shift_table(const CbcShiftResult& result, const TableMeta& meta,
                             TableFormat format);

/// Shift persistence: one line per dimension, "s m delta", delta printed with
/// 17 significant digits.  The indices m are the source of truth.
void save_shift_file(const std::string& path, const CbcShiftResult& result);

/// Reads the indices back; delta is recomputed as (2m-1)/(2n).
HalfShift load_shift_file(const std::string& path, std::int64_t n);

}  // namespace latshift
