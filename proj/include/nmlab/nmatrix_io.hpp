#ifndef NMLAB_NMATRIX_IO_HPP
#define NMLAB_NMATRIX_IO_HPP

#include <iosfwd>
#include <string>

#include "nmlab/nmatrix.hpp"

namespace nmlab {

/// Loads the line-oriented matrix format:
///
///     values a b c          # value list, in id order
///     designated c          # subset (may be empty)
///     conn g 2              # declares a connective with its arity
///     g a a = c
///     g a b = a
///     g * * = b c           # wildcard row: any value in that position
///
/// `#` starts a comment.  A cell takes its most specific matching row
/// (most literal positions); among equally specific rows the later one
/// wins.  After loading, totality and nonemptiness are validated and
/// violations are hard errors.  Small connectives are materialized into
/// dense tables; large ones stay rule-backed.
Nmatrix load_nmatrix(std::istream& in);
Nmatrix load_nmatrix_file(const std::string& path);
Nmatrix parse_nmatrix(const std::string& text);

/// Writes a matrix in the same format, byte-stable for equal inputs.
/// Connectives whose most frequent cell covers enough of the table are
/// emitted as explicit exception rows plus one all-wildcard default row.
void save_nmatrix(const Nmatrix& m, std::ostream& out);
void save_nmatrix_file(const Nmatrix& m, const std::string& path);
std::string format_nmatrix(const Nmatrix& m);

} // namespace nmlab

#endif
