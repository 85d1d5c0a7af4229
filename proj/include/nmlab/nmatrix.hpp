#ifndef NMLAB_NMATRIX_HPP
#define NMLAB_NMATRIX_HPP

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nmlab/formula.hpp"
#include "nmlab/value_set.hpp"

namespace nmlab {

/// A finite non-deterministic matrix: truth values, a designated subset and,
/// per connective, a total map from value tuples to nonempty value sets.
///
/// Cells are functions so that machine-compiled matrices can stay lazy: a
/// cell is computed from its case rule on demand, observationally identical
/// to a materialized table.  An Nmatrix is an immutable shared handle; copies
/// are cheap and safe to share across threads.
class Nmatrix {
public:
  using CellFn = std::function<ValueSet(std::span<const Value>)>;

  struct Conn {
    std::string name;
    int arity;
    CellFn cells;
  };

  /// `designated` lists value ids; connective cells must be total over
  /// tuples of valid ids and always nonempty (not checked here; see
  /// validate_cells()).
  Nmatrix(std::vector<std::string> value_names, std::vector<Value> designated,
          std::vector<Conn> connectives);

  int value_count() const;
  const std::vector<std::string>& value_names() const;
  const std::string& value_name(Value v) const;
  std::optional<Value> value_id(std::string_view name) const;

  const ValueSet& designated() const;
  bool is_designated(Value v) const;

  int connective_count() const;
  const Conn& connective(int i) const;
  std::optional<int> connective_id(std::string_view name) const;
  const Signature& signature() const;

  ValueSet cell(int conn, std::span<const Value> args) const;

  /// True iff every cell is a singleton (the matrix is an ordinary logical
  /// matrix).  Scans cells on first use and caches the answer.
  bool is_deterministic() const;

  /// Values * such that every cell with * among its inputs equals {*}.
  ValueSet infectious_values() const;

  /// Enumerates every cell and throws on an empty one.  Intended for
  /// loaded tables; compiled matrices are nonempty by construction.
  void validate_cells() const;

  /// Total number of cells across connectives (sum of |A|^arity).
  std::uint64_t total_cells() const;

  /// Identity of the underlying storage (for caches keyed by matrix).
  const void* id() const { return impl_.get(); }

private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

/// Calls `fn` for every tuple in `universe`^`arity`, lexicographically.
/// `fn` may return false to stop; returns false if stopped early.
bool for_each_tuple(int arity, int universe,
                    const std::function<bool(std::span<const Value>)>& fn);

} // namespace nmlab

#endif
