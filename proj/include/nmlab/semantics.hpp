#ifndef NMLAB_SEMANTICS_HPP
#define NMLAB_SEMANTICS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "nmlab/nmatrix.hpp"

namespace nmlab {

/// The multi-function a formula expresses: for each tuple of values for its
/// variables (in first-occurrence order), the set of values the formula can
/// take under some valuation.
struct MultiFunction {
  int arity = 0;
  int universe = 0;
  std::vector<ValueSet> table; // size universe^arity, lexicographic

  const ValueSet& at(std::span<const Value> args) const {
    return table[index(args)];
  }
  std::size_t index(std::span<const Value> args) const {
    std::size_t idx = 0;
    for (Value a : args) idx = idx * universe + a;
    return idx;
  }
  bool operator==(const MultiFunction&) const = default;
};

/// One consistent value choice per distinct subformula of a DAG.
struct Assignment {
  std::vector<Value> values; // indexed like SubformulaDag::entries()
};

/// A subformula DAG bound to a matrix: connectives resolved, ready to
/// enumerate the valuations restricted to the DAG.
///
/// Enumeration branches only where cells actually offer a choice, and the
/// single-root image computation additionally collapses unshared subterms
/// to whole value sets: only entries with two or more parents need their
/// value pinned, because a choice at a single-parent entry constrains
/// nothing else.  Equal subterms are one entry throughout, which is what
/// makes multi-functions sensitive to syntax.
class Evaluator {
public:
  Evaluator(Nmatrix m, SubformulaDag dag);

  const SubformulaDag& dag() const { return dag_; }
  const Nmatrix& matrix() const { return m_; }

  /// Visits every consistent assignment, variables fixed to `var_values`
  /// (indexed like dag().vars()).  `fn` may return false to stop; returns
  /// false when stopped early.
  bool for_each_assignment(
      std::span<const Value> var_values,
      const std::function<bool(std::span<const Value>)>& fn) const;

  /// Set of values the first root takes over all consistent assignments.
  ValueSet root_image(std::span<const Value> var_values) const;

private:
  ValueSet candidates(int entry, const std::vector<ValueSet>& sets) const;
  void image_rec(int from, int root, std::span<const Value> var_values,
                 std::vector<ValueSet>& sets, ValueSet& acc) const;

  Nmatrix m_;
  SubformulaDag dag_;
  std::vector<int> conn_of_;   // per entry; -1 for variables
  std::vector<bool> pinned_;   // application entries with >= 2 parents
};

MultiFunction expressed_multifunction(const Nmatrix& m, const Formula& f);

/// Materialized consistent assignments (tests and CLI inspection).
std::vector<Assignment> consistent_assignments(
    const Nmatrix& m, const Formula& f,
    const std::map<std::string, Value>& var_values);

/// True iff every valuation designates `f`, for every assignment of values
/// to its variables.
bool is_theorem(const Nmatrix& m, const Formula& f);

struct ConsequenceOptions {
  /// Refuse to enumerate more than this many variable assignments.
  std::uint64_t cap = 1'000'000;
};

struct Counterexample {
  std::map<std::string, std::string> variable_values;
  std::map<std::string, std::string> formula_values;
};

struct ConsequenceResult {
  bool holds = false;
  std::optional<Counterexample> witness; // set when holds == false
};

/// Decides Γ ⊢ φ by enumerating valuations over the joint subformula DAG.
/// Throws CapExceeded when |A|^|Var| exceeds opts.cap.
ConsequenceResult check_consequence(const Nmatrix& m,
                                    std::span<const Formula> premises,
                                    const Formula& conclusion,
                                    const ConsequenceOptions& opts = {});

/// True iff the images of the monadic formula `f` at `a` and at `b` are
/// separated: one inside the designated set, the other outside it.
/// Throws when `f` has two or more variables.
bool separates(const Nmatrix& m, const Formula& f, Value a, Value b);

} // namespace nmlab

#endif
