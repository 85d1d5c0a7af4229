#ifndef NMLAB_MONADICITY_HPP
#define NMLAB_MONADICITY_HPP

#include <cstdint>

#include "nmlab/semantics.hpp"

namespace nmlab {

/// A unary function A -> A together with the smallest formula discovered
/// to express it.
struct UnaryFunction {
  std::vector<Value> map;
  Formula witness;
};

/// Every unary function expressible in a deterministic matrix, discovered
/// by the usual clone fixpoint: start from the identity and the nullary
/// constants, keep applying connectives pointwise until nothing new
/// appears.  Pointwise composition is only sound without non-determinism,
/// so non-deterministic input is an error.
struct UnaryClone {
  std::vector<UnaryFunction> functions; // discovery order; identity first
  std::uint64_t candidates_tried = 0;
};

UnaryClone unary_clone(const Nmatrix& m);

enum class Verdict { Monadic, NotMonadic, Unknown };
const char* verdict_name(Verdict v);

/// An unordered pair of distinct values, normalized lo < hi.
struct ValuePair {
  Value lo, hi;
  ValuePair(Value a, Value b) : lo(a < b ? a : b), hi(a < b ? b : a) {}
  bool operator==(const ValuePair&) const = default;
  auto operator<=>(const ValuePair&) const = default;
};

struct SeparatorReport {
  Verdict verdict = Verdict::Unknown;
  /// Covered pairs with their first-found separating formula.
  std::vector<std::pair<ValuePair, Formula>> witnesses;
  /// Pairs no explored formula separates (complete for NotMonadic).
  std::vector<ValuePair> uncovered;
  /// Largest formula node count explored.
  int budget = 0;
  std::uint64_t formulas_enumerated = 0;
};

/// Exact decision for deterministic matrices via the unary clone.
/// NotMonadic comes with a completeness certificate: the clone is the
/// whole set of expressible unary functions.
SeparatorReport decide_monadicity_matrix(const Nmatrix& m);

struct SearchOptions {
  int budget = 7;    // max formula node count
  bool prune = true; // canonicalize pointwise-singleton subterms
  int jobs = 1;      // worker threads per size stratum
};

/// Budget-bounded separator search for arbitrary Nmatrices.  Enumerates
/// monadic formulas by node count (ties in lexicographic order of the
/// printed form), evaluating each one whole — multi-functions of
/// subformulas must never be composed, only whole-formula evaluation is
/// sound.  Returns Monadic as soon as every pair is covered, Unknown at
/// budget exhaustion, and never NotMonadic.
///
/// With prune on, a subterm whose multi-function is singleton at every
/// input is interchangeable with any other subterm expressing the same
/// function: its value under every valuation is determined by the input,
/// so sharing constraints collapse and one representative suffices.
SeparatorReport search_separators(const Nmatrix& m,
                                  const SearchOptions& opts = {});

struct CoverageReport {
  bool all_covered = false;
  std::vector<std::pair<ValuePair, Formula>> witnesses;
  std::vector<ValuePair> uncovered;
};

/// Checks whether the given monadic formulas separate every pair of
/// distinct values.  Throws if a formula has two or more variables.
CoverageReport verify_separator_set(const Nmatrix& m,
                                    std::span<const Formula> formulas);

} // namespace nmlab

#endif
