#ifndef NMLAB_REDUCTION_HPP
#define NMLAB_REDUCTION_HPP

#include <optional>

#include "nmlab/machine.hpp"
#include "nmlab/nmatrix.hpp"

namespace nmlab {

/// Abstract remainder of a counter value: exactly zero, or only known to be
/// at least 0 / 1 / 2.  These four tags are all the matrix needs to detect
/// that two numbers are not equal or not consecutive.
enum class RmTag : int { Eq0 = 0, Ge0 = 1, Ge1 = 2, Ge2 = 3 };

/// A machine compiled to its Nmatrix, with the id bookkeeping needed to
/// talk about the matrix's values in machine terms.
///
/// Value layout: r_eq0 r_ge0 r_ge1 r_ge2, then conf_<state>_<tags...> with
/// states in declaration order and tags in mixed radix (last counter
/// fastest), then init, then err.  Connectives: zero, eps, suc, then
/// step_<state> of arity counters+1.  Cells are rule-backed: the table is
/// never materialized, but behaves exactly as if it were.
class Reduction {
public:
  explicit Reduction(CounterMachine machine);

  const CounterMachine& machine() const { return machine_; }
  const Nmatrix& matrix() const { return matrix_; }

  Value rm_value(RmTag t) const { return static_cast<Value>(t); }
  Value init_value() const { return init_; }
  Value error_value() const { return err_; }
  Value conf_value(int state_index, std::span<const RmTag> tags) const;
  bool is_conf(Value v) const { return v >= 4 && v < init_; }
  /// Splits a conf value back into state index and tags.
  std::pair<int, std::vector<RmTag>> conf_parts(Value v) const;

  int conn_zero() const { return 0; }
  int conn_eps() const { return 1; }
  int conn_suc() const { return 2; }
  int conn_step(int state_index) const { return 3 + state_index; }

private:
  CounterMachine machine_;
  Nmatrix matrix_;
  Value init_;
  Value err_;
};

/// Signature of M_C: zero, eps, suc, and one step connective per state.
/// Throws when a state name collides with a reserved name.
Signature build_sigma(const CounterMachine& m);

/// The compiled Nmatrix alone (see Reduction for the value layout).
Nmatrix build_nmatrix(const CounterMachine& m);

/// enc(k) = suc^k(zero)
Formula enc(std::uint64_t k);

/// seq(<>) = eps;  seq(<C0..Ck-1,(q,y)>) = step_q(seq(<C0..Ck-1>), enc(y))
Formula seq(const CounterMachine& m, std::span<const Configuration> configs);

/// Inverse of seq on sequence formulas; empty for any formula that does
/// not represent a configuration sequence of this machine.
std::optional<std::vector<Configuration>> decode_seq(const Formula& f,
                                                     const CounterMachine& m);

/// If `f` is enc(k), returns k.
std::optional<std::uint64_t> enc_literal(const Formula& f);

/// The distinguished valuations of M_C, identified by tag: v0eq pins zero
/// to r_eq0; vk(k) reads enc(j) as r_ge0 up to j = k, r_ge1 at k+1 and
/// r_ge2 beyond.
struct NamedValuation {
  enum class Kind { V0Eq, Vk };
  Kind kind = Kind::V0Eq;
  std::uint64_t k = 0;

  static NamedValuation v0eq() { return {Kind::V0Eq, 0}; }
  static NamedValuation vk(std::uint64_t k) { return {Kind::Vk, k}; }
  std::string tag() const;
  bool operator==(const NamedValuation&) const = default;
};

/// Evaluates a closed formula under a named valuation.  Well defined
/// because step cells are singletons on every input.
Value eval_named(const Reduction& r, const NamedValuation& v,
                 const Formula& f);

enum class MuKind { Plus, Minus, Neq, Eq };

/// The valuation the paper's case tables pick for comparing the counter
/// values a and b (not-incremented / not-decremented / not-equal / zero
/// test), used to refute steps that do not follow nxt.
NamedValuation mu_select(MuKind kind, std::uint64_t a, std::uint64_t b);

struct FalsifyResult {
  NamedValuation valuation;
  Value value;
};

/// Searches the named valuations for one that undesignates the closed
/// formula `f`.  Only v0eq and vk up to (largest enc literal in f) + 2 can
/// behave distinctly on Sub(f), so the search is complete: an empty result
/// means `f` is a theorem of M_C.
std::optional<FalsifyResult> falsify(const Reduction& r, const Formula& f);

/// All closed formulas with at most `max_distinct` distinct subformulas
/// that some valuation of M_C could designate.  Formulas outside this set
/// contain a subformula that v0eq sends to err; err being infectious and
/// undesignated, v0eq refutes them, so restricting a theorem hunt to this
/// set loses nothing.  Returned in discovery order (by subformula count).
std::vector<Formula> theorem_candidates(const Reduction& r, int max_distinct);

} // namespace nmlab

#endif
