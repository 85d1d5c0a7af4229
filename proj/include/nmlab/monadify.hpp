#ifndef NMLAB_MONADIFY_HPP
#define NMLAB_MONADIFY_HPP

#include "nmlab/machine.hpp"
#include "nmlab/semantics.hpp"

namespace nmlab {

/// Extends a matrix M over A to M_m over A ∪ {one}: the base connectives
/// keep their tables on base inputs and explode to the full value set as
/// soon as the fresh value appears among the inputs, and one new binary
/// connective f_a per base value a probes for a designated second argument:
///
///     f_a(x, y) = {one}      if x = a and y ∈ D
///              = A           if x ∈ A \ {a} and y ∈ D
///              = A ∪ {one}   otherwise
///
/// D here is the base matrix's designated set; the result designates only
/// the fresh value.  The fresh value is named "one", with "_1" suffixes
/// appended while that collides with a base value name.
Nmatrix build_monadify(const Nmatrix& base);

/// True iff the base matrix has at least two values and an infectious
/// value outside its designated set — the hypotheses under which
/// theoremhood of M transfers to monadicity of M_m and back.
bool check_prop8_preconditions(const Nmatrix& base);

/// The canonical separator set {p} ∪ {f_a(p, theorem) : a ∈ A} for the
/// monadified matrix.  Verifies the theoremhood precondition and throws
/// if it fails; coverage should be confirmed with verify_separator_set
/// against build_monadify(base).
std::vector<Formula> witness_separators_from_theorem(const Nmatrix& base,
                                                     const Formula& theorem);

/// build_monadify(build_nmatrix(machine)): the full halting-to-monadicity
/// reduction instance for one machine.
Nmatrix compile_monadicity_instance(const CounterMachine& machine);

} // namespace nmlab

#endif
