#include "nmlab/monadify.hpp"

#include "nmlab/error.hpp"
#include "nmlab/reduction.hpp"

namespace nmlab {

Nmatrix build_monadify(const Nmatrix& base) {
  const int n = base.value_count();
  const Value one = n;
  const int nm = n + 1;

  std::vector<std::string> names = base.value_names();
  {
    std::string fresh = "one";
    while (base.value_id(fresh)) fresh += "_1";
    names.push_back(fresh);
  }

  ValueSet base_designated = base.designated();
  std::vector<Nmatrix::Conn> conns;

  auto widen = [nm](const ValueSet& s) {
    ValueSet out(nm);
    for (Value v = s.first(); v >= 0; v = s.next(v)) out.set(v);
    return out;
  };

  for (int ci = 0; ci < base.connective_count(); ++ci) {
    const auto& c = base.connective(ci);
    conns.push_back(
        {c.name, c.arity,
         [base, ci, widen, nm](std::span<const Value> args) {
           for (Value a : args)
             if (a >= base.value_count()) return ValueSet(nm, /*full=*/true);
           return widen(base.cell(ci, args));
         }});
  }
  for (Value a = 0; a < n; ++a) {
    conns.push_back(
        {"f_" + base.value_name(a), 2,
         [a, n, nm, one, base_designated](std::span<const Value> args) {
           const Value x = args[0], y = args[1];
           if (x < n && y < n && base_designated.test(y)) {
             if (x == a) return ValueSet::single(nm, one);
             ValueSet out(nm, /*full=*/true);
             out.reset(one);
             return out; // all of A
           }
           return ValueSet(nm, /*full=*/true);
         }});
  }
  return Nmatrix(std::move(names), {one}, std::move(conns));
}

bool check_prop8_preconditions(const Nmatrix& base) {
  if (base.value_count() < 2) return false;
  ValueSet inf = base.infectious_values();
  inf.subtract(base.designated());
  return !inf.empty();
}

std::vector<Formula> witness_separators_from_theorem(const Nmatrix& base,
                                                     const Formula& theorem) {
  if (!variables(theorem).empty())
    throw Error("separator witnesses need a closed theorem; '" +
                theorem.str() + "' has variables");
  if (!is_theorem(base, theorem))
    throw Error("'" + theorem.str() + "' is not a theorem of the base matrix");
  std::vector<Formula> out;
  out.push_back(Formula::variable("p"));
  for (Value a = 0; a < base.value_count(); ++a)
    out.push_back(Formula::apply("f_" + base.value_name(a),
                                 {Formula::variable("p"), theorem}));
  return out;
}

Nmatrix compile_monadicity_instance(const CounterMachine& machine) {
  return build_monadify(build_nmatrix(machine));
}

} // namespace nmlab
