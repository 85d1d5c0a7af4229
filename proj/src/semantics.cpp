#include "nmlab/semantics.hpp"

#include <algorithm>

#include "nmlab/error.hpp"

namespace nmlab {

Evaluator::Evaluator(Nmatrix m, SubformulaDag dag)
    : m_(std::move(m)), dag_(std::move(dag)) {
  const auto& entries = dag_.entries();
  conn_of_.resize(entries.size(), -1);
  std::vector<int> parents(entries.size(), 0);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (e.var_index < 0) {
      auto cid = m_.connective_id(e.term.head());
      if (!cid)
        throw Error("formula uses connective '" + e.term.head() +
                    "' unknown to the matrix");
      if (m_.connective(*cid).arity != static_cast<int>(e.child_index.size()))
        throw Error("arity mismatch for '" + e.term.head() + "'");
      conn_of_[i] = *cid;
    }
    for (int k : e.child_index) ++parents[k];
  }
  pinned_.resize(entries.size(), false);
  for (std::size_t i = 0; i < entries.size(); ++i)
    pinned_[i] = conn_of_[i] >= 0 && parents[i] >= 2;
}

bool Evaluator::for_each_assignment(
    std::span<const Value> var_values,
    const std::function<bool(std::span<const Value>)>& fn) const {
  const auto& entries = dag_.entries();
  std::vector<Value> vals(entries.size());
  std::vector<Value> args;

  auto rec = [&](auto&& self, std::size_t i) -> bool {
    if (i == entries.size()) return fn(vals);
    const auto& e = entries[i];
    if (e.var_index >= 0) {
      vals[i] = var_values[e.var_index];
      return self(self, i + 1);
    }
    args.assign(e.child_index.size(), 0);
    for (std::size_t k = 0; k < e.child_index.size(); ++k)
      args[k] = vals[e.child_index[k]];
    ValueSet cell = m_.cell(conn_of_[i], args);
    for (Value v = cell.first(); v >= 0; v = cell.next(v)) {
      vals[i] = v;
      if (!self(self, i + 1)) return false;
    }
    return true;
  };
  return rec(rec, 0);
}

/// Union of the entry's cell over every combination of child sets, with an
/// early stop once every value is present.
ValueSet Evaluator::candidates(int entry,
                               const std::vector<ValueSet>& sets) const {
  const auto& e = dag_.entries()[entry];
  const int k = static_cast<int>(e.child_index.size());
  ValueSet acc(m_.value_count());
  std::vector<Value> args(k);
  auto rec = [&](auto&& self, int pos) -> bool {
    if (pos == k) {
      acc.unite(m_.cell(conn_of_[entry], args));
      return !acc.is_full();
    }
    const ValueSet& s = sets[e.child_index[pos]];
    for (Value v = s.first(); v >= 0; v = s.next(v)) {
      args[pos] = v;
      if (!self(self, pos + 1)) return false;
    }
    return true;
  };
  rec(rec, 0);
  return acc;
}

void Evaluator::image_rec(int from, int root,
                          std::span<const Value> var_values,
                          std::vector<ValueSet>& sets, ValueSet& acc) const {
  const auto& entries = dag_.entries();
  for (int i = from; i < static_cast<int>(entries.size()); ++i) {
    const auto& e = entries[i];
    if (e.var_index >= 0) {
      sets[i] = ValueSet::single(m_.value_count(), var_values[e.var_index]);
      continue;
    }
    ValueSet c = candidates(i, sets);
    if (pinned_[i] && !c.is_singleton()) {
      for (Value v = c.first(); v >= 0; v = c.next(v)) {
        sets[i] = ValueSet::single(m_.value_count(), v);
        image_rec(i + 1, root, var_values, sets, acc);
        if (acc.is_full()) return;
      }
      return;
    }
    sets[i] = std::move(c);
    if (acc.is_full()) return;
  }
  acc.unite(sets[root]);
}

ValueSet Evaluator::root_image(std::span<const Value> var_values) const {
  ValueSet acc(m_.value_count());
  std::vector<ValueSet> sets(dag_.entries().size());
  image_rec(0, dag_.roots()[0], var_values, sets, acc);
  return acc;
}

MultiFunction expressed_multifunction(const Nmatrix& m, const Formula& f) {
  Evaluator ev(m, SubformulaDag::build(f));
  const int n = m.value_count();
  MultiFunction mf;
  mf.arity = static_cast<int>(ev.dag().vars().size());
  mf.universe = n;
  std::size_t rows = 1;
  for (int i = 0; i < mf.arity; ++i) rows *= n;
  mf.table.reserve(rows);
  for_each_tuple(mf.arity, n, [&](std::span<const Value> t) {
    mf.table.push_back(ev.root_image(t));
    return true;
  });
  return mf;
}

std::vector<Assignment> consistent_assignments(
    const Nmatrix& m, const Formula& f,
    const std::map<std::string, Value>& var_values) {
  Evaluator ev(m, SubformulaDag::build(f));
  std::vector<Value> vv;
  for (const std::string& v : ev.dag().vars()) {
    auto it = var_values.find(v);
    if (it == var_values.end())
      throw Error("no value given for variable '" + v + "'");
    vv.push_back(it->second);
  }
  std::vector<Assignment> out;
  ev.for_each_assignment(vv, [&](std::span<const Value> vals) {
    out.push_back(Assignment{{vals.begin(), vals.end()}});
    return true;
  });
  return out;
}

bool is_theorem(const Nmatrix& m, const Formula& f) {
  Evaluator ev(m, SubformulaDag::build(f));
  const auto& dag = ev.dag();
  const int root = dag.roots()[0];
  const int k = static_cast<int>(dag.vars().size());

  if (k > 0) {
    // a formula with variables is refuted by sending them all to an
    // infectious non-designated value, if the matrix has one
    ValueSet inf = m.infectious_values();
    inf.subtract(m.designated());
    if (!inf.empty()) return false;
  }

  return for_each_tuple(k, m.value_count(), [&](std::span<const Value> t) {
    return ev.for_each_assignment(t, [&](std::span<const Value> vals) {
      return m.is_designated(vals[root]);
    });
  });
}

ConsequenceResult check_consequence(const Nmatrix& m,
                                    std::span<const Formula> premises,
                                    const Formula& conclusion,
                                    const ConsequenceOptions& opts) {
  std::vector<Formula> all(premises.begin(), premises.end());
  all.push_back(conclusion);
  Evaluator ev(m, SubformulaDag::build(all));
  const auto& dag = ev.dag();
  const int k = static_cast<int>(dag.vars().size());

  std::uint64_t combos = 1;
  for (int i = 0; i < k; ++i) {
    combos *= static_cast<std::uint64_t>(m.value_count());
    if (combos > opts.cap)
      throw CapExceeded("consequence check needs more than " +
                        std::to_string(opts.cap) +
                        " variable assignments (cap exceeded)");
  }

  const int concl = dag.roots().back();
  ConsequenceResult res;
  res.holds = for_each_tuple(k, m.value_count(), [&](std::span<const Value> t) {
    return ev.for_each_assignment(t, [&](std::span<const Value> vals) {
      for (std::size_t p = 0; p + 1 < dag.roots().size(); ++p)
        if (!m.is_designated(vals[dag.roots()[p]])) return true;
      if (m.is_designated(vals[concl])) return true;
      Counterexample cex;
      for (int vi = 0; vi < k; ++vi)
        cex.variable_values[dag.vars()[vi]] = m.value_name(t[vi]);
      for (std::size_t i = 0; i < dag.entries().size(); ++i)
        cex.formula_values[dag.entries()[i].term.str()] =
            m.value_name(vals[i]);
      res.witness = std::move(cex);
      return false;
    });
  });
  return res;
}

bool separates(const Nmatrix& m, const Formula& f, Value a, Value b) {
  Evaluator ev(m, SubformulaDag::build(f));
  const int k = static_cast<int>(ev.dag().vars().size());
  if (k > 1)
    throw Error("separator must be monadic; '" + f.str() + "' has " +
                std::to_string(k) + " variables");
  std::vector<Value> va, vb;
  if (k == 1) { va.push_back(a); vb.push_back(b); }
  ValueSet ia = ev.root_image(va);
  ValueSet ib = ev.root_image(vb);
  const ValueSet& d = m.designated();
  bool a_in = ia.subset_of(d), a_out = !ia.intersects(d);
  bool b_in = ib.subset_of(d), b_out = !ib.intersects(d);
  return (a_in && b_out) || (a_out && b_in);
}

} // namespace nmlab
