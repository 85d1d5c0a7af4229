#include "nmlab/monadicity.hpp"

#include <algorithm>
#include <map>
#include <thread>

#include "nmlab/error.hpp"

namespace nmlab {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Monadic: return "MONADIC";
    case Verdict::NotMonadic: return "NOT_MONADIC";
    case Verdict::Unknown: return "UNKNOWN";
  }
  return "?";
}

UnaryClone unary_clone(const Nmatrix& m) {
  if (!m.is_deterministic())
    throw Error("unary clone generation needs a deterministic matrix; "
                "composing multi-functions is unsound");
  const int n = m.value_count();
  UnaryClone clone;
  std::map<std::vector<Value>, int> seen;

  auto add = [&](std::vector<Value> f, Formula w) {
    ++clone.candidates_tried;
    if (seen.emplace(f, clone.functions.size()).second)
      clone.functions.push_back(UnaryFunction{std::move(f), std::move(w)});
  };

  {
    std::vector<Value> id(n);
    for (Value v = 0; v < n; ++v) id[v] = v;
    add(std::move(id), Formula::variable("p"));
  }
  for (int ci = 0; ci < m.connective_count(); ++ci) {
    const auto& c = m.connective(ci);
    if (c.arity != 0) continue;
    Value out;
    m.cell(ci, {}).is_singleton(&out);
    add(std::vector<Value>(n, out), Formula::apply(c.name, {}));
  }

  // least fixpoint; |A|^|A| bounds both the clone and the round count
  std::size_t settled = 0;
  while (settled < clone.functions.size()) {
    settled = clone.functions.size();
    for (int ci = 0; ci < m.connective_count(); ++ci) {
      const auto& c = m.connective(ci);
      if (c.arity == 0) continue;
      std::vector<int> pick(c.arity, 0);
      const int pool = static_cast<int>(settled);
      while (true) {
        std::vector<Value> g(n);
        std::vector<Value> args(c.arity);
        for (Value v = 0; v < n; ++v) {
          for (int j = 0; j < c.arity; ++j)
            args[j] = clone.functions[pick[j]].map[v];
          m.cell(ci, args).is_singleton(&g[v]);
        }
        std::vector<Formula> kids;
        for (int j = 0; j < c.arity; ++j)
          kids.push_back(clone.functions[pick[j]].witness);
        add(std::move(g), Formula::apply(c.name, std::move(kids)));

        int j = c.arity - 1;
        while (j >= 0 && ++pick[j] == pool) pick[j--] = 0;
        if (j < 0) break;
      }
    }
  }
  return clone;
}

namespace {

std::vector<ValuePair> all_pairs(int n) {
  std::vector<ValuePair> out;
  for (Value a = 0; a < n; ++a)
    for (Value b = a + 1; b < n; ++b) out.emplace_back(a, b);
  return out;
}

/// Designation polarity of an image: +1 all designated, -1 all
/// undesignated, 0 mixed (useless for separation).
int polarity(const ValueSet& img, const ValueSet& designated) {
  if (img.subset_of(designated)) return 1;
  if (!img.intersects(designated)) return -1;
  return 0;
}

struct Coverage {
  explicit Coverage(int n) : n_(n), witness_(n * n) {}

  bool covered(ValuePair p) const {
    return witness_[p.lo * n_ + p.hi].has_value();
  }
  void cover(ValuePair p, const Formula& f) {
    auto& slot = witness_[p.lo * n_ + p.hi];
    if (!slot) { slot = f; ++count_; }
  }
  int count() const { return count_; }

  std::vector<std::pair<ValuePair, Formula>> witnesses() const {
    std::vector<std::pair<ValuePair, Formula>> out;
    for (Value a = 0; a < n_; ++a)
      for (Value b = a + 1; b < n_; ++b)
        if (const auto& w = witness_[a * n_ + b])
          out.emplace_back(ValuePair(a, b), *w);
    return out;
  }
  std::vector<ValuePair> uncovered() const {
    std::vector<ValuePair> out;
    for (Value a = 0; a < n_; ++a)
      for (Value b = a + 1; b < n_; ++b)
        if (!witness_[a * n_ + b]) out.emplace_back(a, b);
    return out;
  }

private:
  int n_;
  int count_ = 0;
  std::vector<std::optional<Formula>> witness_;
};

/// Images of a monadic formula at every input value.
std::vector<ValueSet> images_of(const Nmatrix& m, const Formula& f) {
  Evaluator ev(m, SubformulaDag::build(f));
  const int n = m.value_count();
  std::vector<ValueSet> img;
  img.reserve(n);
  if (ev.dag().vars().empty()) {
    ValueSet i = ev.root_image({});
    img.assign(n, i);
  } else {
    for (Value a = 0; a < n; ++a) {
      Value in[1] = {a};
      img.push_back(ev.root_image(in));
    }
  }
  return img;
}

void cover_from_images(const Nmatrix& m, const Formula& f,
                       const std::vector<ValueSet>& img, Coverage& cov) {
  const int n = m.value_count();
  ValueSet pos(n), neg(n);
  for (Value a = 0; a < n; ++a) {
    int p = polarity(img[a], m.designated());
    if (p > 0) pos.set(a);
    if (p < 0) neg.set(a);
  }
  if (pos.empty() || neg.empty()) return;
  for (Value a = pos.first(); a >= 0; a = pos.next(a))
    for (Value b = neg.first(); b >= 0; b = neg.next(b))
      if (a != b) cov.cover(ValuePair(a, b), f);
}

} // namespace

SeparatorReport decide_monadicity_matrix(const Nmatrix& m) {
  UnaryClone clone = unary_clone(m);
  const int n = m.value_count();
  SeparatorReport rep;
  rep.formulas_enumerated = clone.candidates_tried;
  for (const UnaryFunction& f : clone.functions)
    rep.budget = std::max(rep.budget, f.witness.node_count());

  Coverage cov(n);
  for (ValuePair p : all_pairs(n)) {
    for (const UnaryFunction& f : clone.functions) {
      bool a_in = m.is_designated(f.map[p.lo]);
      bool b_in = m.is_designated(f.map[p.hi]);
      if (a_in != b_in) { cov.cover(p, f.witness); break; }
    }
  }
  rep.witnesses = cov.witnesses();
  rep.uncovered = cov.uncovered();
  rep.verdict =
      rep.uncovered.empty() ? Verdict::Monadic : Verdict::NotMonadic;
  return rep;
}

SeparatorReport search_separators(const Nmatrix& m,
                                  const SearchOptions& opts) {
  if (opts.budget < 1) throw Error("search budget must be at least 1");
  const int n = m.value_count();
  SeparatorReport rep;
  rep.budget = opts.budget;
  Coverage cov(n);
  const int need = n * (n - 1) / 2;

  // subterm pool per node count; pruning drops pointwise-singleton
  // duplicates from the pool once their function has a representative
  std::vector<std::vector<Formula>> pool(opts.budget + 1);
  std::map<std::vector<Value>, bool> singleton_seen;

  auto finish = [&](Verdict v) {
    rep.verdict = v;
    rep.witnesses = cov.witnesses();
    rep.uncovered = cov.uncovered();
    return rep;
  };

  for (int size = 1; size <= opts.budget; ++size) {
    rep.budget = size;
    // generate the stratum
    std::vector<Formula> stratum;
    if (size == 1) {
      stratum.push_back(Formula::variable("p"));
      for (const auto& [name, arity] : m.signature().connectives())
        if (arity == 0) stratum.push_back(Formula::apply(name, {}));
    }
    for (const auto& [name, arity] : m.signature().connectives()) {
      if (arity == 0 || size - 1 < arity) continue;
      std::vector<Formula> kids;
      auto parts = [&](auto&& self, int pos, int left) -> void {
        if (pos == arity) {
          std::vector<Formula> copy(kids);
          stratum.push_back(Formula::apply(name, std::move(copy)));
          return;
        }
        int remaining = arity - pos - 1;
        for (int s = 1; s + remaining <= left; ++s) {
          for (const Formula& k : pool[s]) {
            kids.push_back(k);
            self(self, pos + 1, left - s);
            kids.pop_back();
          }
        }
      };
      parts(parts, 0, size - 1);
    }
    std::sort(stratum.begin(), stratum.end(),
              [](const Formula& a, const Formula& b) {
                return a.str() < b.str();
              });

    // evaluate, optionally fanned out; coverage is reduced in enumeration
    // order afterwards so the report never depends on thread timing
    std::vector<std::vector<ValueSet>> images(stratum.size());
    int jobs = std::max(1, opts.jobs);
    if (jobs == 1 || stratum.size() < 2) {
      for (std::size_t i = 0; i < stratum.size(); ++i)
        images[i] = images_of(m, stratum[i]);
    } else {
      std::vector<std::thread> workers;
      std::atomic<std::size_t> next{0};
      for (int w = 0; w < jobs; ++w)
        workers.emplace_back([&] {
          for (std::size_t i = next.fetch_add(1); i < stratum.size();
               i = next.fetch_add(1))
            images[i] = images_of(m, stratum[i]);
        });
      for (auto& w : workers) w.join();
    }

    for (std::size_t i = 0; i < stratum.size(); ++i) {
      ++rep.formulas_enumerated;
      cover_from_images(m, stratum[i], images[i], cov);
      if (cov.count() == need) return finish(Verdict::Monadic);

      bool keep = true;
      if (opts.prune) {
        std::vector<Value> sig;
        sig.reserve(n);
        bool all_single = true;
        for (const ValueSet& s : images[i]) {
          Value v;
          if (!s.is_singleton(&v)) { all_single = false; break; }
          sig.push_back(v);
        }
        if (all_single && !singleton_seen.emplace(sig, true).second)
          keep = false;
      }
      if (keep) pool[size].push_back(stratum[i]);
    }
  }
  return finish(Verdict::Unknown);
}

CoverageReport verify_separator_set(const Nmatrix& m,
                                    std::span<const Formula> formulas) {
  const int n = m.value_count();
  Coverage cov(n);
  for (const Formula& f : formulas) {
    Evaluator ev(m, SubformulaDag::build(f));
    if (ev.dag().vars().size() > 1)
      throw Error("separator '" + f.str() + "' is not monadic");
    cover_from_images(m, f, images_of(m, f), cov);
  }
  CoverageReport rep;
  rep.witnesses = cov.witnesses();
  rep.uncovered = cov.uncovered();
  rep.all_covered = rep.uncovered.empty();
  return rep;
}

} // namespace nmlab
