#include "nmlab/reduction.hpp"

#include <algorithm>
#include <cassert>
#include <unordered_map>

namespace nmlab {

namespace {

const char* kTagNames[4] = {"r_eq0", "r_ge0", "r_ge1", "r_ge2"};

/// z ∈ suc(y) on abstract tags (0 Eq0, 1 Ge0, 2 Ge1, 3 Ge2):
/// suc(Eq0)={Ge1}, suc(Ge0)={Ge0,Ge1}, suc(Ge1)=suc(Ge2)={Ge2}.
bool in_suc(int z, int y) {
  switch (y) {
    case 0: return z == 2;
    case 1: return z == 1 || z == 2;
    default: return z == 3;
  }
}

/// Machine data flattened to ints for the cell rules.
struct StepCtx {
  int n = 0;           // counters
  int m = 0;           // states
  int qinit = 0;
  Value init_v = 0, err_v = 0;
  int nvalues = 0;
  struct Tr {
    int kind = 0; // 0 halting, 1 inc, 2 test
    int i = 0;    // 0-based counter
    int target = -1, on_zero = -1, on_nonzero = -1;
  };
  std::vector<Tr> tr;
};

} // namespace

Signature build_sigma(const CounterMachine& m) {
  Signature sig;
  sig.add("zero", 0);
  sig.add("eps", 0);
  sig.add("suc", 1);
  for (const std::string& q : m.states()) {
    if (q == "zero" || q == "eps" || q == "suc")
      throw Error("state name '" + q + "' collides with a reserved "
                  "connective name");
    sig.add("step_" + q, m.counters() + 1);
  }
  return sig;
}

Reduction::Reduction(CounterMachine machine)
    : machine_(std::move(machine)),
      matrix_(build_nmatrix(machine_)) {
  const int m = static_cast<int>(machine_.states().size());
  int confs = m;
  for (int i = 0; i < machine_.counters(); ++i) confs *= 4;
  init_ = 4 + confs;
  err_ = init_ + 1;
}

Value Reduction::conf_value(int state_index, std::span<const RmTag> tags) const {
  assert(static_cast<int>(tags.size()) == machine_.counters());
  Value v = state_index;
  for (RmTag t : tags) v = v * 4 + static_cast<int>(t);
  return 4 + v;
}

std::pair<int, std::vector<RmTag>> Reduction::conf_parts(Value v) const {
  assert(is_conf(v));
  int rest = v - 4;
  const int n = machine_.counters();
  std::vector<RmTag> tags(n);
  for (int j = n - 1; j >= 0; --j) {
    tags[j] = static_cast<RmTag>(rest & 3);
    rest >>= 2;
  }
  return {rest, std::move(tags)};
}

Nmatrix build_nmatrix(const CounterMachine& mach) {
  Signature sig = build_sigma(mach); // validates state names
  const int n = mach.counters();
  const int m = static_cast<int>(mach.states().size());

  int confs = m;
  for (int i = 0; i < n; ++i) confs *= 4;

  std::vector<std::string> names;
  names.reserve(confs + 6);
  for (const char* t : kTagNames) names.emplace_back(t);
  {
    std::vector<int> tags(n, 0);
    for (int q = 0; q < m; ++q) {
      std::fill(tags.begin(), tags.end(), 0);
      while (true) {
        std::string nm = "conf_" + mach.states()[q];
        for (int j = 0; j < n; ++j) { nm += '_'; nm += kTagNames[tags[j]]; }
        names.push_back(std::move(nm));
        int j = n - 1;
        while (j >= 0 && ++tags[j] == 4) tags[j--] = 0;
        if (j < 0) break;
      }
    }
  }
  const Value init_v = static_cast<Value>(names.size());
  names.emplace_back("init");
  const Value err_v = init_v + 1;
  names.emplace_back("err");
  const int nvalues = static_cast<int>(names.size());

  std::vector<Value> designated;
  for (int q = 0; q < m; ++q) {
    if (!mach.is_halting(mach.states()[q])) continue;
    int block = 1;
    for (int i = 0; i < n; ++i) block *= 4;
    for (int t = 0; t < block; ++t)
      designated.push_back(4 + q * block + t);
  }

  auto ctx = std::make_shared<StepCtx>();
  ctx->n = n;
  ctx->m = m;
  ctx->qinit = mach.state_index(mach.init());
  ctx->init_v = init_v;
  ctx->err_v = err_v;
  ctx->nvalues = nvalues;
  ctx->tr.resize(m);
  for (int q = 0; q < m; ++q) {
    const Transition* t = mach.transition(mach.states()[q]);
    if (!t) continue;
    auto& e = ctx->tr[q];
    e.i = t->counter - 1;
    if (t->kind == Transition::Kind::Inc) {
      e.kind = 1;
      e.target = mach.state_index(t->target);
    } else {
      e.kind = 2;
      e.on_zero = mach.state_index(t->on_zero);
      e.on_nonzero = mach.state_index(t->on_nonzero);
    }
  }

  std::vector<Nmatrix::Conn> conns;
  conns.push_back(
      {"zero", 0, [nvalues](std::span<const Value>) {
         return ValueSet::of(nvalues, {0, 1});
       }});
  conns.push_back(
      {"eps", 0, [nvalues, init_v](std::span<const Value>) {
         return ValueSet::single(nvalues, init_v);
       }});
  conns.push_back(
      {"suc", 1, [nvalues, err_v](std::span<const Value> a) {
         switch (a[0]) {
           case 0: return ValueSet::single(nvalues, 2);
           case 1: return ValueSet::of(nvalues, {1, 2});
           case 2:
           case 3: return ValueSet::single(nvalues, 3);
           default: return ValueSet::single(nvalues, err_v);
         }
       }});

  for (int q = 0; q < m; ++q) {
    conns.push_back(
        {"step_" + mach.states()[q], n + 1,
         [ctx, q](std::span<const Value> a) {
           const int n = ctx->n;
           const Value x = a[0];
           const Value* z = a.data() + 1;
           bool all_rm = true;
           for (int j = 0; j < n; ++j)
             if (z[j] >= 4) { all_rm = false; break; }
           if (all_rm) {
             int block = 1;
             for (int j = 0; j < n; ++j) block *= 4;
             auto conf_of = [&](int state) {
               Value v = state;
               for (int j = 0; j < n; ++j) v = v * 4 + z[j];
               return static_cast<Value>(4 + v);
             };
             if (x == ctx->init_v && q == ctx->qinit) {
               bool all0 = true, allg0 = true;
               for (int j = 0; j < n; ++j) {
                 all0 &= z[j] == 0;
                 allg0 &= z[j] == 1;
               }
               if (all0 || allg0)
                 return ValueSet::single(ctx->nvalues, conf_of(q));
             }
             if (x >= 4 && x < ctx->init_v) {
               int rest = x - 4;
               int yq = rest / block;
               int ytags = rest % block;
               auto ytag = [&](int j) { return (ytags >> (2 * (n - 1 - j))) & 3; };
               const auto& tr = ctx->tr[yq];
               auto others_equal = [&](int except) {
                 for (int j = 0; j < n; ++j)
                   if (j != except && z[j] != ytag(j)) return false;
                 return true;
               };
               if (tr.kind == 1 && tr.target == q &&
                   in_suc(z[tr.i], ytag(tr.i)) && others_equal(tr.i))
                 return ValueSet::single(ctx->nvalues, conf_of(q));
               if (tr.kind == 2) {
                 if (tr.on_zero == q &&
                     (ytag(tr.i) == 0 || ytag(tr.i) == 1) && others_equal(-1))
                   return ValueSet::single(ctx->nvalues, conf_of(q));
                 if (tr.on_nonzero == q && in_suc(ytag(tr.i), z[tr.i]) &&
                     others_equal(tr.i))
                   return ValueSet::single(ctx->nvalues, conf_of(q));
               }
             }
           }
           return ValueSet::single(ctx->nvalues, ctx->err_v);
         }});
  }
  return Nmatrix(std::move(names), std::move(designated), std::move(conns));
}

Formula enc(std::uint64_t k) {
  Formula f = Formula::apply("zero", {});
  for (std::uint64_t i = 0; i < k; ++i) f = Formula::apply("suc", {f});
  return f;
}

Formula seq(const CounterMachine& m, std::span<const Configuration> configs) {
  Formula f = Formula::apply("eps", {});
  for (const Configuration& c : configs) {
    std::vector<Formula> kids;
    kids.reserve(m.counters() + 1);
    kids.push_back(std::move(f));
    for (std::uint64_t x : c.counters) kids.push_back(enc(x));
    f = Formula::apply("step_" + c.state, std::move(kids));
  }
  return f;
}

std::optional<std::uint64_t> enc_literal(const Formula& f) {
  const Formula* cur = &f;
  std::uint64_t k = 0;
  while (!cur->is_variable() && cur->head() == "suc") {
    ++k;
    cur = &cur->children()[0];
  }
  if (cur->is_variable() || cur->head() != "zero") return std::nullopt;
  return k;
}

std::optional<std::vector<Configuration>> decode_seq(const Formula& f,
                                                     const CounterMachine& m) {
  std::vector<const Formula*> steps; // outermost first
  const Formula* cur = &f;
  while (true) {
    if (cur->is_variable()) return std::nullopt;
    if (cur->head() == "eps") break;
    if (cur->head().rfind("step_", 0) != 0) return std::nullopt;
    std::string state = cur->head().substr(5);
    if (!m.is_state(state)) return std::nullopt;
    if (static_cast<int>(cur->children().size()) != m.counters() + 1)
      return std::nullopt;
    steps.push_back(cur);
    cur = &cur->children()[0];
  }
  std::vector<Configuration> out;
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
    Configuration c;
    c.state = (*it)->head().substr(5);
    for (int j = 1; j <= m.counters(); ++j) {
      auto k = enc_literal((*it)->children()[j]);
      if (!k) return std::nullopt;
      c.counters.push_back(*k);
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::string NamedValuation::tag() const {
  if (kind == Kind::V0Eq) return "v0=";
  return "v" + std::to_string(k);
}

namespace {

/// tag id of enc(j) under the valuation, following the case tables
int enc_tag(const NamedValuation& v, std::uint64_t j) {
  if (v.kind == NamedValuation::Kind::V0Eq) {
    if (j == 0) return 0;
    if (j == 1) return 2;
    return 3;
  }
  if (j <= v.k) return 1;
  if (j == v.k + 1) return 2;
  return 3;
}

} // namespace

Value eval_named(const Reduction& r, const NamedValuation& v,
                 const Formula& f) {
  SubformulaDag dag = SubformulaDag::build(f);
  if (!dag.vars().empty())
    throw Error("named valuations evaluate closed formulas only");
  const Nmatrix& M = r.matrix();
  std::vector<Value> vals(dag.size());
  std::vector<std::optional<std::uint64_t>> enck(dag.size());
  std::vector<Value> args;
  for (std::size_t i = 0; i < dag.size(); ++i) {
    const auto& e = dag.entries()[i];
    const std::string& h = e.term.head();
    if (h == "zero") {
      enck[i] = 0;
      vals[i] = enc_tag(v, 0);
    } else if (h == "eps") {
      vals[i] = r.init_value();
    } else if (h == "suc") {
      auto under = enck[e.child_index[0]];
      if (under) {
        enck[i] = *under + 1;
        vals[i] = enc_tag(v, *under + 1);
      } else {
        vals[i] = r.error_value();
      }
    } else {
      args.clear();
      for (int c : e.child_index) args.push_back(vals[c]);
      auto cid = M.connective_id(h);
      if (!cid) throw Error("connective '" + h + "' is not in this signature");
      Value got = r.error_value();
      bool single = M.cell(*cid, args).is_singleton(&got);
      assert(single);
      (void)single;
      vals[i] = got;
    }
  }
  return vals[dag.roots()[0]];
}

NamedValuation mu_select(MuKind kind, std::uint64_t a, std::uint64_t b) {
  switch (kind) {
    case MuKind::Plus:
      if (b >= a + 1) return NamedValuation::vk(a);
      if (a != 0) return NamedValuation::vk(a - 1);
      return NamedValuation::v0eq();
    case MuKind::Minus:
      if (a >= 2 && b + 2 <= a) return NamedValuation::vk(a - 2);
      if (a != 0) return NamedValuation::vk(a - 1);
      return NamedValuation::v0eq();
    case MuKind::Neq:
      if (a == 0) return NamedValuation::v0eq();
      return NamedValuation::vk(a - 1);
    case MuKind::Eq:
      return NamedValuation::v0eq();
  }
  throw Error("unreachable");
}

std::optional<FalsifyResult> falsify(const Reduction& r, const Formula& f) {
  SubformulaDag dag = SubformulaDag::build(f);
  if (!dag.vars().empty())
    throw Error("falsify takes closed formulas only");
  std::uint64_t maxenc = 0;
  for (const auto& e : dag.entries())
    if (auto k = enc_literal(e.term)) maxenc = std::max(maxenc, *k);

  std::vector<NamedValuation> cands;
  cands.push_back(NamedValuation::v0eq());
  // vk for k beyond (max enc literal)+2 acts like k = maxenc+2 on Sub(f)
  for (std::uint64_t k = 0; k <= maxenc + 2; ++k)
    cands.push_back(NamedValuation::vk(k));

  for (const NamedValuation& v : cands) {
    Value got = eval_named(r, v, f);
    if (!r.matrix().is_designated(got)) return FalsifyResult{v, got};
  }
  return std::nullopt;
}

std::vector<Formula> theorem_candidates(const Reduction& r, int max_distinct) {
  struct Info {
    Formula f;
    Value v0;
    std::vector<int> subs; // sorted ids, including self
    std::optional<std::uint64_t> enck;
  };
  std::vector<Info> clean;
  std::unordered_map<Formula, int, FormulaHash> ids;
  const Nmatrix& M = r.matrix();
  const CounterMachine& mach = r.machine();
  const NamedValuation v0 = NamedValuation::v0eq();

  auto insert = [&](Formula f, Value val, std::vector<int> subs,
                    std::optional<std::uint64_t> enck) {
    int id = static_cast<int>(clean.size());
    subs.push_back(id);
    ids.emplace(f, id);
    clean.push_back(Info{std::move(f), val, std::move(subs), enck});
  };

  if (max_distinct >= 1) {
    insert(Formula::apply("zero", {}), enc_tag(v0, 0), {}, 0);
    insert(Formula::apply("eps", {}), r.init_value(), {}, std::nullopt);
  }

  auto union_size_within = [&](std::span<const int> kid_ids,
                               std::vector<int>& out) {
    out.clear();
    for (int kid : kid_ids)
      out.insert(out.end(), clean[kid].subs.begin(), clean[kid].subs.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return static_cast<int>(out.size());
  };

  const int n = mach.counters();
  std::vector<int> scratch;
  bool grew = true;
  while (grew) {
    grew = false;
    const int sz = static_cast<int>(clean.size());

    // suc over enc literals
    for (int i = 0; i < sz; ++i) {
      if (!clean[i].enck) continue;
      Formula f = Formula::apply("suc", {clean[i].f});
      if (ids.count(f)) continue;
      if (static_cast<int>(clean[i].subs.size()) + 1 > max_distinct) continue;
      std::uint64_t k = *clean[i].enck + 1;
      insert(std::move(f), enc_tag(v0, k), clean[i].subs, k);
      grew = true;
    }

    // step_q over tuples of clean formulas; the v0eq value of the result
    // decides cleanliness (err cells are exactly the unclean extensions)
    for (int q = 0; q < static_cast<int>(mach.states().size()); ++q) {
      int conn = r.conn_step(q);
      std::vector<int> tuple(n + 1, 0);
      std::vector<Value> args(n + 1);
      auto rec = [&](auto&& self, int pos) -> void {
        if (pos == n + 1) {
          if (union_size_within(tuple, scratch) + 1 > max_distinct) return;
          for (int j = 0; j <= n; ++j) args[j] = clean[tuple[j]].v0;
          Value out;
          if (!M.cell(conn, args).is_singleton(&out) ||
              out == r.error_value())
            return;
          std::vector<Formula> kids;
          for (int j = 0; j <= n; ++j) kids.push_back(clean[tuple[j]].f);
          Formula f =
              Formula::apply("step_" + mach.states()[q], std::move(kids));
          if (ids.count(f)) return;
          insert(std::move(f), out, scratch, std::nullopt);
          grew = true;
          return;
        }
        for (int i = 0; i < sz; ++i) {
          tuple[pos] = i;
          self(self, pos + 1);
        }
      };
      if (max_distinct >= 2) rec(rec, 0);
    }
  }

  std::stable_sort(clean.begin(), clean.end(),
                   [](const Info& a, const Info& b) {
                     return a.subs.size() < b.subs.size();
                   });
  std::vector<Formula> out;
  out.reserve(clean.size());
  for (Info& i : clean) out.push_back(std::move(i.f));
  return out;
}

} // namespace nmlab
