#include "nmlab/nmatrix.hpp"

#include <unordered_map>

#include "nmlab/error.hpp"

namespace nmlab {

struct Nmatrix::Impl {
  std::vector<std::string> names;
  std::unordered_map<std::string, Value> name_index;
  ValueSet designated;
  std::vector<Conn> conns;
  std::unordered_map<std::string, int> conn_index;
  Signature sig;
  mutable std::atomic<int> deterministic{-1};
};

Nmatrix::Nmatrix(std::vector<std::string> value_names,
                 std::vector<Value> designated, std::vector<Conn> connectives) {
  auto impl = std::make_shared<Impl>();
  impl->names = std::move(value_names);
  if (impl->names.empty()) throw Error("matrix needs at least one value");
  for (std::size_t i = 0; i < impl->names.size(); ++i) {
    auto [it, fresh] =
        impl->name_index.emplace(impl->names[i], static_cast<Value>(i));
    if (!fresh) throw Error("duplicate value name '" + impl->names[i] + "'");
  }
  impl->designated = ValueSet(static_cast<int>(impl->names.size()));
  for (Value v : designated) {
    if (v < 0 || v >= static_cast<Value>(impl->names.size()))
      throw Error("designated value id out of range");
    impl->designated.set(v);
  }
  impl->conns = std::move(connectives);
  for (std::size_t i = 0; i < impl->conns.size(); ++i) {
    const Conn& c = impl->conns[i];
    if (!c.cells) throw Error("connective '" + c.name + "' has no cells");
    impl->sig.add(c.name, c.arity);
    impl->conn_index.emplace(c.name, static_cast<int>(i));
  }
  impl_ = std::move(impl);
}

int Nmatrix::value_count() const {
  return static_cast<int>(impl_->names.size());
}
const std::vector<std::string>& Nmatrix::value_names() const {
  return impl_->names;
}
const std::string& Nmatrix::value_name(Value v) const {
  return impl_->names.at(v);
}
std::optional<Value> Nmatrix::value_id(std::string_view name) const {
  auto it = impl_->name_index.find(std::string(name));
  if (it == impl_->name_index.end()) return std::nullopt;
  return it->second;
}

const ValueSet& Nmatrix::designated() const { return impl_->designated; }
bool Nmatrix::is_designated(Value v) const { return impl_->designated.test(v); }

int Nmatrix::connective_count() const {
  return static_cast<int>(impl_->conns.size());
}
const Nmatrix::Conn& Nmatrix::connective(int i) const {
  return impl_->conns.at(i);
}
std::optional<int> Nmatrix::connective_id(std::string_view name) const {
  auto it = impl_->conn_index.find(std::string(name));
  if (it == impl_->conn_index.end()) return std::nullopt;
  return it->second;
}
const Signature& Nmatrix::signature() const { return impl_->sig; }

ValueSet Nmatrix::cell(int conn, std::span<const Value> args) const {
  return impl_->conns.at(conn).cells(args);
}

bool for_each_tuple(int arity, int universe,
                    const std::function<bool(std::span<const Value>)>& fn) {
  std::vector<Value> t(arity, 0);
  if (arity == 0) return fn(t);
  while (true) {
    if (!fn(t)) return false;
    int i = arity - 1;
    while (i >= 0 && ++t[i] == universe) t[i--] = 0;
    if (i < 0) return true;
  }
}

bool Nmatrix::is_deterministic() const {
  int cached = impl_->deterministic.load();
  if (cached >= 0) return cached != 0;
  bool det = true;
  for (const Conn& c : impl_->conns) {
    det = for_each_tuple(c.arity, value_count(),
                         [&](std::span<const Value> t) {
                           return c.cells(t).is_singleton();
                         });
    if (!det) break;
  }
  impl_->deterministic.store(det ? 1 : 0);
  return det;
}

ValueSet Nmatrix::infectious_values() const {
  const int n = value_count();
  ValueSet candidates(n, /*full=*/true);
  // diagonal first: cheap shrink before the full containing-tuple sweep
  for (const Conn& c : impl_->conns) {
    if (c.arity == 0) continue;
    std::vector<Value> t(c.arity);
    for (Value v = 0; v < n; ++v) {
      if (!candidates.test(v)) continue;
      std::fill(t.begin(), t.end(), v);
      Value got;
      if (!c.cells(t).is_singleton(&got) || got != v) candidates.reset(v);
    }
  }
  for (Value v = candidates.first(); v >= 0; v = candidates.next(v)) {
    bool ok = true;
    for (const Conn& c : impl_->conns) {
      if (c.arity == 0) continue;
      // every tuple containing v: fix the first occurrence at position i,
      // earlier positions range over A\{v}, later ones over all of A
      for (int i = 0; i < c.arity && ok; ++i) {
        std::vector<Value> t(c.arity, 0);
        t[i] = v;
        auto step = [&](auto&& self, int pos) -> bool {
          if (pos == c.arity) {
            Value got;
            return c.cells(t).is_singleton(&got) && got == v;
          }
          if (pos == i) return self(self, pos + 1);
          for (Value w = 0; w < n; ++w) {
            if (pos < i && w == v) continue;
            t[pos] = w;
            if (!self(self, pos + 1)) return false;
          }
          return true;
        };
        ok = step(step, 0);
      }
      if (!ok) break;
    }
    if (!ok) candidates.reset(v);
  }
  return candidates;
}

void Nmatrix::validate_cells() const {
  for (const Conn& c : impl_->conns) {
    bool ok = for_each_tuple(c.arity, value_count(),
                             [&](std::span<const Value> t) {
                               return !c.cells(t).empty();
                             });
    if (!ok)
      throw Error("connective '" + c.name + "' has an empty cell");
  }
}

std::uint64_t Nmatrix::total_cells() const {
  std::uint64_t total = 0;
  for (const Conn& c : impl_->conns) {
    std::uint64_t cells = 1;
    for (int i = 0; i < c.arity; ++i) cells *= value_count();
    total += cells;
  }
  return total;
}

} // namespace nmlab
