#include "nmlab/nmatrix_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "nmlab/error.hpp"

namespace nmlab {

namespace {

// cells of connectives with at most this many entries are materialized
constexpr std::uint64_t kDenseLimit = 1u << 16;

struct Row {
  std::vector<Value> args; // -1 for wildcard
  ValueSet out;
  int specificity;
  int order;
};

struct PendingConn {
  std::string name;
  int arity;
  std::vector<Row> rows;
};

std::vector<std::string> tokens(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) {
    if (tok[0] == '#') break;
    out.push_back(tok);
  }
  return out;
}

[[noreturn]] void fail(int lineno, const std::string& msg) {
  throw ParseError("line " + std::to_string(lineno), msg);
}

/// Rule-backed cell lookup shared by lazy connectives.
struct RowTable {
  std::vector<Row> rows; // sorted: specificity desc, then order desc
  int universe;

  const Row* match(std::span<const Value> args) const {
    for (const Row& r : rows) {
      bool ok = true;
      for (std::size_t i = 0; i < args.size(); ++i)
        if (r.args[i] >= 0 && r.args[i] != args[i]) { ok = false; break; }
      if (ok) return &r;
    }
    return nullptr;
  }
};

} // namespace

Nmatrix load_nmatrix(std::istream& in) {
  std::vector<std::string> value_names;
  std::map<std::string, Value> value_ids;
  bool have_values = false, have_designated = false;
  std::vector<Value> designated;
  std::vector<PendingConn> conns;
  std::map<std::string, int> conn_ids;

  auto value_of = [&](const std::string& tok, int lineno) {
    auto it = value_ids.find(tok);
    if (it == value_ids.end()) fail(lineno, "unknown value '" + tok + "'");
    return it->second;
  };

  std::string line;
  int lineno = 0;
  int row_order = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = tokens(line);
    if (toks.empty()) continue;
    const std::string& kw = toks[0];
    if (kw == "values") {
      if (have_values) fail(lineno, "duplicate 'values' line");
      have_values = true;
      if (toks.size() < 2) fail(lineno, "'values' needs at least one name");
      for (std::size_t i = 1; i < toks.size(); ++i) {
        if (toks[i] == "*") fail(lineno, "'*' is not a valid value name");
        if (!value_ids.emplace(toks[i], static_cast<Value>(value_names.size()))
                 .second)
          fail(lineno, "duplicate value '" + toks[i] + "'");
        value_names.push_back(toks[i]);
      }
    } else if (kw == "designated") {
      if (!have_values) fail(lineno, "'designated' before 'values'");
      if (have_designated) fail(lineno, "duplicate 'designated' line");
      have_designated = true;
      for (std::size_t i = 1; i < toks.size(); ++i)
        designated.push_back(value_of(toks[i], lineno));
    } else if (kw == "conn") {
      if (!have_values) fail(lineno, "'conn' before 'values'");
      if (toks.size() != 3) fail(lineno, "expected: conn NAME ARITY");
      int arity;
      try {
        arity = std::stoi(toks[2]);
      } catch (...) {
        fail(lineno, "bad arity '" + toks[2] + "'");
      }
      if (arity < 0) fail(lineno, "negative arity");
      if (!conn_ids.emplace(toks[1], static_cast<int>(conns.size())).second)
        fail(lineno, "duplicate connective '" + toks[1] + "'");
      conns.push_back(PendingConn{toks[1], arity, {}});
    } else {
      // interpretation row:  NAME arg... = val...
      auto it = conn_ids.find(kw);
      if (it == conn_ids.end())
        fail(lineno, "unknown directive or connective '" + kw + "'");
      PendingConn& pc = conns[it->second];
      if (static_cast<int>(toks.size()) < pc.arity + 2 ||
          toks[pc.arity + 1] != "=")
        fail(lineno, "expected: " + pc.name + " " +
                         std::to_string(pc.arity) + " argument(s), then '='");
      Row row;
      row.specificity = 0;
      row.order = row_order++;
      for (int i = 0; i < pc.arity; ++i) {
        const std::string& tok = toks[1 + i];
        if (tok == "*") {
          row.args.push_back(-1);
        } else {
          row.args.push_back(value_of(tok, lineno));
          ++row.specificity;
        }
      }
      row.out = ValueSet(static_cast<int>(value_names.size()));
      for (std::size_t i = pc.arity + 2; i < toks.size(); ++i)
        row.out.set(value_of(toks[i], lineno));
      if (row.out.empty()) fail(lineno, "row must list at least one value");
      pc.rows.push_back(std::move(row));
    }
  }
  if (!have_values) throw Error("matrix file has no 'values' line");

  const int n = static_cast<int>(value_names.size());
  std::vector<Nmatrix::Conn> built;
  for (PendingConn& pc : conns) {
    auto table = std::make_shared<RowTable>();
    table->universe = n;
    table->rows = std::move(pc.rows);
    std::stable_sort(table->rows.begin(), table->rows.end(),
                     [](const Row& a, const Row& b) {
                       if (a.specificity != b.specificity)
                         return a.specificity > b.specificity;
                       return a.order > b.order;
                     });
    std::uint64_t cells = 1;
    for (int i = 0; i < pc.arity && cells <= kDenseLimit; ++i) cells *= n;
    if (cells <= kDenseLimit) {
      auto dense = std::make_shared<std::vector<ValueSet>>();
      dense->reserve(cells);
      bool total = for_each_tuple(pc.arity, n, [&](std::span<const Value> t) {
        const Row* r = table->match(t);
        if (!r) return false;
        dense->push_back(r->out);
        return true;
      });
      if (!total)
        throw Error("connective '" + pc.name +
                    "': some cell is covered by no row");
      int arity = pc.arity;
      built.push_back(Nmatrix::Conn{
          pc.name, pc.arity,
          [dense, n, arity](std::span<const Value> t) {
            std::size_t idx = 0;
            for (int i = 0; i < arity; ++i)
              idx = idx * static_cast<std::size_t>(n) +
                    static_cast<std::size_t>(t[i]);
            return (*dense)[idx];
          }});
    } else {
      // too large to materialize: totality needs a catch-all row
      bool catchall = false;
      for (const Row& r : table->rows)
        if (r.specificity == 0) { catchall = true; break; }
      if (!catchall)
        throw Error("connective '" + pc.name +
                    "' is too large to check cell by cell and has no "
                    "all-wildcard default row");
      built.push_back(Nmatrix::Conn{pc.name, pc.arity,
                                    [table](std::span<const Value> t) {
                                      return table->match(t)->out;
                                    }});
    }
  }
  return Nmatrix(std::move(value_names), std::move(designated),
                 std::move(built));
}

Nmatrix load_nmatrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return load_nmatrix(in);
}

Nmatrix parse_nmatrix(const std::string& text) {
  std::istringstream in(text);
  return load_nmatrix(in);
}

namespace {

std::string set_names(const Nmatrix& m, const ValueSet& s) {
  std::string out;
  for (Value v = s.first(); v >= 0; v = s.next(v)) {
    if (!out.empty()) out += ' ';
    out += m.value_name(v);
  }
  return out;
}

} // namespace

void save_nmatrix(const Nmatrix& m, std::ostream& out) {
  out << "values";
  for (const std::string& v : m.value_names()) out << ' ' << v;
  out << "\ndesignated";
  out << (m.designated().empty() ? "" : " ") << set_names(m, m.designated());
  out << '\n';
  for (int ci = 0; ci < m.connective_count(); ++ci) {
    const auto& c = m.connective(ci);
    out << "conn " << c.name << ' ' << c.arity << '\n';
    // find the most frequent cell; it becomes the default row when it
    // saves enough explicit rows
    std::map<std::string, std::uint64_t> freq;
    for_each_tuple(c.arity, m.value_count(), [&](std::span<const Value> t) {
      ++freq[set_names(m, c.cells(t))];
      return true;
    });
    std::string dflt;
    std::uint64_t best = 0, total = 0;
    for (const auto& [k, n] : freq) {
      total += n;
      if (n > best) { best = n; dflt = k; }
    }
    bool use_default = c.arity > 0 && freq.size() > 1 && best * 2 >= total;
    for_each_tuple(c.arity, m.value_count(), [&](std::span<const Value> t) {
      std::string cell = set_names(m, c.cells(t));
      if (use_default && cell == dflt) return true;
      out << c.name;
      for (Value v : t) out << ' ' << m.value_name(v);
      out << " = " << cell << '\n';
      return true;
    });
    if (use_default) {
      out << c.name;
      for (int i = 0; i < c.arity; ++i) out << " *";
      out << " = " << dflt << '\n';
    }
  }
}

void save_nmatrix_file(const Nmatrix& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  save_nmatrix(m, out);
}

std::string format_nmatrix(const Nmatrix& m) {
  std::ostringstream out;
  save_nmatrix(m, out);
  return out.str();
}

} // namespace nmlab
