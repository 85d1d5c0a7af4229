#ifndef NMLAB_FORMULA_HPP
#define NMLAB_FORMULA_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nmlab/error.hpp"

namespace nmlab {

/// A finite propositional signature: connective names with their arities.
/// Any identifier not declared here is a variable, so a signature fully
/// disambiguates bare identifiers in formula text.
class Signature {
public:
  Signature() = default;

  /// Declares a connective.  Throws on duplicate names or negative arity.
  void add(std::string name, int arity);

  bool contains(std::string_view name) const { return find(name) >= 0; }
  std::optional<int> arity(std::string_view name) const;
  std::size_t size() const { return conns_.size(); }

  /// Declaration order is preserved; it drives every deterministic
  /// iteration in the library (table emission, formula enumeration, ...).
  const std::vector<std::pair<std::string, int>>& connectives() const {
    return conns_;
  }

private:
  int find(std::string_view name) const;
  std::vector<std::pair<std::string, int>> conns_;
};

/// An immutable term over some signature: a variable or a connective
/// applied to child terms.  Copies share structure; structural equality is
/// the one notion of sameness (two equal subterms *are* the same
/// subformula, which is what lets valuations share their value).
class Formula {
public:
  static Formula variable(std::string name);
  static Formula apply(std::string connective, std::vector<Formula> children);

  bool is_variable() const { return n_->var; }
  /// Variable name or connective name.
  const std::string& head() const { return n_->head; }
  const std::vector<Formula>& children() const { return n_->kids; }

  std::size_t hash() const { return n_->hash; }
  int node_count() const { return n_->nodes; }

  bool operator==(const Formula& o) const;
  bool operator!=(const Formula& o) const { return !(*this == o); }

  /// Canonical prefix form: `g(p,g(p,p))`; nullary connectives print bare.
  std::string str() const;

private:
  struct Node {
    std::string head;
    std::vector<Formula> kids;
    bool var;
    std::size_t hash;
    int nodes;
  };
  explicit Formula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

/// Parses the prefix grammar  formula := IDENT | IDENT '(' formula
/// (',' formula)* ')'  with IDENT = [A-Za-z_][A-Za-z0-9_]*.  Identifiers
/// declared in `sig` are connectives (arity-checked), all others are
/// variables.  Throws ParseError with a character position on bad input.
Formula parse_formula(std::string_view text, const Signature& sig);

/// Inverse of parse_formula on canonical forms.
std::string format_formula(const Formula& f);

/// Variable names in order of first occurrence (left to right, outside-in).
std::vector<std::string> variables(const Formula& f);

/// The distinct subformulas of one or more root formulas, children before
/// parents.  Each structurally distinct subterm appears exactly once.
class SubformulaDag {
public:
  struct Entry {
    Formula term;
    std::vector<int> child_index; // empty for variables
    int var_index;                // index into vars(), or -1
  };

  static SubformulaDag build(const Formula& root);
  static SubformulaDag build(std::span<const Formula> roots);

  const std::vector<Entry>& entries() const { return entries_; }
  /// Index of each root within entries() (same order as given).
  const std::vector<int>& roots() const { return roots_; }
  /// Variables of all roots in first-occurrence order.
  const std::vector<std::string>& vars() const { return vars_; }

  std::size_t size() const { return entries_.size(); }

private:
  std::vector<Entry> entries_;
  std::vector<int> roots_;
  std::vector<std::string> vars_;
};

} // namespace nmlab

#endif
