#include "nmlab/formula.hpp"

#include <unordered_map>

namespace nmlab {

void Signature::add(std::string name, int arity) {
  if (name.empty()) throw Error("connective name must be nonempty");
  if (arity < 0) throw Error("connective '" + name + "': negative arity");
  if (contains(name)) throw Error("duplicate connective '" + name + "'");
  conns_.emplace_back(std::move(name), arity);
}

int Signature::find(std::string_view name) const {
  for (std::size_t i = 0; i < conns_.size(); ++i)
    if (conns_[i].first == name) return static_cast<int>(i);
  return -1;
}

std::optional<int> Signature::arity(std::string_view name) const {
  int i = find(name);
  if (i < 0) return std::nullopt;
  return conns_[i].second;
}

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

} // namespace

Formula Formula::variable(std::string name) {
  auto n = std::make_shared<Node>();
  n->head = std::move(name);
  n->var = true;
  n->nodes = 1;
  n->hash = mix(std::hash<std::string>{}(n->head), 0x7a);
  return Formula(std::move(n));
}

Formula Formula::apply(std::string connective, std::vector<Formula> children) {
  auto n = std::make_shared<Node>();
  n->head = std::move(connective);
  n->kids = std::move(children);
  n->var = false;
  n->nodes = 1;
  std::size_t h = std::hash<std::string>{}(n->head);
  for (const Formula& k : n->kids) {
    n->nodes += k.node_count();
    h = mix(h, k.hash());
  }
  n->hash = h;
  return Formula(std::move(n));
}

bool Formula::operator==(const Formula& o) const {
  if (n_ == o.n_) return true;
  if (n_->hash != o.n_->hash || n_->var != o.n_->var ||
      n_->nodes != o.n_->nodes || n_->head != o.n_->head ||
      n_->kids.size() != o.n_->kids.size())
    return false;
  for (std::size_t i = 0; i < n_->kids.size(); ++i)
    if (n_->kids[i] != o.n_->kids[i]) return false;
  return true;
}

namespace {

void print_to(const Formula& f, std::string& out) {
  out += f.head();
  if (!f.is_variable() && !f.children().empty()) {
    out += '(';
    bool first = true;
    for (const Formula& k : f.children()) {
      if (!first) out += ',';
      first = false;
      print_to(k, out);
    }
    out += ')';
  }
}

} // namespace

std::string Formula::str() const {
  std::string out;
  out.reserve(static_cast<std::size_t>(node_count()) * 4);
  print_to(*this, out);
  return out;
}

std::string format_formula(const Formula& f) { return f.str(); }

namespace {

bool ident_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }

class Parser {
public:
  Parser(std::string_view text, const Signature& sig)
      : text_(text), sig_(sig) {}

  Formula parse() {
    Formula f = term();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input");
    return f;
  }

private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("position " + std::to_string(pos_), msg);
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
            text_[pos_] == '\r'))
      ++pos_;
  }

  std::string ident() {
    skip_ws();
    if (pos_ >= text_.size() || !ident_start(text_[pos_]))
      fail("expected identifier");
    std::size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  Formula term() {
    std::size_t at = pos_;
    std::string name = ident();
    skip_ws();
    std::optional<int> ar = sig_.arity(name);
    if (pos_ < text_.size() && text_[pos_] == '(') {
      ++pos_;
      std::vector<Formula> kids;
      kids.push_back(term());
      skip_ws();
      while (pos_ < text_.size() && text_[pos_] == ',') {
        ++pos_;
        kids.push_back(term());
        skip_ws();
      }
      if (pos_ >= text_.size() || text_[pos_] != ')') fail("expected ')'");
      ++pos_;
      if (!ar) {
        pos_ = at;
        fail("unknown connective '" + name + "'");
      }
      if (*ar != static_cast<int>(kids.size())) {
        pos_ = at;
        fail("connective '" + name + "' expects " + std::to_string(*ar) +
             " arguments, got " + std::to_string(kids.size()));
      }
      return Formula::apply(std::move(name), std::move(kids));
    }
    if (ar) {
      if (*ar != 0) {
        pos_ = at;
        fail("connective '" + name + "' expects " + std::to_string(*ar) +
             " arguments, got 0");
      }
      return Formula::apply(std::move(name), {});
    }
    return Formula::variable(std::move(name));
  }

  std::string_view text_;
  const Signature& sig_;
  std::size_t pos_ = 0;
};

} // namespace

Formula parse_formula(std::string_view text, const Signature& sig) {
  return Parser(text, sig).parse();
}

std::vector<std::string> variables(const Formula& f) {
  std::vector<std::string> out;
  std::vector<const Formula*> stack{&f};
  // explicit pre-order walk, left to right
  while (!stack.empty()) {
    const Formula* cur = stack.back();
    stack.pop_back();
    if (cur->is_variable()) {
      bool seen = false;
      for (const std::string& v : out)
        if (v == cur->head()) { seen = true; break; }
      if (!seen) out.push_back(cur->head());
    } else {
      for (auto it = cur->children().rbegin(); it != cur->children().rend();
           ++it)
        stack.push_back(&*it);
    }
  }
  return out;
}

SubformulaDag SubformulaDag::build(const Formula& root) {
  return build(std::span<const Formula>(&root, 1));
}

SubformulaDag SubformulaDag::build(std::span<const Formula> roots) {
  SubformulaDag dag;
  std::unordered_map<Formula, int, FormulaHash> index;

  // post-order insertion keeps every child before its parents
  auto visit = [&](auto&& self, const Formula& f) -> int {
    auto it = index.find(f);
    if (it != index.end()) return it->second;
    Entry e{f, {}, -1};
    for (const Formula& k : f.children())
      e.child_index.push_back(self(self, k));
    if (f.is_variable()) {
      int vi = -1;
      for (std::size_t i = 0; i < dag.vars_.size(); ++i)
        if (dag.vars_[i] == f.head()) vi = static_cast<int>(i);
      if (vi < 0) {
        vi = static_cast<int>(dag.vars_.size());
        dag.vars_.push_back(f.head());
      }
      e.var_index = vi;
    }
    int id = static_cast<int>(dag.entries_.size());
    dag.entries_.push_back(std::move(e));
    index.emplace(f, id);
    return id;
  };

  for (const Formula& r : roots) dag.roots_.push_back(visit(visit, r));
  return dag;
}

} // namespace nmlab
