#include "nmlab/machine.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace nmlab {

CounterMachine::CounterMachine(int counters, std::vector<std::string> states,
                               std::string init,
                               std::map<std::string, Transition> delta)
    : counters_(counters), states_(std::move(states)), init_(std::move(init)),
      delta_(std::move(delta)) {
  if (counters_ < 1) throw Error("machine needs at least one counter");
  if (states_.empty()) throw Error("machine needs at least one state");
  for (std::size_t i = 0; i < states_.size(); ++i)
    for (std::size_t j = i + 1; j < states_.size(); ++j)
      if (states_[i] == states_[j])
        throw Error("duplicate state '" + states_[i] + "'");
  if (!is_state(init_)) throw Error("initial state '" + init_ + "' undeclared");
  for (const auto& [q, t] : delta_) {
    if (!is_state(q)) throw Error("transition from undeclared state '" + q + "'");
    if (t.counter < 1 || t.counter > counters_)
      throw Error("state '" + q + "': counter index out of range");
    auto check = [&](const std::string& s) {
      if (!is_state(s))
        throw Error("state '" + q + "': undeclared target '" + s + "'");
    };
    if (t.kind == Transition::Kind::Inc) {
      check(t.target);
    } else {
      check(t.on_zero);
      check(t.on_nonzero);
    }
  }
}

int CounterMachine::state_index(const std::string& q) const {
  auto it = std::find(states_.begin(), states_.end(), q);
  if (it == states_.end()) throw Error("unknown state '" + q + "'");
  return static_cast<int>(it - states_.begin());
}

bool CounterMachine::is_state(const std::string& q) const {
  return std::find(states_.begin(), states_.end(), q) != states_.end();
}

bool CounterMachine::is_halting(const std::string& q) const {
  return delta_.find(q) == delta_.end();
}

const Transition* CounterMachine::transition(const std::string& q) const {
  auto it = delta_.find(q);
  return it == delta_.end() ? nullptr : &it->second;
}

Configuration CounterMachine::initial() const {
  return Configuration{init_,
                       std::vector<std::uint64_t>(counters_, 0)};
}

Configuration nxt(const CounterMachine& m, const Configuration& cfg) {
  const Transition* t = m.transition(cfg.state);
  if (!t)
    throw Error("nxt undefined: '" + cfg.state + "' is a halting state");
  Configuration out = cfg;
  const int i = t->counter - 1;
  if (t->kind == Transition::Kind::Inc) {
    out.state = t->target;
    ++out.counters[i];
  } else if (cfg.counters[i] == 0) {
    out.state = t->on_zero;
  } else {
    out.state = t->on_nonzero;
    --out.counters[i];
  }
  return out;
}

Trace run(const CounterMachine& m, std::uint64_t max_steps) {
  if (max_steps < 1) throw Error("max_steps must be positive");
  Trace tr;
  tr.configs.push_back(m.initial());
  for (std::uint64_t s = 0; s < max_steps; ++s) {
    if (m.is_halting(tr.configs.back().state)) {
      tr.halted = true;
      return tr;
    }
    tr.configs.push_back(nxt(m, tr.configs.back()));
  }
  tr.halted = m.is_halting(tr.configs.back().state);
  return tr;
}

namespace {

[[noreturn]] void fail(int lineno, const std::string& msg) {
  throw ParseError("line " + std::to_string(lineno), msg);
}

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

} // namespace

CounterMachine load_machine(std::istream& in) {
  int counters = -1;
  std::vector<std::string> states;
  std::string init;
  std::map<std::string, Transition> delta;

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = tokens(line);
    if (toks.empty()) continue;
    const std::string& kw = toks[0];
    if (kw == "counters") {
      if (counters >= 0) fail(lineno, "duplicate 'counters' line");
      if (toks.size() != 2) fail(lineno, "expected: counters N");
      try {
        counters = std::stoi(toks[1]);
      } catch (...) {
        fail(lineno, "bad counter count '" + toks[1] + "'");
      }
      if (counters < 1) fail(lineno, "need at least one counter");
    } else if (kw == "states") {
      if (!states.empty()) fail(lineno, "duplicate 'states' line");
      states.assign(toks.begin() + 1, toks.end());
      if (states.empty()) fail(lineno, "'states' needs at least one name");
    } else if (kw == "init") {
      if (!init.empty()) fail(lineno, "duplicate 'init' line");
      if (toks.size() != 2) fail(lineno, "expected: init STATE");
      init = toks[1];
    } else {
      // transition:  STATE inc I TARGET   |   STATE test I ZERO NONZERO
      if (delta.count(kw)) fail(lineno, "duplicate transition for '" + kw + "'");
      if (toks.size() < 2) fail(lineno, "incomplete transition");
      Transition t;
      int idx;
      try {
        idx = toks.size() >= 3 ? std::stoi(toks[2]) : -1;
      } catch (...) {
        fail(lineno, "bad counter index '" + toks[2] + "'");
      }
      t.counter = idx;
      if (toks[1] == "inc") {
        if (toks.size() != 4) fail(lineno, "expected: STATE inc I TARGET");
        t.kind = Transition::Kind::Inc;
        t.target = toks[3];
      } else if (toks[1] == "test") {
        if (toks.size() != 5) fail(lineno, "expected: STATE test I ZERO NONZERO");
        t.kind = Transition::Kind::Test;
        t.on_zero = toks[3];
        t.on_nonzero = toks[4];
      } else {
        fail(lineno, "unknown transition kind '" + toks[1] + "'");
      }
      delta.emplace(kw, std::move(t));
    }
  }
  if (counters < 0) throw Error("machine file has no 'counters' line");
  if (states.empty()) throw Error("machine file has no 'states' line");
  if (init.empty()) throw Error("machine file has no 'init' line");
  return CounterMachine(counters, std::move(states), std::move(init),
                        std::move(delta));
}

CounterMachine load_machine_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return load_machine(in);
}

CounterMachine parse_machine(const std::string& text) {
  std::istringstream in(text);
  return load_machine(in);
}

} // namespace nmlab
