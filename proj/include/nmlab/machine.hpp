#ifndef NMLAB_MACHINE_HPP
#define NMLAB_MACHINE_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nmlab/error.hpp"

namespace nmlab {

/// One transition of a deterministic counter machine.  Counter indices are
/// 1-based, as in machine descriptions.
struct Transition {
  enum class Kind { Inc, Test };
  Kind kind;
  int counter;
  std::string target;     // Inc: next state
  std::string on_zero;    // Test: state when counter == 0 (unchanged)
  std::string on_nonzero; // Test: state when counter != 0 (decremented)
};

struct Configuration {
  std::string state;
  std::vector<std::uint64_t> counters;
  bool operator==(const Configuration&) const = default;
};

/// A finite trace of configurations starting at (init, 0...0).
struct Trace {
  std::vector<Configuration> configs;
  bool halted = false; // false: step budget ran out first
};

class CounterMachine {
public:
  CounterMachine(int counters, std::vector<std::string> states,
                 std::string init,
                 std::map<std::string, Transition> delta);

  int counters() const { return counters_; }
  const std::vector<std::string>& states() const { return states_; }
  const std::string& init() const { return init_; }
  const std::map<std::string, Transition>& delta() const { return delta_; }

  int state_index(const std::string& q) const;
  bool is_state(const std::string& q) const;
  bool is_halting(const std::string& q) const;
  const Transition* transition(const std::string& q) const;

  Configuration initial() const;

private:
  int counters_;
  std::vector<std::string> states_;
  std::string init_;
  std::map<std::string, Transition> delta_;
};

/// The successor configuration.  Throws when `cfg` is halting.
Configuration nxt(const CounterMachine& m, const Configuration& cfg);

/// Runs from the initial configuration for at most `max_steps` transitions
/// or until a halting state is reached, whichever comes first.
Trace run(const CounterMachine& m, std::uint64_t max_steps);

/// Loads the machine text format:
///
///     counters 1
///     states qinit q1 q2 q3
///     init qinit
///     qinit inc 1 q1
///     q1 test 1 q3 q2    # on-zero target, then on-nonzero target
///
/// States without a transition line are halting.  `#` starts a comment.
CounterMachine load_machine(std::istream& in);
CounterMachine load_machine_file(const std::string& path);
CounterMachine parse_machine(const std::string& text);

} // namespace nmlab

#endif
