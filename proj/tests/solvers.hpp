#pragma once

#include "chronosat/smt/solver.hpp"

namespace testing {

inline chronosat::smt::SolverConfig z3_config() {
  chronosat::smt::SolverConfig c;
  c.command = CHRONOSAT_Z3;
  c.args = {"-in"};
  return c;
}

inline chronosat::smt::SolverConfig cvc5_config() {
  chronosat::smt::SolverConfig c;
  c.command = CHRONOSAT_PYTHON;
  c.args = {CHRONOSAT_CVC5_WRAPPER};
  return c;
}

inline bool cvc5_available() { return CHRONOSAT_CVC5_AVAILABLE; }

}  // namespace testing
