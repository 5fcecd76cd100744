// Shared hand-built sentences for tests.
#pragma once

#include <sstream>
#include <string>

#include "pathsrl/conll.hpp"

namespace fixtures {

// "he had trouble raising funds": `raising` is the only marked predicate,
// with `he` as A0 and `funds` as A1.
inline const char* kControlSentence =
    "1\the\the\the\tN\tN\t_\t_\t2\t2\tSBJ\tSBJ\t_\t_\tA0\n"
    "2\thad\thad\thad\tV\tV\t_\t_\t0\t0\tROOT\tROOT\t_\t_\t_\n"
    "3\ttrouble\ttrouble\ttrouble\tN\tN\t_\t_\t2\t2\tOBJ\tOBJ\t_\t_\t_\n"
    "4\traising\traising\traising\tV\tV\t_\t_\t3\t3\tNMOD\tNMOD\tY\traising.01\t_\n"
    "5\tfunds\tfunds\tfunds\tN\tN\t_\t_\t4\t4\tOBJ\tOBJ\t_\t_\tA1\n"
    "\n";

inline pathsrl::Sentence control_sentence() {
  std::istringstream in(kControlSentence);
  return pathsrl::read_corpus(in).front();
}

}  // namespace fixtures
