#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qkq/hyperfun.hpp"
#include "qkq/orbits.hpp"

namespace qkq::cli {

enum Exit { Pass = 0, ThresholdFail = 1, InputError = 2, Empty = 3 };

int exit_code(ErrorKind k);

GeneratorForm parse_form_literal(const std::string& s);
// 3x3x4 nested array of reals, row-major quaternion entries (w,x,y,z)
HMatrix3 parse_matrix_json(const std::string& s);
// "mono:a,b[,charge];pedersen:a,b,c;dipole:c;tripole:c"
PoleSet parse_poles(const std::string& s);
std::vector<double> parse_list(const std::string& s);

struct Axis {
  double lo = 0, hi = 1;
  int n = 1;
};
// "lo:hi:n,lo:hi:n,..." or a single count
std::vector<Axis> parse_grid(const std::string& s);

unsigned worker_threads();

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qkq::cli
