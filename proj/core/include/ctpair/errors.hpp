#pragma once

#include <stdexcept>
#include <string>

namespace ctpair {

enum class errc {
  no_solution,
  mismatched_ambient,
  not_bilinear,
  exponent_mismatch,
  degree_too_high,
  group_mismatch,
  not_a_subgroup,
  not_surjective,
  not_a_cocycle,
  obstruction_in_h3,
  no_local_lift,
  not_in_selmer,
  incompatible_ends,
  not_commutative_ladder,
  not_a_section,
  not_realizable,
  assumption_one_fails,
  no_homomorphic_section,
  doubling_not_surjective,
  bad_quadratic_refinement,
  not_strictly_epic,
  parse_error,
  invalid_argument,
};

const char* errc_name(errc c);

struct error : std::runtime_error {
  errc code;
  error(errc c, const std::string& msg)
      : std::runtime_error(std::string(errc_name(c)) + ": " + msg), code(c) {}
};

[[noreturn]] inline void fail(errc c, const std::string& msg) { throw error(c, msg); }

} // namespace ctpair
