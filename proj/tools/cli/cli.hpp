#pragma once

// Command-line front end. `run` is the whole program minus process plumbing so
// that tests can drive it with in-memory streams.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "berg/cartan.hpp"
#include "berg/hartogs.hpp"

namespace berg::cli {

// Raised for malformed requests; maps to exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A base given on the command line: a Cartan domain or the flat pseudo-domain.
struct BaseSpec {
  std::optional<CartanDomain> domain;  // empty for flat
  int d = 1;

  static BaseSpec parse(const std::string& s);
  bool flat() const { return !domain.has_value(); }
  PolarizedPotential potential(double mu) const;
  BaseInvariants invariants(double mu) const;
  bool contains(std::span<const cplx> z) const;
};

// "log:A=..,c=..", "exp:c=..", "none" (empty result).
std::optional<FSpec> parse_f(const std::string& s, int d0);

// Inline JSON array of points or a CSV file path; `dim` complex coordinates each.
std::vector<std::vector<cplx>> parse_points(const std::string& s, int dim);

// Serializes with 17 significant digits for floating-point values.
std::string dump_json(const nlohmann::json& j);

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace berg::cli
