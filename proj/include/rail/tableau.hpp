#pragma once

// Butcher tableaux for the stiffly accurate DIRK schemes and the
// Ascher-Ruuth-Spiteri IMEX pairs. Construction checks the order conditions.

#include <cstddef>
#include <string>
#include <vector>

#include "rail/linalg/matrix.hpp"

namespace rail {

struct ButcherTableau {
  std::string name;
  Matrix a;  // s x s, lower triangular
  std::vector<double> b;
  std::vector<double> c;
  int order = 1;

  std::size_t stages() const { return b.size(); }
  bool stiffly_accurate() const;
};

/// Implicit DIRK of s stages coupled with an (s+1)-stage explicit scheme.
/// `implicit` is stored without its zero padding row and column;
/// explicit_a(k, l) is the explicit coefficient of row k+1, column l+1 in the
/// padded indexing, and c holds the s+1 shared abscissae (c[0] = 0).
struct ImexTableau {
  std::string name;
  ButcherTableau implicit;
  Matrix explicit_a;
  std::vector<double> explicit_b;
  std::vector<double> c;
  int order = 1;

  std::size_t stages() const { return implicit.stages(); }
};

/// Validates shape, row sums, positive diagonal and the order conditions up to
/// `order` (at most 3). Throws ArgumentError on failure.
ButcherTableau make_dirk(std::string name, Matrix a, std::vector<double> b, std::vector<double> c,
                         int order);

/// Validates the explicit part, shared abscissae, and the coupled order
/// conditions up to `order` (at most 3).
ImexTableau make_imex(std::string name, ButcherTableau implicit, Matrix explicit_a,
                      std::vector<double> explicit_b, int order);

ButcherTableau backward_euler_tableau();
ButcherTableau dirk2_tableau();
ButcherTableau dirk3_tableau();
ImexTableau imex111_tableau();
ImexTableau imex222_tableau();
ImexTableau imex443_tableau();

}  // namespace rail
