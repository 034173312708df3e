#pragma once

// Bartels-Stewart solver for A X - X B = C, the form shared by the K, L and S
// steps of the integrator.

#include <cstddef>
#include <list>
#include <memory>
#include <mutex>
#include <utility>

#include "rail/linalg/decompositions.hpp"
#include "rail/linalg/matrix.hpp"

namespace rail {

struct SylvesterProblem {
  Matrix a_big;    // N x N, multiplies X from the left
  Matrix b_small;  // r x r, multiplies X from the right
  Matrix rhs;      // N x r
};

/// Solves p.a_big * X - X * p.b_small = p.rhs.
/// Throws ArgumentError on shape mismatch and SingularPencilError when the two
/// spectra share an eigenvalue (relative gap below 1e-12).
Matrix solve_sylvester(const SylvesterProblem& p);

/// Same, with the Schur factors of both coefficients already available.
Matrix solve_sylvester(const SchurFactors& a, const SchurFactors& b, const Matrix& rhs);

/// ||A X - X B - C||_F
double sylvester_residual(const Matrix& a, const Matrix& b, const Matrix& rhs, const Matrix& x);

/// Schur factors of large left coefficients, keyed by an operator tag and the
/// step coefficient that built it. Entries are shared_ptr so a lookup stays
/// valid after eviction. Safe to use from several threads.
class SchurCache {
 public:
  explicit SchurCache(std::size_t capacity = 8) : capacity_(capacity) {}

  template <class Build>
  std::shared_ptr<const SchurFactors> get(int tag, double coeff, Build&& build) {
    {
      std::lock_guard<std::mutex> lock(mu_);
      for (const auto& e : entries_)
        if (e.tag == tag && e.coeff == coeff) {
          ++hits_;
          return e.factors;
        }
    }
    auto f = std::make_shared<const SchurFactors>(real_schur(build()));
    std::lock_guard<std::mutex> lock(mu_);
    ++misses_;
    if (capacity_ == 0) return f;
    entries_.push_front({tag, coeff, f});
    if (entries_.size() > capacity_) entries_.pop_back();
    return f;
  }

  void clear() {
    std::lock_guard<std::mutex> lock(mu_);
    entries_.clear();
  }
  std::size_t hits() const { return hits_; }
  std::size_t misses() const { return misses_; }

 private:
  struct Entry {
    int tag;
    double coeff;
    std::shared_ptr<const SchurFactors> factors;
  };
  std::size_t capacity_;
  std::list<Entry> entries_;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
  mutable std::mutex mu_;
};

}  // namespace rail
