#pragma once

#include <stdexcept>
#include <string>

namespace kadel {

/* Parameter outside a family's validity domain (g <= 0, |a| >= 1, ...). */
class parameter_error : public std::domain_error {
 public:
  explicit parameter_error(const std::string& what) : std::domain_error(what) {}
};

/* Deletion set fails the admissibility condition and force was not requested. */
class inadmissible_error : public std::invalid_argument {
 public:
  inadmissible_error(const std::string& what, int witness)
      : std::invalid_argument(what), witness_m(witness) {}
  int witness_m;  // smallest m with prod_j (m - d_j) < 0
};

/* Sampled values failed to re-assemble into a polynomial of the stated degree. */
class extraction_error : public std::runtime_error {
 public:
  explicit extraction_error(const std::string& what) : std::runtime_error(what) {}
};

/* Evaluation at (or too close to) a pole of a potential function. */
class pole_error : public std::domain_error {
 public:
  explicit pole_error(const std::string& what) : std::domain_error(what) {}
};

/* An operation was called for the wrong regime (ordinary vs discrete). */
class regime_error : public std::logic_error {
 public:
  explicit regime_error(const std::string& what) : std::logic_error(what) {}
};

/* A numerical procedure failed to converge (quadrature truncation, ...). */
class convergence_error : public std::runtime_error {
 public:
  explicit convergence_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace kadel
