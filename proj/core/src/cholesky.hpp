#pragma once

#include "sgploc/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <string>

namespace sgploc::detail {

struct CholResult {
  Eigen::MatrixXd lower;
  double jitter_used = 0.0;
};

// Factorizes a + jitter*I, escalating the jitter by 10x on failure up to
// 1e-2 before giving up. Duplicate fingerprints make kernel matrices
// singular, so escalation is part of the normal fit path.
inline CholResult llt_with_escalation(const Eigen::MatrixXd& a, double jitter,
                                      const std::string& matrix_name) {
  constexpr double kMaxJitter = 1e-2;
  double j = jitter;
  while (true) {
    Eigen::MatrixXd work = a;
    work.diagonal().array() += j;
    Eigen::LLT<Eigen::MatrixXd> llt(work);
    if (llt.info() == Eigen::Success) {
      return {Eigen::MatrixXd(llt.matrixL()), j};
    }
    const double next = j == 0.0 ? 1e-10 : j * 10.0;
    if (next > kMaxJitter) {
      throw NumericalError("Cholesky factorization of " + matrix_name +
                           " failed after jitter escalation to " +
                           std::to_string(j));
    }
    j = next;
  }
}

}  // namespace sgploc::detail
