#pragma once

#include <stdexcept>
#include <vector>

namespace smm {

class SingularSystemError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Solves A x = rhs for tridiagonal A by Gaussian elimination with partial
/// pivoting (the gtsv scheme: one extra superdiagonal of fill-in).
///
/// lower[i] = A(i, i-1) (lower[0] ignored), diag[i] = A(i, i),
/// upper[i] = A(i, i+1) (upper[n-1] ignored).
std::vector<double> solve_tridiagonal(std::vector<double> lower, std::vector<double> diag,
                                      std::vector<double> upper, std::vector<double> rhs);

}  // namespace smm
