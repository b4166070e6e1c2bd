#include "smm/tridiagonal.hpp"

#include <algorithm>
#include <cmath>

namespace smm {

std::vector<double> solve_tridiagonal(std::vector<double> lower, std::vector<double> diag,
                                      std::vector<double> upper, std::vector<double> rhs) {
    const std::size_t n = diag.size();
    if (lower.size() != n || upper.size() != n || rhs.size() != n)
        throw std::invalid_argument("solve_tridiagonal: inconsistent sizes");
    if (n == 0) return {};

    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        scale = std::max({scale, std::abs(lower[i]), std::abs(diag[i]), std::abs(upper[i])});
    const double tiny = 1e-14 * scale;
    auto check = [tiny](double pivot) {
        if (!(std::abs(pivot) > tiny)) throw SingularSystemError("solve_tridiagonal: singular matrix");
    };
    if (n == 1) {
        check(diag[0]);
        return {rhs[0] / diag[0]};
    }

    // dl[i] = A(i+1, i); after elimination dl[i] holds the fill-in A(i, i+2).
    std::vector<double> dl(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) dl[i] = lower[i + 1];
    std::vector<double>& d = diag;
    std::vector<double>& du = upper;
    std::vector<double>& b = rhs;

    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(d[i]) >= std::abs(dl[i])) {
            check(d[i]);
            const double fact = dl[i] / d[i];
            d[i + 1] -= fact * du[i];
            b[i + 1] -= fact * b[i];
            dl[i] = 0.0;
        } else {
            const double fact = d[i] / dl[i];
            d[i] = dl[i];
            const double temp = d[i + 1];
            d[i + 1] = du[i] - fact * temp;
            if (i + 2 < n) {
                dl[i] = du[i + 1];
                du[i + 1] = -fact * dl[i];
            } else {
                dl[i] = 0.0;
            }
            du[i] = temp;
            const double bt = b[i];
            b[i] = b[i + 1];
            b[i + 1] = bt - fact * b[i + 1];
        }
    }
    check(d[n - 1]);

    std::vector<double> x(n);
    x[n - 1] = b[n - 1] / d[n - 1];
    x[n - 2] = (b[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
    for (std::size_t i = n - 2; i-- > 0;) x[i] = (b[i] - du[i] * x[i + 1] - dl[i] * x[i + 2]) / d[i];
    return x;
}

}  // namespace smm
