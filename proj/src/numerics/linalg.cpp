#include "qpl/numerics/linalg.hpp"

#include "qpl/numerics/errors.hpp"

namespace qpl {

namespace mp = boost::multiprecision;

std::vector<Real> solve_linear(std::vector<std::vector<Real>> A, std::vector<Real> b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r) {
            if (mp::abs(A[r][c]) > mp::abs(A[piv][c])) piv = r;
        }
        if (A[piv][c] == 0) throw DomainError("singular linear system");
        std::swap(A[piv], A[c]);
        std::swap(b[piv], b[c]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const Real f = A[r][c] / A[c][c];
            if (f == 0) continue;
            for (std::size_t k = c; k < n; ++k) A[r][k] -= f * A[c][k];
            b[r] -= f * b[c];
        }
    }
    std::vector<Real> x(n);
    for (std::size_t i = n; i-- > 0;) {
        Real s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= A[i][k] * x[k];
        x[i] = s / A[i][i];
    }
    return x;
}

std::vector<Real> fd_weights_first_derivative(const std::vector<Real>& offsets) {
    // Fornberg (1988) with x0 = 0, derivatives 0 and 1 only
    const std::size_t n = offsets.size();
    std::vector<std::vector<Real>> d0(n, std::vector<Real>(n)), d1(n, std::vector<Real>(n));
    d0[0][0] = 1;
    Real c1 = 1;
    for (std::size_t i = 1; i < n; ++i) {
        Real c2 = 1;
        for (std::size_t j = 0; j < i; ++j) {
            const Real c3 = offsets[i] - offsets[j];
            c2 *= c3;
            if (j == i - 1) {
                d1[i][i] = c1 * (d0[i - 1][i - 1] - offsets[i - 1] * d1[i - 1][i - 1]) / c2;
                d0[i][i] = -c1 * offsets[i - 1] * d0[i - 1][i - 1] / c2;
            }
            d1[j][i] = (offsets[i] * d1[j][i - 1] - d0[j][i - 1]) / c3;
            d0[j][i] = offsets[i] * d0[j][i - 1] / c3;
        }
        c1 = c2;
    }
    std::vector<Real> w(n);
    for (std::size_t j = 0; j < n; ++j) w[j] = d1[j][n - 1];
    return w;
}

}  // namespace qpl
