#pragma once

#include "spchain/errors.hpp"
#include "spchain/rational.hpp"

#include <vector>

namespace spchain {

// Gaussian elimination over the rationals. A is row-major n x n. Returns the
// solution of A x = rhs; throws internal_error on a singular system.
inline std::vector<Rat> solve_linear(std::vector<std::vector<Rat>> A, std::vector<Rat> rhs) {
    const int n = static_cast<int>(A.size());
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r) {
            if (A[r][col] != 0) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) throw internal_error("singular linear system");
        std::swap(A[col], A[pivot]);
        std::swap(rhs[col], rhs[pivot]);
        for (int r = 0; r < n; ++r) {
            if (r == col || A[r][col] == 0) continue;
            Rat f = A[r][col] / A[col][col];
            for (int c = col; c < n; ++c) A[r][c] -= f * A[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    std::vector<Rat> x(n);
    for (int i = 0; i < n; ++i) x[i] = rhs[i] / A[i][i];
    return x;
}

}  // namespace spchain
