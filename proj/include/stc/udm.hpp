#pragma once

#include <optional>
#include <vector>

#include "stc/udm_family.hpp"

namespace stc {

// {I_n, D_n} over GF(2).
UdmFamily build_identity_pair(int n);

// {I_n, D_n, T_n} over GF(2): T_1 = [1], T_2n = T_2 (x) T_n with
// T_2 = [[1,1],[0,1]], intermediate sizes by principal submatrix.
UdmFamily build_tensor_T(int n);

// {I_n, D_n, T_n, R_n} over GF(3): base blocks T_3 = [[1,2,1],[0,1,1],[0,0,1]]
// and R_3 = [[1,1,1],[0,1,2],[0,0,1]], tensor powers, principal submatrices.
UdmFamily build_L4_F3(int n);

// A_1 = I, A_2 = D (exchange), and for l >= 3 the binomial generator
// [A_l]_{j,k} = C(k, j) * alpha^{(l-2)(k-j)} with zero-based row j and column
// k, alpha the field generator. Requires L <= q + 1.
UdmFamily build_pascal(int n, int L, const Field& field);

struct RsMdsResult {
    // n x (L*n) Vandermonde-style block matrix; every choice of n columns is
    // independent. When L*n = q + 1 the last column is the point at infinity.
    FieldMatrix stacked;
    UdmFamily family;  // A_l = transpose of the l-th n-column block
};

// Requires q >= L*n - 1.
RsMdsResult build_rs_mds(int n, int L, const Field& field);

struct UdmVerifyResult {
    bool pass = false;
    // Lexicographically first failing composition (k_1, ..., k_L) if any.
    std::optional<std::vector<int>> counterexample;
};

// Exhaustive check over all compositions summing exactly to n; compositions
// summing to more than n add rows to an already full-rank stack, so equality
// suffices. Sets family.verified on pass.
UdmVerifyResult udm_verify(UdmFamily& family);

// Stronger Reed-Solomon-style property: every set of n rows of the stacked
// (L*n) x n transpose is independent (checked exhaustively; feasible at desk
// scale only).
bool rs_any_rows_property(const RsMdsResult& rs);

}  // namespace stc
