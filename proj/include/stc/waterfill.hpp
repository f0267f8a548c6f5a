#pragma once

#include <vector>

#include "stc/constellation.hpp"
#include "stc/linalg.hpp"

namespace stc {

// Water-level solution for the channel that meets the rate constraint with
// equality while minimizing the received pairwise separation. allocations[l]
// is the separation contribution of branch l; worst_singular_values[l] the
// matching channel singular value (needs the SNR); criterion the total
// separation, and worst_pep the Gaussian tail of the worst pair.
//
// Degenerate case: if some difference singular values are zero, the rate can
// be routed through dead branches and the separation collapses; the solver
// returns criterion 0, worst_pep 1/2, active_k = number of zero branches, an
// infinite water level and zero allocations. If all are zero the pair is
// indistinguishable at any rate and the solver throws.
struct WorstCaseResult {
    double lagrange_level = 0.0;  // lambda; water level is 1/lambda
    int active_k = 0;
    RVector allocations;           // Q_l >= 0, ascending branch order
    RVector worst_singular_values;  // psi_l
    double criterion = 0.0;
    double worst_pep = 0.0;
};

// sv: difference singular values, used in ascending order; R in bits.
WorstCaseResult solve_worst_channel(const RVector& sv, double rate_bits, double snr);

// Criterion value only: k * (2^R * prod_1^k sv_l^2)^(1/k) - sum_1^k sv_l^2
// with the largest feasible k. SNR-free.
double universal_criterion(const RVector& sv, double rate_bits);

// Q(sqrt(criterion / 2)) evaluated through erfc.
double worst_pairwise_error(const RVector& sv, double rate_bits);

struct WorstPairRow {
    long a = 0;
    long b = 0;
    int active_k = 0;
    double lagrange_level = 0.0;
    double criterion = 0.0;
};

struct CodebookWorstReport {
    double min_criterion = 0.0;
    long arg_a = -1;
    long arg_b = -1;
    std::vector<WorstPairRow> table;
};

// Applies the criterion to every pair, truncating each difference to its
// smallest min(nr, nt) singular values. Throws if any pair is degenerate in
// all retained directions (duplicate or rank-collapsed codewords).
CodebookWorstReport codebook_worst_report(const Codebook& cb, double rate_bits, int nr);

}  // namespace stc
