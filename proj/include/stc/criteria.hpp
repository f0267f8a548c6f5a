#pragma once

#include <string>
#include <vector>

#include "stc/constellation.hpp"
#include "stc/linalg.hpp"

namespace stc {

// Outcome of one of the code design checks: the minimum criterion value over
// all codeword pairs against the threshold c * 2^(-R).
struct UniversalityReport {
    std::string kind;  // scalar | parallel | miso | mimo
    double rate_bits = 0.0;
    double slack_c = 0.0;
    double min_value = 0.0;
    double threshold = 0.0;
    long pair_a = -1;
    long pair_b = -1;
    bool pass = false;
};

// Pair scans are exhaustive; beyond this many pairs the checks refuse instead
// of sampling.
inline constexpr long kMaxPairScan = 1L << 24;

CMatrix normalized_difference(const CMatrix& xa, const CMatrix& xb);

// Product over branches of the squared difference magnitudes of a flat
// parallel difference (column vector).
double product_distance(const CMatrix& diff_column);

// d_min^2 against c * 2^(-R); scalar codebooks only.
UniversalityReport check_scalar(const Codebook& cb, double rate_bits, double slack_c);

// min over pairs of prod_l |d_l|^2 against c * 2^(-R); flat parallel codebooks.
UniversalityReport check_parallel(const Codebook& cb, double rate_bits, double slack_c);

// min over pairs of the smallest squared singular value of the difference.
UniversalityReport check_miso(const Codebook& cb, double rate_bits, double slack_c);

// min over pairs of the product of the smallest min(nr, nt) squared singular
// values of the difference; requires T >= nt.
UniversalityReport check_mimo(const Codebook& cb, double rate_bits, int nr, double slack_c);

struct AbfCheckResult {
    int nbits = 0;
    long min_product_raw = 0;     // min over pairs of |da| * |dB| on integer indices
    double min_product_norm = 0;  // divided by 2^(R/2) twice
    double bound = 0;             // 1 / (8 * 2^(R/2))
    bool pass = false;
    long arg_a = -1;
    long arg_b = -1;
};

// Exhaustive scan of the alternate-flip bit-reversal displacement product over
// all index pairs; nbits <= 12.
AbfCheckResult abf_bound_check(int nbits);

struct PdHistogram {
    std::vector<double> thresholds;
    std::vector<long> counts;  // pairs with 0 < product distance < threshold
    long zero_pairs = 0;
    long total_pairs = 0;
};

PdHistogram pd_histogram(const Codebook& cb, std::vector<double> thresholds);

// Minimum product distance over pairs, optionally reporting the arg-min pair
// and the number of zero-product pairs.
double min_product_distance(const Codebook& cb, long* arg_a = nullptr, long* arg_b = nullptr,
                            long* zero_pairs = nullptr);

// Keeps codewords whose inverse-product-distance sum is at most the
// ceil(N/2)-th smallest such sum, so at least half survive.
Codebook expurgate(const Codebook& cb);

}  // namespace stc
