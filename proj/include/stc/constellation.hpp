#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "stc/galois.hpp"
#include "stc/linalg.hpp"
#include "stc/rng.hpp"
#include "stc/udm_family.hpp"

namespace stc {

// One-dimensional q-ary digit constellation with q^n points. With gap > 0 an
// extra spacing of gap*q^v raw units precedes index i, where v counts the
// trailing zero digits of i (the position of the highest digit that changes),
// so points whose indices first differ in the m-th most significant digit stay
// at least gap*q^(n-m) raw units apart. Raw spacing between adjacent indices
// is 1 before gaps.
struct PamSpec {
    int q = 2;
    int n = 1;
    double gap = 0.0;
    double offset = 0.0;  // added to the centered coordinate
};

long pam_size(const PamSpec& spec);
// Centered raw coordinate of the index-th point, strictly increasing in index.
double pam_point(const PamSpec& spec, long index);
// Distance between the first and last point (raw units).
double pam_width(const PamSpec& spec);

struct DigitPermutation {
    long size = 0;
    std::vector<long> map;
    long operator()(long i) const { return map[static_cast<std::size_t>(i)]; }
};

DigitPermutation identity_perm(long size);
// Index with bits b_n..b_1 (MSB first) maps to b_1..b_n.
DigitPermutation bit_reversal_perm(int nbits);
// Bit reversal followed by complementing every other bit, MSB first.
DigitPermutation alt_flip_reversal_perm(int nbits);
// Base-q digit reversal on q^n indices.
DigitPermutation digit_reversal_perm(int q, int n);
DigitPermutation random_permutation(long size, CounterRng& rng);
DigitPermutation compose(const DigitPermutation& outer, const DigitPermutation& inner);
bool is_bijection(const DigitPermutation& perm);

// A finite block code: |words| codeword matrices of shape nt x T, stored under
// the family's documented scale with the sqrt(SNR) factor left to simulation
// time. power_scale records mean ||X||_F^2 / (nt*T) for the power bookkeeping.
struct Codebook {
    std::string family;
    int nt = 1;
    int T = 1;
    double rate_bits = 0.0;
    std::string normalization;
    std::uint64_t seed = 0;
    double power_scale = 0.0;
    std::vector<CMatrix> words;

    long size() const { return static_cast<long>(words.size()); }
};

// Rectangular 2^ceil(b/2) x 2^floor(b/2) grid of unit-spaced centered QAM
// points, I rail first, index = i_I * 2^floor(b/2) + i_Q.
std::vector<std::complex<double>> qam_grid(int bits);

// 2^R-point QAM, two independent 2^(R/2)-PAM rails, scaled by 2^(-R/2) so the
// squared minimum distance is exactly 2^(-R). R even, 2 <= R <= 16.
Codebook make_qam(int rate_bits);

// Parallel-channel permutation code in flat form (L x 1 column words): branch
// 1 carries a 2^R-point QAM symbol q, branch l carries perms[l-2] applied to
// the I and Q PAM indices of q independently. rail_pam must have 2^(R/2)
// points. Stored scale 2^(-R/2) per rail coordinate pair.
Codebook make_permutation_code(int branches, int rate_bits,
                               const std::vector<DigitPermutation>& perms,
                               const PamSpec& rail_pam);

// Parallel code from a matrix family over GF(q): information is one q-ary
// digit vector per rail; branch l transmits the gapped PAM point indexed by
// A_l applied to the digit vector (most significant digit first). Stored
// scale q^(-n) per rail coordinate.
Codebook make_udm_code(const UdmFamily& family, const PamSpec& pam);

// Two-symbol rotated-QAM code on two antennas: component symbols are
// 2^(R/2)-point QAM, pairs (x11, x22) and (x21, x12) are plane rotations of
// (u1, u2) and (u3, u4) by angles atan(2)/2 and atan(1/2)/2. Stored scale
// 2^((2-R)/4) per component. R even.
Codebook make_rotated_qam(int rate_bits);

// Orthogonal two-antenna stacking [[x1, -x2*], [x2, x1*]] over all ordered
// pairs of scalar codewords.
Codebook make_alamouti(const Codebook& scalar);

// Independent per-antenna QAM streams, T=1. bits_per_antenna even.
Codebook make_vblast(int nt, int bits_per_antenna);
// Same with a square points_per_side^2 grid per antenna (points_per_side >= 2),
// stored scale 1/points_per_side; make_vblast(nt, b) equals
// make_vblast_grid(nt, 2^(b/2)).
Codebook make_vblast_grid(int nt, int points_per_side);

// Two independent stream words staggered anti-diagonally over nt antennas and
// nt+1 symbols; stream_code must be a flat parallel code with nt branches.
// For nt=2 the layout is [[0, p2, q2], [p1, q1, 0]].
Codebook make_dblast_two_stream(int nt, const Codebook& stream_code);

// Transposed layout of make_dblast_two_stream: nt+1 antennas, nt symbols.
Codebook make_timespace(int nt, const Codebook& stream_code);

// Diagonal embedding of a flat parallel code: branch l on antenna l at
// symbol l, zeros elsewhere.
Codebook make_diagonal_code(const Codebook& stream_code);

struct PermutationSearchResult {
    Codebook codebook;
    std::vector<DigitPermutation> perms;
    double score = 0.0;  // sum over pairs of inverse product distance
};

// Seeded random search over branch permutations, keeping the draw with the
// smallest inverse-product-distance sum.
PermutationSearchResult search_permutation_code(int branches, int rate_bits, int draws,
                                                std::uint64_t seed);

}  // namespace stc
