#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "stc/constellation.hpp"
#include "stc/linalg.hpp"
#include "stc/rng.hpp"

namespace stc {

// Generative channel description.
//  - iid_rayleigh: nr x nt entries i.i.d. CN(0, 1).
//  - isotropic: square n x n, H = U diag(sqrt(phi)) V* with Haar U, V; the
//    squared singular values phi_l are drawn independently with density
//    proportional to phi^(k_l) on (0, 1], sorted ascending, then all scaled by
//    one shared factor 1 + E with E exponential of mean tail_rate (a shared
//    factor keeps the ordering and every inverse moment finite).
//  - fixed: returns h_fixed every time.
//  - degenerate_miso: 1 x nt row, Rayleigh entries except the listed transmit
//    antennas which are identically zero.
struct FadingModel {
    enum class Kind { iid_rayleigh, isotropic, fixed, degenerate_miso };
    Kind kind = Kind::iid_rayleigh;
    int nr = 1;
    int nt = 1;
    RVector exponents;       // isotropic only, ascending, each > -1
    double tail_rate = 0.1;  // isotropic only, > 0
    CMatrix h_fixed;
    std::vector<int> zeroed;  // degenerate_miso only

    static FadingModel rayleigh(int nr, int nt);
    static FadingModel isotropic(const RVector& exponents, double tail_rate = 0.1);
    static FadingModel fixed(const CMatrix& h);
    static FadingModel degenerate_miso(int nt, std::vector<int> zeroed);
};

// Rayleigh near-zero decay exponents |nt - nr| + 2(l - 1), l = 1..min(nt, nr).
RVector rayleigh_exponents(int nr, int nt);

CMatrix sample_channel(const FadingModel& model, CounterRng& rng);

// log2 det(I + snr * H * H^*), bits per channel use.
double mutual_info(const CMatrix& h, double snr);

struct OutageEstimate {
    double probability = 0.0;
    double ci_halfwidth = 0.0;  // 95% binomial
    long trials = 0;
    long events = 0;
};

OutageEstimate outage_prob_mc(const FadingModel& model, double rate_bits, double snr,
                              long trials, std::uint64_t seed, int threads = 0);

// Piecewise linear rate-exponent tradeoff, breakpoints at integer rates.
struct OutageCurve {
    std::vector<std::pair<double, double>> breakpoints;  // (r, d), r increasing
    double value(double r) const;
};

// d(r) = (k_{m-s} + 1)(s + 1 - r) + sum_{l<=m-s-1} (k_l + 1) on s <= r < s+1,
// built from ascending exponents; breakpoint s carries sum_{l<=m-s} (k_l + 1).
OutageCurve outage_curve_analytic(const RVector& exponents_ascending);

// Single segment a * nt * (1 - r) on [0, 1].
OutageCurve miso_outage_curve(double a, int nt);

// Initialization-loss compression r -> base(T r / (T - nt + 1)).
OutageCurve dblast_effective_curve(const OutageCurve& base, int T, int nt);

// argmin over codewords of ||y - sqrt(snr) h x||^2, ties to the smallest index.
long ml_decode(const Codebook& cb, const CMatrix& y, const CMatrix& h, double snr);

struct SimResult {
    std::vector<double> snr_db;
    std::vector<double> pe;
    std::vector<double> ci_halfwidth;
    std::vector<long> trials;
    std::vector<long> errors;
    std::uint64_t seed = 0;
    std::string rng_name;
    double power_rescale = 0.0;  // factor applied to stored words before sqrt(snr)
};

// Seeded word-error simulation. The codebook is rescaled so the mean codeword
// power is exactly nt*T (the transmit budget with sqrt(snr) applied on top),
// putting families with different stored conventions at the same operating
// point. Trials shard into fixed-size blocks with per-block streams, so the
// result is byte-identical for any thread count.
SimResult simulate_pe(const Codebook& cb, const FadingModel& model,
                      const std::vector<double>& snr_db, const std::vector<long>& trials,
                      std::uint64_t seed, int threads = 0);

struct SlopeFit {
    double slope = 0.0;
    double std_error = 0.0;
    int points_used = 0;
};

// Least-squares slope of -log2 pe against log2 snr; points with fewer than
// min_errors observed errors are excluded.
SlopeFit estimate_diversity(const SimResult& sim, long min_errors = 10);

struct StagedDecision {
    long stream_p = -1;   // index into the stream codebook
    long stream_q = -1;
    bool used_fallback = false;
    int msb_bits_p = 0;   // together with msb_bits_q: bits pinned per rail
    int msb_bits_q = 0;
};

// Staged decoding of the two-stream staggered layout on nt=2: the clean head
// and tail symbols pin most-significant PAM bits of the two streams, the
// middle symbol resolves the rest exactly within the pinned classes. The
// result provably equals joint ML when the pruning margins hold; otherwise it
// falls back to joint ML.
StagedDecision staged_dblast_decode(const Codebook& stream_code, const CMatrix& y,
                                    const CMatrix& h, double snr);

}  // namespace stc
