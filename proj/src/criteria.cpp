#include "stc/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

#include "stc/parallel.hpp"

namespace stc {
namespace {

struct PairMin {
    double value = std::numeric_limits<double>::infinity();
    long a = -1;
    long b = -1;

    void consider(double v, long pa, long pb) {
        if (v < value || (v == value && (pa < a || (pa == a && pb < b)))) {
            value = v;
            a = pa;
            b = pb;
        }
    }
    void merge(const PairMin& o) { consider(o.value, o.a, o.b); }
};

void require_pair_budget(long n) {
    if (n < 2) throw std::invalid_argument("need at least two codewords");
    if (n * (n - 1) / 2 > kMaxPairScan)
        throw std::invalid_argument("pair scan larger than the exhaustive budget");
}

// Exhaustive min over pairs of metric(a, b), parallel over first-index blocks
// with a deterministic merge (ties broken toward the smallest pair).
template <typename Metric>
PairMin scan_pairs(long n, const Metric& metric) {
    require_pair_budget(n);
    const int workers = effective_threads(0);
    std::vector<PairMin> partial(static_cast<std::size_t>(n));
    parallel_blocks(n, workers, [&](long a, int) {
        PairMin local;
        for (long b = a + 1; b < n; ++b) local.consider(metric(a, b), a, b);
        partial[a] = local;
    });
    PairMin out;
    for (const auto& p : partial) out.merge(p);
    return out;
}

UniversalityReport report_from(const std::string& kind, double rate_bits, double slack_c,
                               const PairMin& m) {
    UniversalityReport rep;
    rep.kind = kind;
    rep.rate_bits = rate_bits;
    rep.slack_c = slack_c;
    rep.min_value = m.value;
    rep.threshold = slack_c * std::pow(2.0, -rate_bits);
    rep.pair_a = m.a;
    rep.pair_b = m.b;
    rep.pass = m.value >= rep.threshold;
    return rep;
}

}  // namespace

CMatrix normalized_difference(const CMatrix& xa, const CMatrix& xb) {
    if (xa.rows() != xb.rows() || xa.cols() != xb.cols())
        throw std::invalid_argument("codeword shape mismatch");
    return xa - xb;
}

double product_distance(const CMatrix& diff_column) {
    if (diff_column.cols() != 1) throw std::invalid_argument("expected a column difference");
    double pd = 1.0;
    for (int l = 0; l < diff_column.rows(); ++l) pd *= std::norm(diff_column(l, 0));
    return pd;
}

UniversalityReport check_scalar(const Codebook& cb, double rate_bits, double slack_c) {
    if (cb.nt != 1 || cb.T != 1) throw std::invalid_argument("scalar check needs a scalar codebook");
    const auto m = scan_pairs(cb.size(), [&](long a, long b) {
        return std::norm(cb.words[a](0, 0) - cb.words[b](0, 0));
    });
    return report_from("scalar", rate_bits, slack_c, m);
}

UniversalityReport check_parallel(const Codebook& cb, double rate_bits, double slack_c) {
    if (cb.T != 1) throw std::invalid_argument("parallel check needs a flat parallel codebook");
    const auto m = scan_pairs(cb.size(), [&](long a, long b) {
        double pd = 1.0;
        for (int l = 0; l < cb.nt; ++l) pd *= std::norm(cb.words[a](l, 0) - cb.words[b](l, 0));
        return pd;
    });
    return report_from("parallel", rate_bits, slack_c, m);
}

UniversalityReport check_miso(const Codebook& cb, double rate_bits, double slack_c) {
    if (cb.T < cb.nt) throw std::invalid_argument("need T >= nt");
    const auto m = scan_pairs(cb.size(), [&](long a, long b) {
        const RVector sv = singular_values(cb.words[a] - cb.words[b]);
        const double smallest = sv(sv.size() - 1);
        return smallest * smallest;
    });
    return report_from("miso", rate_bits, slack_c, m);
}

UniversalityReport check_mimo(const Codebook& cb, double rate_bits, int nr, double slack_c) {
    if (cb.T < cb.nt) throw std::invalid_argument("need T >= nt");
    if (nr < 1) throw std::invalid_argument("need at least one receive antenna");
    const int take = std::min(nr, cb.nt);
    const auto m = scan_pairs(cb.size(), [&](long a, long b) {
        const RVector sv = singular_values(cb.words[a] - cb.words[b]);
        double prod = 1.0;
        for (int i = 0; i < take; ++i) {
            const double s = sv(sv.size() - 1 - i);
            prod *= s * s;
        }
        return prod;
    });
    return report_from("mimo", rate_bits, slack_c, m);
}

AbfCheckResult abf_bound_check(int nbits) {
    if (nbits < 1 || nbits > 12) throw std::invalid_argument("nbits must be in [1, 12]");
    const DigitPermutation flip = alt_flip_reversal_perm(nbits);
    const long n = flip.size;
    const auto m = scan_pairs(n, [&](long a, long b) {
        return static_cast<double>((b - a) * std::labs(flip(a) - flip(b)));
    });
    AbfCheckResult out;
    out.nbits = nbits;
    out.min_product_raw = static_cast<long>(m.value);
    out.min_product_norm = m.value / (static_cast<double>(n) * n);
    out.bound = 1.0 / (8.0 * n);
    // integer form of min/(2^b)^2 >= 1/(8*2^b)
    out.pass = 8 * out.min_product_raw >= n;
    out.arg_a = m.a;
    out.arg_b = m.b;
    return out;
}

PdHistogram pd_histogram(const Codebook& cb, std::vector<double> thresholds) {
    if (cb.T != 1) throw std::invalid_argument("histogram needs a flat parallel codebook");
    const long n = cb.size();
    require_pair_budget(n);
    PdHistogram out;
    out.thresholds = std::move(thresholds);
    out.counts.assign(out.thresholds.size(), 0);
    for (long a = 0; a < n; ++a)
        for (long b = a + 1; b < n; ++b) {
            double pd = 1.0;
            for (int l = 0; l < cb.nt; ++l) pd *= std::norm(cb.words[a](l, 0) - cb.words[b](l, 0));
            ++out.total_pairs;
            if (pd == 0.0) {
                ++out.zero_pairs;
                continue;
            }
            for (std::size_t t = 0; t < out.thresholds.size(); ++t)
                if (pd < out.thresholds[t]) ++out.counts[t];
        }
    return out;
}

double min_product_distance(const Codebook& cb, long* arg_a, long* arg_b, long* zero_pairs) {
    if (cb.T != 1) throw std::invalid_argument("product distance needs a flat parallel codebook");
    const long n = cb.size();
    require_pair_budget(n);
    PairMin m;
    long zeros = 0;
    for (long a = 0; a < n; ++a)
        for (long b = a + 1; b < n; ++b) {
            double pd = 1.0;
            for (int l = 0; l < cb.nt; ++l) pd *= std::norm(cb.words[a](l, 0) - cb.words[b](l, 0));
            if (pd == 0.0) ++zeros;
            m.consider(pd, a, b);
        }
    if (arg_a) *arg_a = m.a;
    if (arg_b) *arg_b = m.b;
    if (zero_pairs) *zero_pairs = zeros;
    return m.value;
}

Codebook expurgate(const Codebook& cb) {
    if (cb.T != 1) throw std::invalid_argument("expurgation needs a flat parallel codebook");
    const long n = cb.size();
    if (n < 2) throw std::invalid_argument("need at least two codewords");
    require_pair_budget(n);

    std::vector<double> badness(n, 0.0);
    for (long a = 0; a < n; ++a)
        for (long b = a + 1; b < n; ++b) {
            double pd = 1.0;
            for (int l = 0; l < cb.nt; ++l) pd *= std::norm(cb.words[a](l, 0) - cb.words[b](l, 0));
            const double inc = pd > 0.0 ? 1.0 / pd : std::numeric_limits<double>::infinity();
            badness[a] += inc;
            badness[b] += inc;
        }

    std::vector<double> sorted = badness;
    std::sort(sorted.begin(), sorted.end());
    const double cutoff = sorted[static_cast<std::size_t>((n + 1) / 2 - 1)];

    Codebook out;
    out.family = cb.family + "|expurgated";
    out.nt = cb.nt;
    out.T = cb.T;
    out.normalization = cb.normalization;
    out.seed = cb.seed;
    for (long a = 0; a < n; ++a)
        if (badness[a] <= cutoff) out.words.push_back(cb.words[a]);
    out.rate_bits = std::log2(static_cast<double>(out.words.size())) / cb.T;

    double total = 0.0;
    for (const auto& w : out.words) total += w.squaredNorm();
    out.power_scale = total / (static_cast<double>(out.words.size()) * out.nt * out.T);
    return out;
}

}  // namespace stc
