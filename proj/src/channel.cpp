#include "stc/channel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include "stc/parallel.hpp"

namespace stc {

namespace {

constexpr long kShardSize = 1L << 14;

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

std::complex<double> sample_cn(CounterRng& rng) {
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    const double re = rng.next_gaussian();
    const double im = rng.next_gaussian();
    return {re * inv_sqrt2, im * inv_sqrt2};
}

// Column-major raw copy of sample_channel output, reusing `h`.
void sample_channel_raw(const FadingModel& model, CounterRng& rng,
                        std::vector<std::complex<double>>& h) {
    switch (model.kind) {
        case FadingModel::Kind::iid_rayleigh:
            for (auto& v : h) v = sample_cn(rng);
            return;
        case FadingModel::Kind::degenerate_miso: {
            for (auto& v : h) v = sample_cn(rng);
            for (int a : model.zeroed) h[static_cast<std::size_t>(a)] = 0.0;
            return;
        }
        default: {
            const CMatrix m = sample_channel(model, rng);
            for (int c = 0; c < m.cols(); ++c)
                for (int r = 0; r < m.rows(); ++r)
                    h[static_cast<std::size_t>(c) * m.rows() + r] = m(r, c);
            return;
        }
    }
}

// det(I + snr H H^*) for H given column-major, closed form up to nr = 2.
double capacity_det(const std::vector<std::complex<double>>& h, int nr, int nt, double snr) {
    if (nr == 1) {
        double g = 0.0;
        for (int a = 0; a < nt; ++a) g += std::norm(h[static_cast<std::size_t>(a)]);
        return 1.0 + snr * g;
    }
    if (nr == 2) {
        double g11 = 0.0, g22 = 0.0;
        std::complex<double> g12 = 0.0;
        for (int a = 0; a < nt; ++a) {
            const auto h1 = h[static_cast<std::size_t>(2 * a)];
            const auto h2 = h[static_cast<std::size_t>(2 * a) + 1];
            g11 += std::norm(h1);
            g22 += std::norm(h2);
            g12 += h1 * std::conj(h2);
        }
        return (1.0 + snr * g11) * (1.0 + snr * g22) - snr * snr * std::norm(g12);
    }
    CMatrix m(nr, nt);
    for (int c = 0; c < nt; ++c)
        for (int r = 0; r < nr; ++r) m(r, c) = h[static_cast<std::size_t>(c) * nr + r];
    CMatrix gram = CMatrix::Identity(nr, nr) + snr * (m * m.adjoint());
    return gram.ldlt().vectorD().real().prod();
}

struct DecodeTable {
    int nr = 0, nt = 0, T = 0;
    long n_words = 0;
    std::vector<std::complex<double>> words;  // word-major, column-major inside
};

DecodeTable make_decode_table(const Codebook& cb, int nr, double scale) {
    DecodeTable t;
    t.nr = nr;
    t.nt = cb.nt;
    t.T = cb.T;
    t.n_words = static_cast<long>(cb.words.size());
    t.words.resize(cb.words.size() * static_cast<std::size_t>(cb.nt * cb.T));
    std::size_t k = 0;
    for (const CMatrix& w : cb.words)
        for (int tt = 0; tt < cb.T; ++tt)
            for (int a = 0; a < cb.nt; ++a) t.words[k++] = scale * w(a, tt);
    return t;
}

// a: nr x nt (sqrt(snr) folded in), y: nr x T, both column-major.
long decode_raw(const DecodeTable& tab, const std::complex<double>* a,
                const std::complex<double>* y) {
    long best = 0;
    double best_metric = std::numeric_limits<double>::infinity();
    const std::complex<double>* w = tab.words.data();
    const std::size_t stride = static_cast<std::size_t>(tab.nt * tab.T);
    for (long c = 0; c < tab.n_words; ++c, w += stride) {
        double acc = 0.0;
        for (int t = 0; t < tab.T; ++t) {
            const std::complex<double>* x = w + static_cast<std::size_t>(t) * tab.nt;
            for (int r = 0; r < tab.nr; ++r) {
                std::complex<double> s = y[static_cast<std::size_t>(t) * tab.nr + r];
                for (int aa = 0; aa < tab.nt; ++aa)
                    s -= a[static_cast<std::size_t>(aa) * tab.nr + r] * x[aa];
                acc += std::norm(s);
            }
        }
        if (acc < best_metric) {
            best_metric = acc;
            best = c;
        }
    }
    return best;
}

// PAM level index per distinct coordinate value, used by the staged decoder.
std::vector<int> level_indices(const std::vector<double>& coords) {
    std::vector<double> sorted = coords;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> levels;
    const double span = sorted.back() - sorted.front();
    const double eps = 1e-9 * (span + 1.0);
    for (double v : sorted)
        if (levels.empty() || v - levels.back() > eps) levels.push_back(v);
    std::vector<int> idx(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i) {
        auto it = std::lower_bound(levels.begin(), levels.end(), coords[i] - eps);
        idx[i] = static_cast<int>(it - levels.begin());
    }
    return idx;
}

int msb_bits_for(double col_energy, double snr, int rail_bits) {
    const double g = col_energy * snr;
    if (!(g > 1.0)) return 0;
    const int k = static_cast<int>(std::floor(0.5 * std::log2(g)));
    return std::clamp(k, 0, rail_bits);
}

}  // namespace

FadingModel FadingModel::rayleigh(int nr, int nt) {
    require(nr >= 1 && nt >= 1, "rayleigh: dimensions must be positive");
    FadingModel m;
    m.kind = Kind::iid_rayleigh;
    m.nr = nr;
    m.nt = nt;
    return m;
}

FadingModel FadingModel::isotropic(const RVector& exponents, double tail_rate) {
    require(exponents.size() >= 1, "isotropic: need at least one exponent");
    require(tail_rate > 0.0, "isotropic: tail_rate must be positive");
    for (int l = 0; l < exponents.size(); ++l) {
        require(exponents(l) > -1.0, "isotropic: exponents must exceed -1");
        if (l > 0) require(exponents(l) >= exponents(l - 1), "isotropic: exponents must be ascending");
    }
    FadingModel m;
    m.kind = Kind::isotropic;
    m.nr = static_cast<int>(exponents.size());
    m.nt = m.nr;
    m.exponents = exponents;
    m.tail_rate = tail_rate;
    return m;
}

FadingModel FadingModel::fixed(const CMatrix& h) {
    require(h.rows() >= 1 && h.cols() >= 1, "fixed: empty matrix");
    FadingModel m;
    m.kind = Kind::fixed;
    m.nr = static_cast<int>(h.rows());
    m.nt = static_cast<int>(h.cols());
    m.h_fixed = h;
    return m;
}

FadingModel FadingModel::degenerate_miso(int nt, std::vector<int> zeroed) {
    require(nt >= 1, "degenerate_miso: nt must be positive");
    for (int a : zeroed) require(a >= 0 && a < nt, "degenerate_miso: zeroed index out of range");
    FadingModel m;
    m.kind = Kind::degenerate_miso;
    m.nr = 1;
    m.nt = nt;
    m.zeroed = std::move(zeroed);
    return m;
}

RVector rayleigh_exponents(int nr, int nt) {
    require(nr >= 1 && nt >= 1, "rayleigh_exponents: dimensions must be positive");
    const int m = std::min(nr, nt);
    RVector k(m);
    for (int l = 0; l < m; ++l) k(l) = std::abs(nt - nr) + 2 * l;
    return k;
}

CMatrix sample_channel(const FadingModel& model, CounterRng& rng) {
    switch (model.kind) {
        case FadingModel::Kind::fixed:
            return model.h_fixed;
        case FadingModel::Kind::iid_rayleigh: {
            CMatrix h(model.nr, model.nt);
            for (int c = 0; c < model.nt; ++c)
                for (int r = 0; r < model.nr; ++r) h(r, c) = sample_cn(rng);
            return h;
        }
        case FadingModel::Kind::degenerate_miso: {
            CMatrix h(1, model.nt);
            for (int c = 0; c < model.nt; ++c) h(0, c) = sample_cn(rng);
            for (int a : model.zeroed) h(0, a) = 0.0;
            return h;
        }
        case FadingModel::Kind::isotropic: {
            const int n = model.nr;
            RVector phi(n);
            for (int l = 0; l < n; ++l) {
                const double u = rng.next_double_open();
                phi(l) = std::pow(u, 1.0 / (model.exponents(l) + 1.0));
            }
            std::sort(phi.data(), phi.data() + n);
            const double tail = 1.0 + model.tail_rate * rng.next_exponential();
            const RVector d = (phi * tail).cwiseSqrt();
            const CMatrix u = random_unitary(n, rng);
            const CMatrix v = random_unitary(n, rng);
            return u * d.asDiagonal() * v.adjoint();
        }
    }
    throw std::logic_error("sample_channel: unknown model kind");
}

double mutual_info(const CMatrix& h, double snr) {
    require(snr >= 0.0, "mutual_info: snr must be nonnegative");
    std::vector<std::complex<double>> raw(static_cast<std::size_t>(h.size()));
    for (int c = 0; c < h.cols(); ++c)
        for (int r = 0; r < h.rows(); ++r)
            raw[static_cast<std::size_t>(c) * h.rows() + r] = h(r, c);
    return std::log2(capacity_det(raw, static_cast<int>(h.rows()), static_cast<int>(h.cols()), snr));
}

OutageEstimate outage_prob_mc(const FadingModel& model, double rate_bits, double snr,
                              long trials, std::uint64_t seed, int threads) {
    require(trials >= 1, "outage_prob_mc: trials must be positive");
    require(rate_bits > 0.0 && snr > 0.0, "outage_prob_mc: rate and snr must be positive");
    const double det_threshold = std::exp2(rate_bits);
    const long shards = (trials + kShardSize - 1) / kShardSize;
    std::vector<long> events(static_cast<std::size_t>(shards), 0);
    parallel_blocks(shards, threads, [&](long s, int) {
        CounterRng rng(seed, static_cast<std::uint64_t>(s));
        const long n = std::min(kShardSize, trials - s * kShardSize);
        std::vector<std::complex<double>> h(static_cast<std::size_t>(model.nr) * model.nt);
        long e = 0;
        for (long i = 0; i < n; ++i) {
            sample_channel_raw(model, rng, h);
            if (capacity_det(h, model.nr, model.nt, snr) < det_threshold) ++e;
        }
        events[static_cast<std::size_t>(s)] = e;
    });
    long total = 0;
    for (long e : events) total += e;
    OutageEstimate out;
    out.trials = trials;
    out.events = total;
    out.probability = static_cast<double>(total) / static_cast<double>(trials);
    out.ci_halfwidth =
        1.96 * std::sqrt(out.probability * (1.0 - out.probability) / static_cast<double>(trials));
    return out;
}

double OutageCurve::value(double r) const {
    if (breakpoints.empty()) throw std::logic_error("OutageCurve: empty");
    if (r <= breakpoints.front().first) return breakpoints.front().second;
    if (r >= breakpoints.back().first) return breakpoints.back().second;
    for (std::size_t i = 1; i < breakpoints.size(); ++i) {
        if (r <= breakpoints[i].first) {
            const auto [r0, d0] = breakpoints[i - 1];
            const auto [r1, d1] = breakpoints[i];
            return d0 + (d1 - d0) * (r - r0) / (r1 - r0);
        }
    }
    return breakpoints.back().second;
}

OutageCurve outage_curve_analytic(const RVector& exponents_ascending) {
    const int m = static_cast<int>(exponents_ascending.size());
    require(m >= 1, "outage_curve_analytic: need at least one exponent");
    for (int l = 0; l < m; ++l) {
        require(exponents_ascending(l) > -1.0, "outage_curve_analytic: exponents must exceed -1");
        if (l > 0)
            require(exponents_ascending(l) > exponents_ascending(l - 1),
                    "outage_curve_analytic: exponents must be strictly increasing");
    }
    OutageCurve curve;
    for (int s = 0; s <= m; ++s) {
        double d = 0.0;
        for (int l = 0; l < m - s; ++l) d += exponents_ascending(l) + 1.0;
        curve.breakpoints.emplace_back(static_cast<double>(s), d);
    }
    return curve;
}

OutageCurve miso_outage_curve(double a, int nt) {
    require(a > 0.0 && nt >= 1, "miso_outage_curve: bad parameters");
    OutageCurve curve;
    curve.breakpoints = {{0.0, a * nt}, {1.0, 0.0}};
    return curve;
}

OutageCurve dblast_effective_curve(const OutageCurve& base, int T, int nt) {
    require(nt >= 1 && T >= nt, "dblast_effective_curve: need T >= nt >= 1");
    require(!base.breakpoints.empty(), "dblast_effective_curve: empty base curve");
    const double factor = static_cast<double>(T - nt + 1) / static_cast<double>(T);
    OutageCurve curve;
    for (const auto& [r, d] : base.breakpoints) curve.breakpoints.emplace_back(r * factor, d);
    return curve;
}

long ml_decode(const Codebook& cb, const CMatrix& y, const CMatrix& h, double snr) {
    require(!cb.words.empty(), "ml_decode: empty codebook");
    require(h.cols() == cb.nt, "ml_decode: channel columns must match nt");
    require(y.rows() == h.rows() && y.cols() == cb.T, "ml_decode: received shape mismatch");
    require(snr >= 0.0, "ml_decode: snr must be nonnegative");
    const int nr = static_cast<int>(h.rows());
    const DecodeTable tab = make_decode_table(cb, nr, 1.0);
    const double amp = std::sqrt(snr);
    std::vector<std::complex<double>> a(static_cast<std::size_t>(nr) * cb.nt);
    for (int c = 0; c < cb.nt; ++c)
        for (int r = 0; r < nr; ++r) a[static_cast<std::size_t>(c) * nr + r] = amp * h(r, c);
    std::vector<std::complex<double>> yr(static_cast<std::size_t>(nr) * cb.T);
    for (int c = 0; c < cb.T; ++c)
        for (int r = 0; r < nr; ++r) yr[static_cast<std::size_t>(c) * nr + r] = y(r, c);
    return decode_raw(tab, a.data(), yr.data());
}

SimResult simulate_pe(const Codebook& cb, const FadingModel& model,
                      const std::vector<double>& snr_db, const std::vector<long>& trials,
                      std::uint64_t seed, int threads) {
    require(!cb.words.empty(), "simulate_pe: empty codebook");
    require(model.nt == cb.nt, "simulate_pe: model transmit count must match codebook");
    require(!snr_db.empty() && snr_db.size() == trials.size(),
            "simulate_pe: snr and trial lists must match and be nonempty");
    for (long t : trials) require(t >= 100, "simulate_pe: need at least 100 trials per point");
    require(cb.power_scale > 0.0, "simulate_pe: codebook has zero power");

    const double rescale = 1.0 / std::sqrt(cb.power_scale);
    const int nr = model.nr;
    const DecodeTable tab = make_decode_table(cb, nr, rescale);
    const long n_words = tab.n_words;
    const std::size_t frame = static_cast<std::size_t>(cb.nt * cb.T);

    SimResult res;
    res.snr_db = snr_db;
    res.seed = seed;
    res.rng_name = CounterRng::name;
    res.power_rescale = rescale;

    for (std::size_t pt = 0; pt < snr_db.size(); ++pt) {
        const double snr = std::pow(10.0, snr_db[pt] / 10.0);
        const double amp = std::sqrt(snr);
        const long total = trials[pt];
        const long shards = (total + kShardSize - 1) / kShardSize;
        std::vector<long> errs(static_cast<std::size_t>(shards), 0);
        parallel_blocks(shards, threads, [&](long s, int) {
            CounterRng rng(seed, (static_cast<std::uint64_t>(pt) << 32) |
                                     static_cast<std::uint64_t>(s));
            const long n = std::min(kShardSize, total - s * kShardSize);
            std::vector<std::complex<double>> h(static_cast<std::size_t>(nr) * cb.nt);
            std::vector<std::complex<double>> a(h.size());
            std::vector<std::complex<double>> y(static_cast<std::size_t>(nr) * cb.T);
            long e = 0;
            for (long i = 0; i < n; ++i) {
                const long idx = static_cast<long>(rng.next_below(static_cast<std::uint64_t>(n_words)));
                sample_channel_raw(model, rng, h);
                for (std::size_t k = 0; k < h.size(); ++k) a[k] = amp * h[k];
                const std::complex<double>* x = tab.words.data() + static_cast<std::size_t>(idx) * frame;
                for (int t = 0; t < cb.T; ++t)
                    for (int r = 0; r < nr; ++r) {
                        std::complex<double> v = sample_cn(rng);
                        for (int aa = 0; aa < cb.nt; ++aa)
                            v += a[static_cast<std::size_t>(aa) * nr + r] *
                                 x[static_cast<std::size_t>(t) * cb.nt + aa];
                        y[static_cast<std::size_t>(t) * nr + r] = v;
                    }
                if (decode_raw(tab, a.data(), y.data()) != idx) ++e;
            }
            errs[static_cast<std::size_t>(s)] = e;
        });
        long total_err = 0;
        for (long e : errs) total_err += e;
        const double p = static_cast<double>(total_err) / static_cast<double>(total);
        res.pe.push_back(p);
        res.ci_halfwidth.push_back(1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(total)));
        res.trials.push_back(total);
        res.errors.push_back(total_err);
    }
    return res;
}

SlopeFit estimate_diversity(const SimResult& sim, long min_errors) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < sim.pe.size(); ++i) {
        if (sim.errors[i] < min_errors || sim.pe[i] <= 0.0) continue;
        xs.push_back(sim.snr_db[i] * 0.1 * std::log2(10.0));
        ys.push_back(-std::log2(sim.pe[i]));
    }
    const int n = static_cast<int>(xs.size());
    if (n < 3)
        throw std::domain_error("estimate_diversity: need at least 3 points with enough errors");
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx <= 0.0) throw std::domain_error("estimate_diversity: degenerate snr grid");
    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.points_used = n;
    double rss = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = ys[i] - my - fit.slope * (xs[i] - mx);
        rss += r * r;
    }
    fit.std_error = std::sqrt(rss / (n - 2) / sxx);
    return fit;
}

StagedDecision staged_dblast_decode(const Codebook& stream_code, const CMatrix& y,
                                    const CMatrix& h, double snr) {
    require(stream_code.nt == 2 && stream_code.T == 1,
            "staged_dblast_decode: stream codebook must be two flat branches");
    require(h.cols() == 2, "staged_dblast_decode: channel must have two transmit columns");
    require(y.rows() == h.rows() && y.cols() == 3, "staged_dblast_decode: frame must span 3 uses");
    const long n = static_cast<long>(stream_code.words.size());
    int rail_bits = 0;
    while ((1L << (2 * rail_bits)) < n) ++rail_bits;
    require((1L << (2 * rail_bits)) == n, "staged_dblast_decode: stream size must be 4^b");

    const double amp = std::sqrt(snr);
    const CVector col0 = amp * h.col(0);
    const CVector col1 = amp * h.col(1);

    // Branch values per stream word and their PAM level indices. A frame
    // carries stream p as (b0[a], b1[a]) and stream q as (b0[b], b1[b]).
    std::vector<std::complex<double>> b0(n), b1(n);
    std::vector<double> re0(n), im0(n), re1(n), im1(n);
    for (long i = 0; i < n; ++i) {
        const CMatrix& w = stream_code.words[static_cast<std::size_t>(i)];
        b0[i] = w(0, 0);
        b1[i] = w(1, 0);
        re0[i] = w(0, 0).real();
        im0[i] = w(0, 0).imag();
        re1[i] = w(1, 0).real();
        im1[i] = w(1, 0).imag();
    }
    const std::vector<int> idx_re0 = level_indices(re0);
    const std::vector<int> idx_im0 = level_indices(im0);
    const std::vector<int> idx_re1 = level_indices(re1);
    const std::vector<int> idx_im1 = level_indices(im1);

    // Per-word head and tail metrics; the columns of the staggered frame
    // decouple, so any frame metric is m1 + m2 + m3.
    std::vector<double> m1(n), m3(n);
    for (long i = 0; i < n; ++i) {
        m1[i] = (y.col(0) - col1 * b0[i]).squaredNorm();
        m3[i] = (y.col(2) - col0 * b1[i]).squaredNorm();
    }
    auto m2 = [&](long a, long b) {
        return (y.col(1) - col0 * b1[a] - col1 * b0[b]).squaredNorm();
    };

    StagedDecision dec;
    dec.msb_bits_p = msb_bits_for(h.col(1).squaredNorm(), snr, rail_bits);
    dec.msb_bits_q = msb_bits_for(h.col(0).squaredNorm(), snr, rail_bits);

    auto class_of = [&](const std::vector<int>& re_idx, const std::vector<int>& im_idx, long i,
                        int bits) {
        const int shift = rail_bits - bits;
        return (re_idx[i] >> shift) * (1 << rail_bits) + (im_idx[i] >> shift);
    };

    // Head stage: pick the class of most-significant bits with the best member.
    std::vector<char> in_a(static_cast<std::size_t>(n), 0);
    std::vector<char> in_c(static_cast<std::size_t>(n), 0);
    double out_p = std::numeric_limits<double>::infinity();
    double out_q = std::numeric_limits<double>::infinity();
    {
        long best_i = 0;
        for (long i = 1; i < n; ++i)
            if (m1[i] < m1[best_i]) best_i = i;
        const int cls = class_of(idx_re0, idx_im0, best_i, dec.msb_bits_p);
        for (long i = 0; i < n; ++i) {
            if (class_of(idx_re0, idx_im0, i, dec.msb_bits_p) == cls)
                in_a[static_cast<std::size_t>(i)] = 1;
            else
                out_p = std::min(out_p, m1[i]);
        }
        best_i = 0;
        for (long i = 1; i < n; ++i)
            if (m3[i] < m3[best_i]) best_i = i;
        const int cls_q = class_of(idx_re1, idx_im1, best_i, dec.msb_bits_q);
        for (long i = 0; i < n; ++i) {
            if (class_of(idx_re1, idx_im1, i, dec.msb_bits_q) == cls_q)
                in_c[static_cast<std::size_t>(i)] = 1;
            else
                out_q = std::min(out_q, m3[i]);
        }
    }

    // Exact search inside the pinned classes.
    double best = std::numeric_limits<double>::infinity();
    long best_a = 0, best_b = 0;
    for (long a = 0; a < n; ++a) {
        if (!in_a[static_cast<std::size_t>(a)]) continue;
        for (long b = 0; b < n; ++b) {
            if (!in_c[static_cast<std::size_t>(b)]) continue;
            const double t = m1[a] + m2(a, b) + m3[b];
            if (t < best) {
                best = t;
                best_a = a;
                best_b = b;
            }
        }
    }

    // Soundness margin: every excluded pair costs at least one out-of-class
    // head or tail term plus the global minima of the other two terms.
    double m1_min = m1[0], m3_min = m3[0];
    for (long i = 1; i < n; ++i) {
        m1_min = std::min(m1_min, m1[i]);
        m3_min = std::min(m3_min, m3[i]);
    }
    double m2_min = std::numeric_limits<double>::infinity();
    for (long a = 0; a < n; ++a)
        for (long b = 0; b < n; ++b) m2_min = std::min(m2_min, m2(a, b));
    const double excluded_floor =
        std::min(out_p + m2_min + m3_min, out_q + m2_min + m1_min);

    if (!(best < excluded_floor)) {
        dec.used_fallback = true;
        best = std::numeric_limits<double>::infinity();
        for (long a = 0; a < n; ++a)
            for (long b = 0; b < n; ++b) {
                const double t = m1[a] + m2(a, b) + m3[b];
                if (t < best) {
                    best = t;
                    best_a = a;
                    best_b = b;
                }
            }
    }
    dec.stream_p = best_a;
    dec.stream_q = best_b;
    return dec;
}

}  // namespace stc
