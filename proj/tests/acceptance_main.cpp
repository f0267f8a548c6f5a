// Acceptance harness: one line per criterion, nonzero exit if any fail.
// Every tolerance and seed is pinned here, not taken from the environment.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "stc/channel.hpp"
#include "stc/criteria.hpp"
#include "stc/experiment.hpp"
#include "stc/udm.hpp"
#include "stc/waterfill.hpp"

using namespace stc;

namespace {

constexpr std::uint64_t kSeed = 20260815;

int g_fails = 0;

void report(int criterion, const std::string& what, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", criterion, what.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_fails;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// Least-squares slope of y against x.
double lsq_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return sxy / sxx;
}

double db_to_snr(double db) { return std::pow(10.0, db / 10.0); }

// ---------------------------------------------------------------- criterion 1

void criterion1_interleaver_bound() {
    bool ok = true;
    double worst_ratio = std::numeric_limits<double>::infinity();
    for (int b = 1; b <= 12; ++b) {
        const AbfCheckResult r = abf_bound_check(b);
        ok = ok && r.pass && r.min_product_norm >= r.bound * (1.0 - 1e-12);
        worst_ratio = std::min(worst_ratio, r.min_product_norm / r.bound);
    }
    report(1, "alternate-flip displacement product stays above 1/(8*2^(R/2)) for widths 1..12", ok,
           "worst margin ratio " + fmt(worst_ratio) + ", tolerance: exact integer comparison");
}

// ---------------------------------------------------------------- criterion 2

double min_det_sq(const Codebook& cb) {
    double best = std::numeric_limits<double>::infinity();
    for (long a = 0; a < cb.size(); ++a)
        for (long b = a + 1; b < cb.size(); ++b) {
            const CMatrix& xa = cb.words[static_cast<std::size_t>(a)];
            const CMatrix& xb = cb.words[static_cast<std::size_t>(b)];
            const std::complex<double> det = (xa(0, 0) - xb(0, 0)) * (xa(1, 1) - xb(1, 1)) -
                                             (xa(0, 1) - xb(0, 1)) * (xa(1, 0) - xb(1, 0));
            best = std::min(best, std::norm(det));
        }
    return best;
}

void criterion2_rotated_determinant() {
    bool ok = true;
    std::ostringstream detail;
    for (int R : {2, 4, 6}) {
        const Codebook cb = make_rotated_qam(R);
        const double mn = min_det_sq(cb);
        const double bound = 1.0 / (10.0 * std::pow(2.0, R));
        const double exact = 1.0 / (5.0 * std::pow(2.0, R));
        ok = ok && mn >= bound;
        ok = ok && std::abs(mn - exact) <= 1e-9 * exact;
        if (R <= 4) {
            // the singular-value route must reproduce the determinant scan
            const UniversalityReport rep = check_mimo(cb, R, 2, 0.1);
            ok = ok && rep.pass && std::abs(rep.min_value - mn) <= 1e-9 * mn;
        }
        detail << "R=" << R << " min|det|^2=" << fmt(mn) << " bound=" << fmt(bound) << "; ";
    }
    report(2, "rotated-pair code keeps min |det D|^2 >= 1/(10*2^R) at R in {2,4,6}", ok,
           detail.str() + "pinned value 1/(5*2^R) rel 1e-9");
}

// ---------------------------------------------------------------- criterion 3

void criterion3_family_suite() {
    bool ok = true;
    std::string first_bad;

    auto expect_pass = [&](UdmFamily fam, const std::string& label) {
        const UdmVerifyResult r = udm_verify(fam);
        if (!r.pass) {
            ok = false;
            if (first_bad.empty()) first_bad = label;
        }
    };

    for (int n = 1; n <= 16; ++n) expect_pass(build_identity_pair(n), "identity-pair n=" + std::to_string(n));
    for (int n = 1; n <= 16; ++n) expect_pass(build_tensor_T(n), "tensor n=" + std::to_string(n));
    for (int n = 1; n <= 9; ++n) expect_pass(build_L4_F3(n), "l4-f3 n=" + std::to_string(n));

    const std::vector<Field> fields = {Field::make(2, 1), Field::make(3, 1), Field::make(2, 2),
                                       Field::make(5, 1)};
    for (const Field& f : fields)
        for (int L = 2; L <= f.size() + 1; ++L)
            for (int n = 1; n <= 8; ++n)
                expect_pass(build_pascal(n, L, f),
                            "pascal q=" + std::to_string(f.size()) + " L=" + std::to_string(L) +
                                " n=" + std::to_string(n));

    // exhaustive nonexistence of a four-member binary family at size two
    const Field f2 = Field::make(2, 1);
    std::vector<FieldMatrix> all;
    for (int bits = 0; bits < 16; ++bits) {
        FieldMatrix m(2, 2);
        m.at(0, 0) = bits & 1;
        m.at(0, 1) = (bits >> 1) & 1;
        m.at(1, 0) = (bits >> 2) & 1;
        m.at(1, 1) = (bits >> 3) & 1;
        all.push_back(m);
    }
    long passing = 0;
    for (int a = 0; a < 16; ++a)
        for (int b = 0; b < 16; ++b)
            for (int c = 0; c < 16; ++c)
                for (int d = 0; d < 16; ++d) {
                    UdmFamily fam;
                    fam.field = f2;
                    fam.n = 2;
                    fam.L = 4;
                    fam.mats = {all[static_cast<std::size_t>(a)], all[static_cast<std::size_t>(b)],
                                all[static_cast<std::size_t>(c)], all[static_cast<std::size_t>(d)]};
                    fam.provenance = "custom";
                    if (udm_verify(fam).pass) ++passing;
                }
    ok = ok && passing == 0;

    report(3,
           "decodable families verify for {I,D} n<=16, 3-member tensor n<=16, 4-member ternary "
           "n<=9, binomial q in {2,3,4,5}; no 4-member binary family exists at n=2",
           ok,
           passing == 0 && first_bad.empty()
               ? "16^4 quadruples scanned, 0 decodable"
               : "first failure: " + (first_bad.empty() ? "quadruple scan" : first_bad));
}

// ---------------------------------------------------------------- criterion 4

double rate_split_oracle(const std::vector<double>& sq, double rate_bits) {
    const std::size_t m = sq.size();
    double best = std::numeric_limits<double>::infinity();
    if (m == 2) {
        double lo = 0.0, hi = rate_bits, best_r = 0.0;
        for (int round = 0; round < 6; ++round) {
            const int steps = 400;
            for (int i = 0; i <= steps; ++i) {
                const double r1 = lo + (hi - lo) * i / steps;
                const double v = (std::pow(2.0, r1) - 1.0) * sq[0] +
                                 (std::pow(2.0, rate_bits - r1) - 1.0) * sq[1];
                if (v < best) {
                    best = v;
                    best_r = r1;
                }
            }
            const double span = (hi - lo) / steps * 4;
            lo = std::max(0.0, best_r - span);
            hi = std::min(rate_bits, best_r + span);
        }
        return best;
    }
    double c1 = rate_bits / 2, c2 = rate_bits / 2, span = rate_bits / 2;
    for (int round = 0; round < 7; ++round) {
        const int steps = 60;
        double nb1 = c1, nb2 = c2;
        for (int i = 0; i <= steps; ++i)
            for (int j = 0; j <= steps; ++j) {
                const double r1 = c1 - span + 2 * span * i / steps;
                const double r2 = c2 - span + 2 * span * j / steps;
                const double r3 = rate_bits - r1 - r2;
                if (r1 < 0 || r2 < 0 || r3 < 0) continue;
                const double v = (std::pow(2.0, r1) - 1.0) * sq[0] +
                                 (std::pow(2.0, r2) - 1.0) * sq[1] +
                                 (std::pow(2.0, r3) - 1.0) * sq[2];
                if (v < best) {
                    best = v;
                    nb1 = r1;
                    nb2 = r2;
                }
            }
        c1 = nb1;
        c2 = nb2;
        span = 2 * span * 4 / steps;
    }
    return best;
}

void criterion4_waterfill_oracle() {
    CounterRng rng(kSeed, 0);
    double max_rel = 0.0, max_residual = 0.0;
    bool ok = true;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t m = 2 + (trial % 2);
        std::vector<double> sq(m);
        RVector sv(static_cast<long>(m));
        for (std::size_t i = 0; i < m; ++i) {
            sq[i] = 0.05 + 2.0 * rng.next_double();
            sv(static_cast<long>(i)) = std::sqrt(sq[i]);
        }
        const double rate = 0.5 + 5.5 * rng.next_double();

        const double mine = universal_criterion(sv, rate);
        const double oracle = rate_split_oracle(sq, rate);
        const double rel = std::abs(mine - oracle) / oracle;
        max_rel = std::max(max_rel, rel);
        if (rel > 1e-3) ok = false;

        const WorstCaseResult res = solve_worst_channel(sv, rate, 8.0);
        std::sort(sq.begin(), sq.end());
        double bits = 0.0;
        for (int l = 0; l < res.active_k; ++l)
            bits += std::log2(1.0 / (res.lagrange_level * sq[static_cast<std::size_t>(l)]));
        const double residual = std::abs(bits - rate);
        max_residual = std::max(max_residual, residual);
        if (residual > 1e-9) ok = false;
    }
    report(4, "water-level criterion matches the rate-split grid oracle on 1000 random instances",
           ok,
           "max rel err " + fmt(max_rel) + " (tol 1e-3), max rate residual " + fmt(max_residual) +
               " (tol 1e-9)");
}

// ---------------------------------------------------------------- criterion 5

void criterion5_outage() {
    bool ok = true;
    std::ostringstream detail;

    for (int n : {2, 3, 4}) {
        const OutageCurve curve = outage_curve_analytic(rayleigh_exponents(n, n));
        for (int s = 0; s <= n; ++s) {
            const auto& [r, d] = curve.breakpoints[static_cast<std::size_t>(s)];
            if (r != static_cast<double>(s) || d != static_cast<double>((n - s) * (n - s)))
                ok = false;
        }
    }

    const FadingModel model = FadingModel::rayleigh(2, 2);

    auto slope_for = [&](double r, const std::vector<double>& dbs,
                         const std::vector<long>& trials) {
        std::vector<double> xs, ys;
        for (std::size_t i = 0; i < dbs.size(); ++i) {
            const double snr = db_to_snr(dbs[i]);
            const double rate = r * std::log2(snr);
            const OutageEstimate est =
                outage_prob_mc(model, rate, snr, trials[i], kSeed + i);
            xs.push_back(std::log2(snr));
            ys.push_back(-std::log2(est.probability));
        }
        return lsq_slope(xs, ys);
    };

    const double s1 = slope_for(1.0, {15.0, 20.0, 25.0, 30.0},
                                {1000000, 1000000, 1000000, 1000000});
    const double s05 = slope_for(0.5, {15.0, 18.0, 21.0}, {10000000, 30000000, 100000000});
    ok = ok && std::abs(s1 - 1.0) <= 0.3;
    ok = ok && std::abs(s05 - 2.5) <= 0.3;
    detail << "breakpoints (s,(n-s)^2) exact for n in {2,3,4}; slope(r=1)=" << fmt(s1)
           << " target 1.0+-0.3; slope(r=0.5)=" << fmt(s05) << " target 2.5+-0.3";
    report(5, "measured 2x2 outage slopes track the analytic tradeoff curve", ok, detail.str());
}

// ---------------------------------------------------------------- criterion 6

// dB at which the measured curve crosses target_pe, by linear interpolation of
// log10(pe) against dB; requires a bracketing pair.
double crossing_db(const std::vector<double>& dbs, const std::vector<double>& pe,
                   double target_pe, bool& bracketed) {
    const double ty = std::log10(target_pe);
    for (std::size_t i = 1; i < dbs.size(); ++i) {
        const double y0 = std::log10(pe[i - 1]);
        const double y1 = std::log10(pe[i]);
        if ((y0 >= ty && y1 <= ty) || (y0 <= ty && y1 >= ty)) {
            bracketed = true;
            return dbs[i - 1] + (dbs[i] - dbs[i - 1]) * (ty - y0) / (y1 - y0);
        }
    }
    bracketed = false;
    return 0.0;
}

void criterion6_orthogonal_vs_diagonal() {
    const FadingModel model = FadingModel::rayleigh(1, 2);
    const Codebook alam = make_alamouti(make_qam(2));
    const Codebook diag = make_diagonal_code(
        make_permutation_code(2, 4, {alt_flip_reversal_perm(2)}, PamSpec{2, 2, 0.0, 0.0}));

    const std::vector<double> dbs_a = {12.0, 15.0, 18.0, 21.0};
    const std::vector<double> dbs_d = {14.0, 17.0, 20.0, 23.0};
    const std::vector<long> trials(4, 1000000);
    const SimResult sa = simulate_pe(alam, model, dbs_a, trials, kSeed);
    const SimResult sd = simulate_pe(diag, model, dbs_d, trials, kSeed + 1);

    bool ba = false, bd = false;
    const double xa = crossing_db(dbs_a, sa.pe, 1e-3, ba);
    const double xd = crossing_db(dbs_d, sd.pe, 1e-3, bd);
    const double gap = xd - xa;
    const bool ok = ba && bd && std::abs(gap - 1.5) <= 0.7;
    report(6, "diagonal two-branch code trails the orthogonal stack by about 1.5 dB at Pe=1e-3",
           ok,
           "crossings " + fmt(xa) + " dB vs " + fmt(xd) + " dB, gap " + fmt(gap) +
               " dB, tolerance 1.5+-0.7, 1e6 trials/point");
}

// ---------------------------------------------------------------- criterion 7

Codebook vblast_rect(int bits_per_antenna) {
    const auto grid = qam_grid(bits_per_antenna);
    const long m = static_cast<long>(grid.size());
    Codebook cb;
    cb.family = "vblast-rect" + std::to_string(bits_per_antenna);
    cb.nt = 2;
    cb.T = 1;
    cb.rate_bits = 2.0 * bits_per_antenna;
    cb.normalization = "unit-spaced rectangular grid per antenna";
    for (long a = 0; a < m; ++a)
        for (long b = 0; b < m; ++b) {
            CMatrix w(2, 1);
            w(0, 0) = grid[static_cast<std::size_t>(a)];
            w(1, 0) = grid[static_cast<std::size_t>(b)];
            cb.words.push_back(std::move(w));
        }
    double total = 0.0;
    for (const auto& w : cb.words) total += w.squaredNorm();
    cb.power_scale = total / (static_cast<double>(cb.words.size()) * 2.0);
    return cb;
}

void criterion7_independent_streams() {
    // per-antenna constellation sized so the total rate is log2(snr): with b
    // bits per antenna the operating point is snr = 2^(2b)
    const FadingModel model = FadingModel::rayleigh(2, 2);
    SimResult combined;
    combined.seed = kSeed;
    for (int b : {3, 4, 5}) {
        const Codebook cb = vblast_rect(b);
        const double snr_db = 10.0 * std::log10(std::pow(2.0, 2.0 * b));
        const SimResult one =
            simulate_pe(cb, model, {snr_db}, {1000000}, kSeed + static_cast<std::uint64_t>(b));
        combined.snr_db.push_back(one.snr_db[0]);
        combined.pe.push_back(one.pe[0]);
        combined.ci_halfwidth.push_back(one.ci_halfwidth[0]);
        combined.trials.push_back(one.trials[0]);
        combined.errors.push_back(one.errors[0]);
    }
    const SlopeFit fit = estimate_diversity(combined);
    const bool ok = std::abs(fit.slope - 1.0) <= 0.3;
    std::ostringstream detail;
    detail << "pe {";
    for (double p : combined.pe) detail << fmt(p) << " ";
    detail << "} at {18.06, 24.08, 30.10} dB, fitted slope " << fmt(fit.slope)
           << ", tolerance 1.0+-0.3, 1e6 trials/point, seed " << kSeed;
    report(7, "independent per-antenna streams at full multiplexing fit unit diversity", ok,
           detail.str());
}

// ---------------------------------------------------------------- criterion 8

void criterion8_check_consistency() {
    bool ok = true;
    double worst = 0.0;

    std::vector<Codebook> flats;
    flats.push_back(make_permutation_code(2, 2, {identity_perm(2)}, PamSpec{2, 1, 0.0, 0.0}));
    flats.push_back(make_permutation_code(2, 4, {bit_reversal_perm(2)}, PamSpec{2, 2, 0.0, 0.0}));
    flats.push_back(
        make_permutation_code(2, 4, {alt_flip_reversal_perm(2)}, PamSpec{2, 2, 0.0, 0.0}));
    flats.push_back(
        make_permutation_code(2, 6, {alt_flip_reversal_perm(3)}, PamSpec{2, 3, 0.0, 0.0}));
    flats.push_back(make_udm_code(build_identity_pair(2), PamSpec{2, 2, 1.0, 0.0}));
    flats.push_back(make_udm_code(build_identity_pair(3), PamSpec{2, 3, 1.0, 0.0}));
    flats.push_back(make_udm_code(build_tensor_T(2), PamSpec{2, 2, 1.0, 0.0}));
    flats.push_back(make_udm_code(build_L4_F3(2), PamSpec{3, 2, 1.0, 0.0}));

    for (const Codebook& cb : flats) {
        const UniversalityReport a = check_parallel(cb, cb.rate_bits, 0.01);
        const UniversalityReport b =
            check_mimo(make_diagonal_code(cb), cb.rate_bits, cb.nt, 0.01);
        const double diff = std::abs(a.min_value - b.min_value);
        worst = std::max(worst, diff);
        if (diff > 1e-9 * std::max(1.0, a.min_value)) ok = false;
    }

    std::vector<Codebook> squares;
    squares.push_back(make_rotated_qam(2));
    squares.push_back(make_rotated_qam(4));
    squares.push_back(make_alamouti(make_qam(2)));
    squares.push_back(make_alamouti(make_qam(4)));
    for (const Codebook& cb : squares) {
        const double det = min_det_sq(cb);
        const UniversalityReport rep = check_mimo(cb, cb.rate_bits, 2, 0.01);
        const double diff = std::abs(rep.min_value - det);
        worst = std::max(worst, diff);
        if (diff > 1e-9 * std::max(1.0, det)) ok = false;
    }

    report(8,
           "branch-product, diagonal-embedding and determinant forms of the check agree on every "
           "constructed family",
           ok, "worst absolute gap " + fmt(worst) + ", tolerance 1e-9");
}

// ---------------------------------------------------------------- criterion 9

void criterion9_expurgation() {
    bool ok = true;
    std::ostringstream detail;
    for (int R : {4, 6}) {
        const PermutationSearchResult found = search_permutation_code(2, R, 4, kSeed);
        const Codebook& cb = found.codebook;
        long zeros = 0;
        const double pre = min_product_distance(cb, nullptr, nullptr, &zeros);
        const Codebook kept = expurgate(cb);
        const double post = min_product_distance(kept);
        ok = ok && zeros == 0;
        ok = ok && kept.size() * 2 >= cb.size();
        ok = ok && post >= pre;

        const PdHistogram h =
            pd_histogram(cb, {0.25 * pre, 0.5 * pre, pre, 2.0 * pre, 4.0 * pre, 8.0 * pre});
        for (std::size_t i = 1; i < h.counts.size(); ++i)
            if (h.counts[i] < h.counts[i - 1]) ok = false;
        detail << "R=" << R << " kept " << kept.size() << "/" << cb.size() << " min pd "
               << fmt(pre) << " -> " << fmt(post) << "; ";
    }
    report(9, "expurgating the worst half never lowers the minimum product distance", ok,
           detail.str() + "seeded draws, monotone histogram");
}

// --------------------------------------------------------------- criterion 10

std::string run_to(const Json& doc, const std::string& dir, int threads) {
    std::filesystem::remove_all(dir);
    RunOptions opts;
    opts.out_dir = dir;
    opts.threads_override = threads;
    (void)run_experiment(parse_config(doc), opts);
    return dir;
}

void criterion10_determinism() {
    bool ok = true;
    const Json outage_doc = Json::parse(
        R"({"job": "outage", "channel": {"model": "rayleigh", "nr": 2, "nt": 2},
            "multiplexing": 1.0, "snr_db": [12.0, 16.0], "trials": 20000, "seed": 11})");
    run_to(outage_doc, "acceptance_out/outage_a", 0);
    run_to(outage_doc, "acceptance_out/outage_b", 4);
    ok = ok && read_text_file("acceptance_out/outage_a/outage.csv") ==
                   read_text_file("acceptance_out/outage_b/outage.csv");

    const Json sim_doc = Json::parse(
        R"({"job": "simulate", "code": {"family": "alamouti", "rate_bits": 2},
            "channel": {"model": "rayleigh", "nr": 1, "nt": 2},
            "snr_db": [10.0, 14.0], "trials": 20000, "seed": 12})");
    run_to(sim_doc, "acceptance_out/sim_a", 0);
    run_to(sim_doc, "acceptance_out/sim_b", 3);
    ok = ok && read_text_file("acceptance_out/sim_a/pe.csv") ==
                   read_text_file("acceptance_out/sim_b/pe.csv");

    const Json search_doc = Json::parse(
        R"({"job": "construct",
            "code": {"family": "permutation-search", "branches": 2, "rate_bits": 4, "draws": 5},
            "seed": 13})");
    run_to(search_doc, "acceptance_out/search_a", 0);
    run_to(search_doc, "acceptance_out/search_b", 0);
    ok = ok && read_text_file("acceptance_out/search_a/codebook.json") ==
                   read_text_file("acceptance_out/search_b/codebook.json");

    report(10, "stochastic jobs re-run with the same seed are byte-identical across thread counts",
           ok, "outage.csv, pe.csv, codebook.json compared whole-file");
}

}  // namespace

int main() {
    criterion1_interleaver_bound();
    criterion2_rotated_determinant();
    criterion3_family_suite();
    criterion4_waterfill_oracle();
    criterion5_outage();
    criterion6_orthogonal_vs_diagonal();
    criterion7_independent_streams();
    criterion8_check_consistency();
    criterion9_expurgation();
    criterion10_determinism();
    if (g_fails > 0) std::printf("%d criterion(s) failed\n", g_fails);
    return g_fails > 0 ? 1 : 0;
}
