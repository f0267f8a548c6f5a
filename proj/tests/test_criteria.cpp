#include <cmath>
#include <complex>

#include "doctest.h"
#include "stc/criteria.hpp"
#include "stc/udm.hpp"

using namespace stc;

namespace {

CMatrix column2(std::complex<double> a, std::complex<double> b) {
    CMatrix m(2, 1);
    m(0, 0) = a;
    m(1, 0) = b;
    return m;
}

Codebook hand_flat2(const std::vector<std::pair<std::complex<double>, std::complex<double>>>& pts) {
    Codebook cb;
    cb.family = "hand";
    cb.nt = 2;
    cb.T = 1;
    cb.rate_bits = std::log2(static_cast<double>(pts.size()));
    for (const auto& [a, b] : pts) cb.words.push_back(column2(a, b));
    double total = 0.0;
    for (const auto& w : cb.words) total += w.squaredNorm();
    cb.power_scale = total / (static_cast<double>(cb.words.size()) * 2);
    return cb;
}

}  // namespace

TEST_CASE("product distance of a difference column") {
    using namespace std::complex_literals;
    CHECK(product_distance(column2(1.0 + 1.0i, 2.0)) == 8.0);
    CHECK(product_distance(column2(0.0, 5.0)) == 0.0);
    CMatrix one(1, 1);
    one(0, 0) = 3.0i;
    CHECK(product_distance(one) == 9.0);
    CHECK_THROWS(product_distance(CMatrix::Zero(2, 2)));
}

TEST_CASE("scalar check hits the threshold exactly on square QAM") {
    const Codebook qam = make_qam(4);
    const UniversalityReport rep = check_scalar(qam, 4.0, 1.0);
    CHECK(rep.kind == "scalar");
    CHECK(rep.min_value == 0.0625);
    CHECK(rep.threshold == 0.0625);
    CHECK(rep.pass);
    CHECK(rep.pair_a >= 0);
    CHECK(rep.pair_b > rep.pair_a);
    CHECK(std::norm(qam.words[rep.pair_a](0, 0) - qam.words[rep.pair_b](0, 0)) == rep.min_value);

    CHECK_FALSE(check_scalar(qam, 4.0, 2.0).pass);
    CHECK_THROWS(check_scalar(make_alamouti(make_qam(2)), 2.0, 1.0));
}

TEST_CASE("alternate-flip map keeps the interleaved product above the bound") {
    const AbfCheckResult two = abf_bound_check(2);
    CHECK(two.min_product_raw == 2);
    CHECK(two.pass);
    const AbfCheckResult three = abf_bound_check(3);
    CHECK(three.min_product_raw == 1);  // 8 * 1 == 2^3, the tight case
    CHECK(three.pass);
    for (int b = 1; b <= 10; ++b) CHECK(abf_bound_check(b).pass);
    CHECK_THROWS(abf_bound_check(13));
    CHECK_THROWS(abf_bound_check(0));
}

TEST_CASE("parallel check on the two-branch interleaved code") {
    const Codebook cb =
        make_permutation_code(2, 4, {alt_flip_reversal_perm(2)}, PamSpec{2, 2, 0.0, 0.0});
    const UniversalityReport rep = check_parallel(cb, 4.0, 0.125);
    CHECK(rep.kind == "parallel");
    // single-rail pairs achieve raw displacement product 2, so the minimum
    // product distance is 4 * 2^(-2R)
    CHECK(rep.min_value == 0.015625);
    CHECK(rep.threshold == 0.125 * 0.0625);
    CHECK(rep.pass);

    // repeating the same symbol on both branches squares the scalar minimum
    const Codebook rep2 =
        make_permutation_code(2, 4, {identity_perm(4)}, PamSpec{2, 2, 0.0, 0.0});
    CHECK(min_product_distance(rep2) == 0.00390625);
}

TEST_CASE("orthogonal stacking meets the single-receive-antenna criterion") {
    const Codebook cb = make_alamouti(make_qam(2));
    const UniversalityReport miso = check_miso(cb, 2.0, 0.99);
    CHECK(miso.kind == "miso");
    CHECK(miso.min_value == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(miso.pass);

    const UniversalityReport mimo = check_mimo(cb, 2.0, 2, 0.125);
    CHECK(mimo.kind == "mimo");
    CHECK(mimo.min_value == doctest::Approx(0.0625).epsilon(1e-9));
    CHECK(mimo.pass);
    CHECK_FALSE(check_mimo(cb, 2.0, 2, 0.5).pass);
}

TEST_CASE("determinant form of the two-antenna check on the rotated code") {
    for (int R : {2, 4}) {
        const Codebook cb = make_rotated_qam(R);
        const double expect = 1.0 / (5.0 * std::pow(2.0, R));
        const UniversalityReport rep = check_mimo(cb, R, 2, 0.1);
        CHECK(rep.min_value == doctest::Approx(expect).epsilon(1e-9));
        CHECK(rep.pass);  // 0.1 * 2^-R against 0.2 * 2^-R, a 2x margin
        // extra receive antennas keep min(nr, nt) = 2 factors
        CHECK(check_mimo(cb, R, 3, 0.1).min_value == doctest::Approx(expect).epsilon(1e-9));
    }
    CHECK_THROWS(check_mimo(make_rotated_qam(2), 2.0, 0, 1.0));
}

TEST_CASE("parallel and diagonal-embedded checks agree") {
    const Codebook flat =
        make_permutation_code(2, 4, {alt_flip_reversal_perm(2)}, PamSpec{2, 2, 0.0, 0.0});
    const Codebook diag = make_diagonal_code(flat);
    const UniversalityReport a = check_parallel(flat, 4.0, 0.1);
    const UniversalityReport b = check_mimo(diag, 4.0, 2, 0.1);
    CHECK(a.min_value == doctest::Approx(b.min_value).epsilon(1e-9));
    CHECK(a.pass == b.pass);

    const Codebook udm = make_udm_code(build_tensor_T(2), PamSpec{2, 2, 1.0, 0.0});
    const Codebook udm_diag = make_diagonal_code(udm);
    CHECK(check_parallel(udm, udm.rate_bits, 0.01).min_value ==
          doctest::Approx(check_mimo(udm_diag, udm.rate_bits, 3, 0.01).min_value).epsilon(1e-9));
}

TEST_CASE("histogram is strict below threshold and separates zero pairs") {
    const Codebook cb = hand_flat2({{0.0, 0.0}, {1.0, 0.0}, {2.0, 1.0}});
    // pair (0,1) has product 0; (0,2) has 4; (1,2) has 1
    const PdHistogram h = pd_histogram(cb, {0.5, 1.0, 1.5, 4.0, 5.0});
    CHECK(h.total_pairs == 3);
    CHECK(h.zero_pairs == 1);
    CHECK(h.counts == std::vector<long>{0, 0, 1, 1, 2});

    long a = -1, b = -1, zeros = 0;
    CHECK(min_product_distance(cb, &a, &b, &zeros) == 0.0);
    CHECK(a == 0);
    CHECK(b == 1);
    CHECK(zeros == 1);

    CHECK_THROWS(pd_histogram(make_alamouti(make_qam(2)), {1.0}));
}

TEST_CASE("tie-broken argmin pair is the lexicographically first") {
    // both (0,1) and (2,3) achieve the same product distance
    const Codebook cb = hand_flat2({{0.0, 0.0}, {1.0, 1.0}, {5.0, 3.0}, {6.0, 4.0}});
    long a = -1, b = -1;
    CHECK(min_product_distance(cb, &a, &b) == 1.0);
    CHECK(a == 0);
    CHECK(b == 1);
}

TEST_CASE("expurgation keeps at least half and never lowers the minimum") {
    for (int R : {4, 6}) {
        const Codebook cb =
            make_permutation_code(2, R, {bit_reversal_perm(R / 2)}, PamSpec{2, R / 2, 0.0, 0.0});
        const Codebook kept = expurgate(cb);
        CHECK(kept.size() * 2 >= cb.size());
        CHECK(kept.size() < cb.size());
        CHECK(min_product_distance(kept) >= min_product_distance(cb));
        CHECK(kept.family == cb.family + "|expurgated");
        CHECK(kept.rate_bits ==
              doctest::Approx(std::log2(static_cast<double>(kept.size()))));
        CHECK(kept.nt == cb.nt);
        CHECK(kept.T == 1);
    }
    CHECK_THROWS(expurgate(make_alamouti(make_qam(2))));
}

TEST_CASE("histogram counts grow with the threshold") {
    const Codebook cb =
        make_permutation_code(2, 6, {alt_flip_reversal_perm(3)}, PamSpec{2, 3, 0.0, 0.0});
    const PdHistogram h = pd_histogram(cb, {1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0});
    CHECK(h.zero_pairs == 0);
    for (std::size_t i = 1; i < h.counts.size(); ++i) CHECK(h.counts[i] >= h.counts[i - 1]);
    CHECK(h.counts.back() <= h.total_pairs);
    CHECK(h.total_pairs == 64L * 63 / 2);
}
