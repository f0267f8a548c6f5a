#include "stc/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stc {
namespace {

constexpr long kMaxPoints = 1L << 20;

long checked_pow(long base, int exp) {
    long v = 1;
    for (int i = 0; i < exp; ++i) {
        v *= base;
        if (v > kMaxPoints) throw std::invalid_argument("constellation too large");
    }
    return v;
}

double raw_pam_coordinate(const PamSpec& spec, long index) {
    // index plus accumulated gaps: a gap of gap*q^m precedes every index
    // divisible by q^m and not q^(m+1)
    double gaps = 0.0;
    long qm = 1;
    while (qm <= index) {
        gaps += static_cast<double>(qm) * static_cast<double>(index / qm - index / (qm * spec.q));
        qm *= spec.q;
    }
    return static_cast<double>(index) + spec.gap * gaps;
}

// Shared finishing pass: power bookkeeping and distinctness.
void finalize(Codebook& cb) {
    if (cb.words.empty()) throw std::logic_error("empty codebook");
    double total = 0.0;
    for (const auto& w : cb.words) {
        if (w.rows() != cb.nt || w.cols() != cb.T)
            throw std::logic_error("codeword shape mismatch");
        total += w.squaredNorm();
    }
    cb.power_scale = total / (static_cast<double>(cb.words.size()) * cb.nt * cb.T);

    std::vector<std::vector<double>> keys;
    keys.reserve(cb.words.size());
    for (const auto& w : cb.words) {
        std::vector<double> k;
        k.reserve(static_cast<std::size_t>(w.size()) * 2);
        for (int c = 0; c < w.cols(); ++c)
            for (int r = 0; r < w.rows(); ++r) {
                k.push_back(w(r, c).real());
                k.push_back(w(r, c).imag());
            }
        keys.push_back(std::move(k));
    }
    std::sort(keys.begin(), keys.end());
    if (std::adjacent_find(keys.begin(), keys.end()) != keys.end())
        throw std::logic_error("duplicate codewords");
}

void require_even_rate(int rate_bits, int max_bits) {
    if (rate_bits < 2 || rate_bits % 2 != 0 || rate_bits > max_bits)
        throw std::invalid_argument("rate must be even and within desk scale");
}

}  // namespace

long pam_size(const PamSpec& spec) {
    if (spec.q < 2 || spec.n < 1 || spec.gap < 0)
        throw std::invalid_argument("invalid digit constellation parameters");
    return checked_pow(spec.q, spec.n);
}

double pam_point(const PamSpec& spec, long index) {
    const long size = pam_size(spec);
    if (index < 0 || index >= size) throw std::out_of_range("point index out of range");
    const double width = raw_pam_coordinate(spec, size - 1);
    return raw_pam_coordinate(spec, index) - width / 2.0 + spec.offset;
}

double pam_width(const PamSpec& spec) {
    return raw_pam_coordinate(spec, pam_size(spec) - 1);
}

DigitPermutation identity_perm(long size) {
    DigitPermutation p;
    p.size = size;
    p.map.resize(size);
    for (long i = 0; i < size; ++i) p.map[i] = i;
    return p;
}

DigitPermutation bit_reversal_perm(int nbits) {
    if (nbits < 1 || nbits > 20) throw std::invalid_argument("bit count out of range");
    DigitPermutation p;
    p.size = 1L << nbits;
    p.map.resize(p.size);
    for (long i = 0; i < p.size; ++i) {
        long r = 0;
        for (int b = 0; b < nbits; ++b)
            if (i & (1L << b)) r |= 1L << (nbits - 1 - b);
        p.map[i] = r;
    }
    return p;
}

DigitPermutation alt_flip_reversal_perm(int nbits) {
    DigitPermutation p = bit_reversal_perm(nbits);
    // complement the first, third, ... bit counted from the MSB
    long flip_mask = 0;
    for (int pos = 0; pos < nbits; pos += 2) flip_mask |= 1L << (nbits - 1 - pos);
    for (long i = 0; i < p.size; ++i) p.map[i] ^= flip_mask;
    return p;
}

DigitPermutation digit_reversal_perm(int q, int n) {
    DigitPermutation p;
    p.size = checked_pow(q, n);
    p.map.resize(p.size);
    for (long i = 0; i < p.size; ++i) {
        long x = i;
        long r = 0;
        for (int d = 0; d < n; ++d) {
            r = r * q + x % q;
            x /= q;
        }
        p.map[i] = r;
    }
    return p;
}

DigitPermutation random_permutation(long size, CounterRng& rng) {
    DigitPermutation p = identity_perm(size);
    for (long i = size - 1; i > 0; --i) {
        const long j = static_cast<long>(rng.next_below(static_cast<std::uint64_t>(i) + 1));
        std::swap(p.map[i], p.map[j]);
    }
    return p;
}

DigitPermutation compose(const DigitPermutation& outer, const DigitPermutation& inner) {
    if (outer.size != inner.size) throw std::invalid_argument("permutation size mismatch");
    DigitPermutation p;
    p.size = outer.size;
    p.map.resize(p.size);
    for (long i = 0; i < p.size; ++i) p.map[i] = outer(inner(i));
    return p;
}

bool is_bijection(const DigitPermutation& perm) {
    if (static_cast<long>(perm.map.size()) != perm.size) return false;
    std::vector<bool> seen(perm.size, false);
    for (long v : perm.map) {
        if (v < 0 || v >= perm.size || seen[v]) return false;
        seen[v] = true;
    }
    return true;
}

std::vector<std::complex<double>> qam_grid(int bits) {
    if (bits < 1 || bits > 20) throw std::invalid_argument("grid bits out of range");
    const int bi = (bits + 1) / 2;
    const int bq = bits / 2;
    const long mi = 1L << bi;
    const long mq = 1L << bq;
    std::vector<std::complex<double>> pts;
    pts.reserve(mi * mq);
    const double ci = (mi - 1) / 2.0;
    const double cq = (mq - 1) / 2.0;
    for (long i = 0; i < mi; ++i)
        for (long q = 0; q < mq; ++q) pts.emplace_back(i - ci, q - cq);
    return pts;
}

Codebook make_qam(int rate_bits) {
    require_even_rate(rate_bits, 16);
    Codebook cb;
    cb.family = "qam";
    cb.nt = 1;
    cb.T = 1;
    cb.rate_bits = rate_bits;
    cb.normalization = "integer-grid/2^(R/2)";
    const double scale = std::pow(2.0, -rate_bits / 2.0);
    for (const auto& z : qam_grid(rate_bits)) {
        CMatrix w(1, 1);
        w(0, 0) = z * scale;
        cb.words.push_back(std::move(w));
    }
    finalize(cb);
    return cb;
}

Codebook make_permutation_code(int branches, int rate_bits,
                               const std::vector<DigitPermutation>& perms,
                               const PamSpec& rail_pam) {
    require_even_rate(rate_bits, 24);
    if (branches < 1) throw std::invalid_argument("need at least one branch");
    if (static_cast<int>(perms.size()) != branches - 1)
        throw std::invalid_argument("need exactly branches-1 permutations");
    const long half = 1L << (rate_bits / 2);
    if (pam_size(rail_pam) != half)
        throw std::invalid_argument("rail constellation size must be 2^(R/2)");
    for (const auto& p : perms) {
        if (p.size != half) throw std::invalid_argument("permutation size must be 2^(R/2)");
        if (!is_bijection(p)) throw std::invalid_argument("permutation must be a bijection");
    }

    Codebook cb;
    cb.family = "permutation";
    cb.nt = branches;
    cb.T = 1;
    cb.rate_bits = rate_bits;
    cb.normalization = "rail-pam/2^(R/2)";
    const double scale = std::pow(2.0, -rate_bits / 2.0);
    const long total = half * half;
    cb.words.reserve(total);
    for (long idx = 0; idx < total; ++idx) {
        const long ii = idx / half;
        const long iq = idx % half;
        CMatrix w(branches, 1);
        w(0, 0) = std::complex<double>(pam_point(rail_pam, ii), pam_point(rail_pam, iq)) * scale;
        for (int l = 1; l < branches; ++l) {
            const auto& p = perms[l - 1];
            w(l, 0) = std::complex<double>(pam_point(rail_pam, p(ii)), pam_point(rail_pam, p(iq))) * scale;
        }
        cb.words.push_back(std::move(w));
    }
    finalize(cb);
    return cb;
}

Codebook make_udm_code(const UdmFamily& family, const PamSpec& pam) {
    if (pam.q != family.field.size())
        throw std::invalid_argument("digit alphabet must match the family's field size");
    if (pam.n != family.n) throw std::invalid_argument("digit count must match the family size");
    const long points = pam_size(pam);
    if (points * points > kMaxPoints) throw std::invalid_argument("codebook too large");

    const int q = pam.q;
    const int n = pam.n;
    auto to_digits = [&](long v) {
        std::vector<int> d(n);
        for (int i = n - 1; i >= 0; --i) {
            d[i] = static_cast<int>(v % q);
            v /= q;
        }
        return d;  // d[0] is the most significant digit
    };
    auto to_index = [&](const std::vector<int>& d) {
        long v = 0;
        for (int x : d) v = v * q + x;
        return v;
    };

    // branch index tables, one per matrix
    std::vector<std::vector<long>> branch_index(family.L, std::vector<long>(points));
    for (long v = 0; v < points; ++v) {
        const auto digits = to_digits(v);
        for (int l = 0; l < family.L; ++l)
            branch_index[l][v] = to_index(field_apply(family.field, family.mats[l], digits));
    }

    Codebook cb;
    cb.family = "udm-" + family.provenance;
    cb.nt = family.L;
    cb.T = 1;
    cb.rate_bits = 2.0 * n * std::log2(static_cast<double>(q));
    cb.normalization = "gap-pam/q^n";
    const double scale = std::pow(static_cast<double>(q), -n);
    cb.words.reserve(points * points);
    for (long vi = 0; vi < points; ++vi)
        for (long vq = 0; vq < points; ++vq) {
            CMatrix w(family.L, 1);
            for (int l = 0; l < family.L; ++l)
                w(l, 0) = std::complex<double>(pam_point(pam, branch_index[l][vi]),
                                               pam_point(pam, branch_index[l][vq])) *
                          scale;
            cb.words.push_back(std::move(w));
        }
    finalize(cb);
    return cb;
}

Codebook make_rotated_qam(int rate_bits) {
    require_even_rate(rate_bits, 8);
    const int b = rate_bits / 2;
    const auto grid = qam_grid(b);
    const double theta1 = 0.5 * std::atan(2.0);
    const double theta2 = 0.5 * std::atan(0.5);
    const double c1 = std::cos(theta1), s1 = std::sin(theta1);
    const double c2 = std::cos(theta2), s2 = std::sin(theta2);
    const double scale = std::pow(2.0, (2.0 - rate_bits) / 4.0);

    Codebook cb;
    cb.family = "rotated-qam";
    cb.nt = 2;
    cb.T = 2;
    cb.rate_bits = rate_bits;
    cb.normalization = "integer-grid*2^((2-R)/4)";
    const long m = static_cast<long>(grid.size());
    cb.words.reserve(m * m * m * m);
    for (const auto& u1 : grid)
        for (const auto& u2 : grid)
            for (const auto& u3 : grid)
                for (const auto& u4 : grid) {
                    CMatrix w(2, 2);
                    w(0, 0) = (c1 * u1 - s1 * u2) * scale;
                    w(1, 1) = (s1 * u1 + c1 * u2) * scale;
                    w(1, 0) = (c2 * u3 - s2 * u4) * scale;
                    w(0, 1) = (s2 * u3 + c2 * u4) * scale;
                    cb.words.push_back(std::move(w));
                }
    finalize(cb);
    return cb;
}

Codebook make_alamouti(const Codebook& scalar) {
    if (scalar.nt != 1 || scalar.T != 1)
        throw std::invalid_argument("orthogonal stacking needs a scalar codebook");
    Codebook cb;
    cb.family = "alamouti(" + scalar.family + ")";
    cb.nt = 2;
    cb.T = 2;
    cb.rate_bits = scalar.rate_bits;
    cb.normalization = scalar.normalization;
    cb.words.reserve(scalar.words.size() * scalar.words.size());
    for (const auto& a : scalar.words)
        for (const auto& b : scalar.words) {
            CMatrix w(2, 2);
            w(0, 0) = a(0, 0);
            w(1, 0) = b(0, 0);
            w(0, 1) = -std::conj(b(0, 0));
            w(1, 1) = std::conj(a(0, 0));
            cb.words.push_back(std::move(w));
        }
    finalize(cb);
    return cb;
}

Codebook make_vblast_grid(int nt, int points_per_side) {
    if (nt < 1 || nt > 8) throw std::invalid_argument("antenna count out of range");
    if (points_per_side < 2) throw std::invalid_argument("need at least 2 points per side");
    const int m = points_per_side;
    std::vector<std::complex<double>> grid;
    grid.reserve(static_cast<std::size_t>(m) * m);
    const double c = (m - 1) / 2.0;
    const double scale = 1.0 / m;
    for (int i = 0; i < m; ++i)
        for (int q = 0; q < m; ++q) grid.emplace_back((i - c) * scale, (q - c) * scale);

    const long per_antenna = static_cast<long>(grid.size());
    long total = 1;
    for (int a = 0; a < nt; ++a) {
        total *= per_antenna;
        if (total > kMaxPoints) throw std::invalid_argument("codebook too large");
    }

    Codebook cb;
    cb.family = "vblast";
    cb.nt = nt;
    cb.T = 1;
    cb.rate_bits = 2.0 * nt * std::log2(static_cast<double>(m));
    cb.normalization = "per-antenna-grid/m";
    cb.words.reserve(total);
    for (long idx = 0; idx < total; ++idx) {
        CMatrix w(nt, 1);
        long rem = idx;
        for (int a = nt - 1; a >= 0; --a) {
            w(a, 0) = grid[rem % per_antenna];
            rem /= per_antenna;
        }
        cb.words.push_back(std::move(w));
    }
    finalize(cb);
    return cb;
}

Codebook make_vblast(int nt, int bits_per_antenna) {
    if (bits_per_antenna < 2 || bits_per_antenna % 2 != 0)
        throw std::invalid_argument("bits per antenna must be even and >= 2");
    Codebook cb = make_vblast_grid(nt, 1 << (bits_per_antenna / 2));
    cb.normalization = "per-antenna-grid/2^(b/2)";
    return cb;
}

namespace {

void require_flat_parallel(const Codebook& stream, int nt) {
    if (stream.nt != nt || stream.T != 1)
        throw std::invalid_argument("stream code must be a flat parallel code with nt branches");
}

}  // namespace

Codebook make_dblast_two_stream(int nt, const Codebook& stream_code) {
    require_flat_parallel(stream_code, nt);
    Codebook cb;
    cb.family = "dblast(" + stream_code.family + ")";
    cb.nt = nt;
    cb.T = nt + 1;
    cb.rate_bits = 2.0 * std::log2(static_cast<double>(stream_code.size())) / (nt + 1);
    cb.normalization = stream_code.normalization;
    cb.words.reserve(stream_code.words.size() * stream_code.words.size());
    for (const auto& p : stream_code.words)
        for (const auto& q : stream_code.words) {
            CMatrix w = CMatrix::Zero(nt, nt + 1);
            for (int l = 1; l <= nt; ++l) {
                w(nt - l, l - 1) = p(l - 1, 0);
                w(nt - l, l) = q(l - 1, 0);
            }
            cb.words.push_back(std::move(w));
        }
    finalize(cb);
    return cb;
}

Codebook make_timespace(int nt, const Codebook& stream_code) {
    Codebook base = make_dblast_two_stream(nt, stream_code);
    Codebook cb;
    cb.family = "timespace(" + stream_code.family + ")";
    cb.nt = nt + 1;
    cb.T = nt;
    cb.rate_bits = 2.0 * std::log2(static_cast<double>(stream_code.size())) / nt;
    cb.normalization = stream_code.normalization;
    cb.words.reserve(base.words.size());
    for (const auto& w : base.words) cb.words.push_back(w.transpose());
    finalize(cb);
    return cb;
}

Codebook make_diagonal_code(const Codebook& stream_code) {
    if (stream_code.T != 1) throw std::invalid_argument("stream code must be flat parallel");
    const int nt = stream_code.nt;
    Codebook cb;
    cb.family = "diagonal(" + stream_code.family + ")";
    cb.nt = nt;
    cb.T = nt;
    cb.rate_bits = stream_code.rate_bits / nt;
    cb.normalization = stream_code.normalization;
    cb.words.reserve(stream_code.words.size());
    for (const auto& s : stream_code.words) {
        CMatrix w = CMatrix::Zero(nt, nt);
        for (int l = 0; l < nt; ++l) w(l, l) = s(l, 0);
        cb.words.push_back(std::move(w));
    }
    finalize(cb);
    return cb;
}

PermutationSearchResult search_permutation_code(int branches, int rate_bits, int draws,
                                                std::uint64_t seed) {
    if (draws < 1) throw std::invalid_argument("need at least one draw");
    const long half = 1L << (rate_bits / 2);
    const PamSpec rail{2, rate_bits / 2, 0.0, 0.0};

    PermutationSearchResult best;
    bool have_best = false;
    CounterRng rng(seed, /*stream=*/1);
    for (int d = 0; d < draws; ++d) {
        std::vector<DigitPermutation> perms;
        perms.reserve(branches - 1);
        for (int l = 1; l < branches; ++l) perms.push_back(random_permutation(half, rng));
        Codebook cb = make_permutation_code(branches, rate_bits, perms, rail);
        double score = 0.0;
        const long n = cb.size();
        for (long a = 0; a < n; ++a)
            for (long b = a + 1; b < n; ++b) {
                double pd = 1.0;
                for (int l = 0; l < branches; ++l)
                    pd *= std::norm(cb.words[a](l, 0) - cb.words[b](l, 0));
                score += 1.0 / pd;
            }
        if (!have_best || score < best.score) {
            best.codebook = std::move(cb);
            best.perms = std::move(perms);
            best.score = score;
            have_best = true;
        }
    }
    best.codebook.seed = seed;
    return best;
}

}  // namespace stc
