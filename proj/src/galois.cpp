#include "stc/galois.hpp"

#include <stdexcept>

namespace stc {
namespace {

bool is_prime(int p) {
    if (p < 2) return false;
    for (int d = 2; static_cast<long long>(d) * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

// Polynomials over GF(p) as coefficient vectors, constant term first.
std::vector<int> poly_from_index(long long idx, int p) {
    std::vector<int> c;
    while (idx > 0) {
        c.push_back(static_cast<int>(idx % p));
        idx /= p;
    }
    return c;
}

int poly_degree(const std::vector<int>& a) {
    for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i)
        if (a[i] != 0) return i;
    return -1;
}

std::vector<int> poly_mul(const std::vector<int>& a, const std::vector<int>& b, int p) {
    if (a.empty() || b.empty()) return {};
    std::vector<int> c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    }
    return c;
}

void poly_mod(std::vector<int>& a, const std::vector<int>& mod, int p) {
    const int dm = poly_degree(mod);
    const int lead_inv = [&] {
        // modulus is monic in all uses, but keep this general
        int lead = mod[dm];
        for (int x = 1; x < p; ++x)
            if (lead * x % p == 1) return x;
        throw std::logic_error("non-invertible leading coefficient");
    }();
    for (int d = poly_degree(a); d >= dm; d = poly_degree(a)) {
        const int factor = a[d] * lead_inv % p;
        for (int i = 0; i <= dm; ++i) {
            const int sub = factor * mod[i] % p;
            a[d - dm + i] = ((a[d - dm + i] - sub) % p + p) % p;
        }
    }
    a.resize(dm);
}

long long poly_to_index(const std::vector<int>& a, int p) {
    long long idx = 0;
    for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i) idx = idx * p + a[i];
    return idx;
}

bool poly_is_irreducible(const std::vector<int>& cand, int p) {
    const int deg = poly_degree(cand);
    if (deg < 1) return false;
    if (deg == 1) return true;
    // Trial division by every monic polynomial of degree 1..deg/2.
    for (int d = 1; 2 * d <= deg; ++d) {
        long long count = 1;
        for (int i = 0; i < d; ++i) count *= p;
        for (long long low = 0; low < count; ++low) {
            std::vector<int> divisor = poly_from_index(low, p);
            divisor.resize(d + 1, 0);
            divisor[d] = 1;
            std::vector<int> rem = cand;
            poly_mod(rem, divisor, p);
            if (poly_degree(rem) < 0) return false;
        }
    }
    return true;
}

std::vector<long long> prime_factors(long long n) {
    std::vector<long long> fs;
    for (long long d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            fs.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) fs.push_back(n);
    return fs;
}

}  // namespace

Field Field::make(int p, int m) {
    if (!is_prime(p)) throw std::invalid_argument("field characteristic must be prime");
    if (m < 1) throw std::invalid_argument("extension degree must be >= 1");
    long long size = 1;
    for (int i = 0; i < m; ++i) {
        size *= p;
        if (size > (1 << 16)) throw std::invalid_argument("field size exceeds 2^16");
    }

    Field f;
    f.p_ = p;
    f.m_ = m;
    f.size_ = static_cast<int>(size);

    // Lowest-lexicographic monic irreducible of degree m. Candidates are
    // scanned by the integer encoding of their low m coefficients.
    std::vector<int> mod;
    for (long long low = 0;; ++low) {
        std::vector<int> cand = poly_from_index(low, p);
        cand.resize(m + 1, 0);
        cand[m] = 1;
        if (poly_is_irreducible(cand, p)) {
            mod = cand;
            break;
        }
    }
    f.modulus_ = mod;

    // Element multiplication through polynomial arithmetic, used to bootstrap
    // the log/exp tables.
    auto slow_mul = [&](int a, int b) {
        std::vector<int> prod = poly_mul(poly_from_index(a, p), poly_from_index(b, p), p);
        if (prod.empty()) return 0;
        poly_mod(prod, mod, p);
        return static_cast<int>(poly_to_index(prod, p));
    };

    const long long group = size - 1;
    int gen = 1;
    if (group > 1) {
        const auto factors = prime_factors(group);
        auto pow_slow = [&](int a, long long k) {
            int acc = 1;
            int base = a;
            while (k > 0) {
                if (k & 1) acc = slow_mul(acc, base);
                base = slow_mul(base, base);
                k >>= 1;
            }
            return acc;
        };
        for (gen = 2; gen < size; ++gen) {
            bool ok = true;
            for (long long q : factors)
                if (pow_slow(gen, group / q) == 1) {
                    ok = false;
                    break;
                }
            if (ok) break;
        }
    }
    f.generator_ = gen;

    auto exp = std::make_shared<std::vector<int>>(static_cast<std::size_t>(group > 0 ? group : 1), 1);
    auto log = std::make_shared<std::vector<int>>(static_cast<std::size_t>(size), 0);
    int acc = 1;
    for (long long i = 0; i < group; ++i) {
        (*exp)[i] = acc;
        (*log)[acc] = static_cast<int>(i);
        acc = slow_mul(acc, gen);
    }
    if (acc != 1) throw std::logic_error("generator order mismatch");
    f.exp_ = std::move(exp);
    f.log_ = std::move(log);
    return f;
}

void Field::check_element(int a) const {
    if (a < 0 || a >= size_) throw std::out_of_range("field element index out of range");
}

int Field::add(int a, int b) const {
    check_element(a);
    check_element(b);
    if (p_ == 2) return a ^ b;
    int out = 0;
    int mult = 1;
    while (a > 0 || b > 0) {
        out += (a % p_ + b % p_) % p_ * mult;
        a /= p_;
        b /= p_;
        mult *= p_;
    }
    return out;
}

int Field::neg(int a) const {
    check_element(a);
    if (p_ == 2) return a;
    int out = 0;
    int mult = 1;
    while (a > 0) {
        out += (p_ - a % p_) % p_ * mult;
        a /= p_;
        mult *= p_;
    }
    return out;
}

int Field::sub(int a, int b) const { return add(a, neg(b)); }

int Field::mul(int a, int b) const {
    check_element(a);
    check_element(b);
    if (a == 0 || b == 0) return 0;
    const long long group = size_ - 1;
    return (*exp_)[((*log_)[a] + (*log_)[b]) % group];
}

int Field::inv(int a) const {
    check_element(a);
    if (a == 0) throw std::domain_error("inverse of zero");
    const long long group = size_ - 1;
    return (*exp_)[(group - (*log_)[a]) % group];
}

int Field::pow(int a, long long k) const {
    check_element(a);
    if (k < 0) throw std::invalid_argument("negative exponent");
    if (k == 0) return 1;
    if (a == 0) return 0;
    const long long group = size_ - 1;
    return (*exp_)[static_cast<long long>((*log_)[a]) * (k % group) % group];
}

int Field::from_integer(long long v) const {
    return static_cast<int>(((v % p_) + p_) % p_);
}

int binomial_in_field(long long k, long long j, const Field& f) {
    if (j < 0 || j > k) return 0;
    // Lucas: C(k, j) mod p is the product of digitwise binomials base p.
    const long long p = f.characteristic();
    auto pow_mod = [p](long long base, long long e) {
        long long acc = 1;
        base %= p;
        while (e > 0) {
            if (e & 1) acc = acc * base % p;
            base = base * base % p;
            e >>= 1;
        }
        return acc;
    };
    long long acc = 1;
    while (k > 0 || j > 0) {
        const long long kd = k % p;
        const long long jd = j % p;
        if (jd > kd) return 0;
        long long c = 1;
        for (long long i = 1; i <= jd; ++i) {
            c = c * ((kd - jd + i) % p) % p;
            c = c * pow_mod(i, p - 2) % p;
        }
        acc = acc * c % p;
        k /= p;
        j /= p;
    }
    return f.from_integer(acc);
}

FieldMatrix field_identity(int n) {
    FieldMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

FieldMatrix field_exchange(int n) {
    FieldMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, n - 1 - i) = 1;
    return m;
}

FieldMatrix field_matmul(const Field& f, const FieldMatrix& a, const FieldMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("shape mismatch in field matmul");
    FieldMatrix c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            const int aik = a.at(i, k);
            if (aik == 0) continue;
            for (int j = 0; j < b.cols(); ++j)
                c.at(i, j) = f.add(c.at(i, j), f.mul(aik, b.at(k, j)));
        }
    return c;
}

FieldMatrix field_kron(const Field& f, const FieldMatrix& a, const FieldMatrix& b) {
    FieldMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            const int aij = a.at(i, j);
            if (aij == 0) continue;
            for (int k = 0; k < b.rows(); ++k)
                for (int l = 0; l < b.cols(); ++l)
                    c.at(i * b.rows() + k, j * b.cols() + l) = f.mul(aij, b.at(k, l));
        }
    return c;
}

FieldMatrix principal_submatrix(const FieldMatrix& a, int n) {
    if (n > a.rows() || n > a.cols()) throw std::invalid_argument("submatrix larger than matrix");
    FieldMatrix c(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) c.at(i, j) = a.at(i, j);
    return c;
}

std::vector<int> field_apply(const Field& f, const FieldMatrix& a, const std::vector<int>& v) {
    if (a.cols() != static_cast<int>(v.size()))
        throw std::invalid_argument("shape mismatch in field apply");
    std::vector<int> out(a.rows(), 0);
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out[i] = f.add(out[i], f.mul(a.at(i, j), v[j]));
    return out;
}

int rank_over_field(const Field& f, FieldMatrix m) {
    int rank = 0;
    for (int col = 0; col < m.cols() && rank < m.rows(); ++col) {
        int pivot = -1;
        for (int r = rank; r < m.rows(); ++r)
            if (m.at(r, col) != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        for (int c = 0; c < m.cols(); ++c) std::swap(m.at(pivot, c), m.at(rank, c));
        const int scale = f.inv(m.at(rank, col));
        for (int c = 0; c < m.cols(); ++c) m.at(rank, c) = f.mul(m.at(rank, c), scale);
        for (int r = 0; r < m.rows(); ++r) {
            if (r == rank || m.at(r, col) == 0) continue;
            const int factor = m.at(r, col);
            for (int c = 0; c < m.cols(); ++c)
                m.at(r, c) = f.sub(m.at(r, c), f.mul(factor, m.at(rank, c)));
        }
        ++rank;
    }
    return rank;
}

}  // namespace stc
