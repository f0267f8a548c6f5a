#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace stc {

// Finite field GF(p^m), p prime, p^m <= 2^16. Elements are integer indices in
// [0, p^m); the base-p digits of an index are the coefficients of the element's
// polynomial representation, least significant digit = constant term. Index 0
// and 1 are the additive and multiplicative identities.
class Field {
public:
    // Empty placeholder; every usable field comes from make().
    Field() = default;

    // Deterministic construction: lowest-lexicographic monic irreducible
    // modulus, lowest-index generator of the multiplicative group.
    static Field make(int p, int m);

    int characteristic() const { return p_; }
    int degree() const { return m_; }
    int size() const { return size_; }
    int generator() const { return generator_; }
    // Modulus coefficients, length m+1, constant term first, monic.
    const std::vector<int>& modulus() const { return modulus_; }

    int add(int a, int b) const;
    int sub(int a, int b) const;
    int neg(int a) const;
    int mul(int a, int b) const;
    int inv(int a) const;               // throws on a == 0
    int pow(int a, long long k) const;  // k >= 0

    // Embed an integer into the prime subfield (reduce mod p).
    int from_integer(long long v) const;

    bool operator==(const Field& other) const {
        return p_ == other.p_ && m_ == other.m_;
    }

private:
    void check_element(int a) const;

    int p_ = 0;
    int m_ = 0;
    int size_ = 0;
    int generator_ = 0;
    std::vector<int> modulus_;
    std::shared_ptr<const std::vector<int>> exp_;  // exp_[i] = g^i, i < size-1
    std::shared_ptr<const std::vector<int>> log_;  // log_[exp_[i]] = i
};

// Binomial coefficient C(k, j) reduced into the prime subfield (Lucas).
int binomial_in_field(long long k, long long j, const Field& f);

// Dense matrix of field element indices.
class FieldMatrix {
public:
    FieldMatrix() = default;
    FieldMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, 0) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int& at(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    int at(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    const std::vector<int>& data() const { return data_; }
    std::vector<int>& data() { return data_; }

    bool operator==(const FieldMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<int> data_;
};

FieldMatrix field_identity(int n);
// Exchange matrix: ones on the anti-diagonal.
FieldMatrix field_exchange(int n);
FieldMatrix field_matmul(const Field& f, const FieldMatrix& a, const FieldMatrix& b);
// Kronecker product with entries multiplied in the field.
FieldMatrix field_kron(const Field& f, const FieldMatrix& a, const FieldMatrix& b);
FieldMatrix principal_submatrix(const FieldMatrix& a, int n);
std::vector<int> field_apply(const Field& f, const FieldMatrix& a, const std::vector<int>& v);
// Rank by Gaussian elimination over the field.
int rank_over_field(const Field& f, FieldMatrix m);

}  // namespace stc
