#include "stc/udm.hpp"

#include <functional>
#include <stdexcept>

namespace stc {
namespace {

FieldMatrix tensor_power_to_size(const Field& f, const FieldMatrix& base, int n) {
    FieldMatrix t(1, 1);
    t.at(0, 0) = 1;
    while (t.rows() < n) t = field_kron(f, base, t);
    return principal_submatrix(t, n);
}

void enumerate_compositions(int remaining, int parts, std::vector<int>& prefix,
                            const std::function<bool(const std::vector<int>&)>& visit,
                            bool& stop) {
    if (stop) return;
    if (parts == 1) {
        prefix.push_back(remaining);
        if (!visit(prefix)) stop = true;
        prefix.pop_back();
        return;
    }
    for (int k = 0; k <= remaining && !stop; ++k) {
        prefix.push_back(k);
        enumerate_compositions(remaining - k, parts - 1, prefix, visit, stop);
        prefix.pop_back();
    }
}

}  // namespace

UdmFamily build_identity_pair(int n) {
    if (n < 1) throw std::invalid_argument("family size must be >= 1");
    UdmFamily fam;
    fam.field = Field::make(2, 1);
    fam.n = n;
    fam.L = 2;
    fam.mats = {field_identity(n), field_exchange(n)};
    fam.provenance = "identity-pair";
    return fam;
}

UdmFamily build_tensor_T(int n) {
    if (n < 1) throw std::invalid_argument("family size must be >= 1");
    UdmFamily fam;
    fam.field = Field::make(2, 1);
    fam.n = n;
    fam.L = 3;
    FieldMatrix t2(2, 2);
    t2.at(0, 0) = 1;
    t2.at(0, 1) = 1;
    t2.at(1, 1) = 1;
    fam.mats = {field_identity(n), field_exchange(n), tensor_power_to_size(fam.field, t2, n)};
    fam.provenance = "tensor-T";
    return fam;
}

UdmFamily build_L4_F3(int n) {
    if (n < 1) throw std::invalid_argument("family size must be >= 1");
    UdmFamily fam;
    fam.field = Field::make(3, 1);
    fam.n = n;
    fam.L = 4;
    FieldMatrix t3(3, 3), r3(3, 3);
    const int tvals[3][3] = {{1, 2, 1}, {0, 1, 1}, {0, 0, 1}};
    const int rvals[3][3] = {{1, 1, 1}, {0, 1, 2}, {0, 0, 1}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            t3.at(i, j) = tvals[i][j];
            r3.at(i, j) = rvals[i][j];
        }
    fam.mats = {field_identity(n), field_exchange(n), tensor_power_to_size(fam.field, t3, n),
                tensor_power_to_size(fam.field, r3, n)};
    fam.provenance = "L4-F3";
    return fam;
}

UdmFamily build_pascal(int n, int L, const Field& field) {
    if (n < 1) throw std::invalid_argument("family size must be >= 1");
    if (L < 1) throw std::invalid_argument("family count must be >= 1");
    if (L > field.size() + 1)
        throw std::invalid_argument("family count exceeds field size + 1");
    UdmFamily fam;
    fam.field = field;
    fam.n = n;
    fam.L = L;
    fam.provenance = "pascal";
    fam.mats.reserve(L);
    if (L >= 1) fam.mats.push_back(field_identity(n));
    if (L >= 2) fam.mats.push_back(field_exchange(n));
    const int alpha = field.generator();
    for (int l = 3; l <= L; ++l) {
        FieldMatrix a(n, n);
        for (int j = 0; j < n; ++j)
            for (int k = j; k < n; ++k) {
                const int binom = binomial_in_field(k, j, field);
                const int power = field.pow(alpha, static_cast<long long>(l - 2) * (k - j));
                a.at(j, k) = field.mul(binom, power);
            }
        fam.mats.push_back(a);
    }
    return fam;
}

RsMdsResult build_rs_mds(int n, int L, const Field& field) {
    if (n < 1 || L < 1) throw std::invalid_argument("sizes must be >= 1");
    const int cols = L * n;
    if (field.size() < cols - 1)
        throw std::invalid_argument("field too small for requested code length");
    RsMdsResult out;
    out.stacked = FieldMatrix(n, cols);
    for (int c = 0; c < cols; ++c) {
        if (c < field.size()) {
            for (int r = 0; r < n; ++r) out.stacked.at(r, c) = field.pow(c, r);
        } else {
            // point at infinity: only the top-degree coordinate survives
            out.stacked.at(n - 1, c) = 1;
        }
    }
    out.family.field = field;
    out.family.n = n;
    out.family.L = L;
    out.family.provenance = "rs-mds";
    for (int l = 0; l < L; ++l) {
        FieldMatrix a(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) a.at(r, c) = out.stacked.at(c, l * n + r);
        out.family.mats.push_back(a);
    }
    return out;
}

UdmVerifyResult udm_verify(UdmFamily& family) {
    UdmVerifyResult result;
    const int n = family.n;
    FieldMatrix stack(n, n);
    bool stop = false;
    std::vector<int> prefix;
    auto visit = [&](const std::vector<int>& comp) {
        int row = 0;
        for (int l = 0; l < family.L; ++l)
            for (int k = 0; k < comp[l]; ++k, ++row)
                for (int c = 0; c < n; ++c) stack.at(row, c) = family.mats[l].at(k, c);
        if (rank_over_field(family.field, stack) != n) {
            result.counterexample = comp;
            return false;
        }
        return true;
    };
    enumerate_compositions(n, family.L, prefix, visit, stop);
    result.pass = !result.counterexample.has_value();
    family.verified = result.pass;
    return result;
}

bool rs_any_rows_property(const RsMdsResult& rs) {
    const int n = rs.family.n;
    const int total = rs.family.L * n;
    // subsets of n rows of the transpose = subsets of n columns of stacked
    std::vector<int> pick(n);
    for (int i = 0; i < n; ++i) pick[i] = i;
    long long count = 1;
    for (int i = 0; i < n; ++i) count = count * (total - i) / (i + 1);
    if (count > (1 << 20)) throw std::invalid_argument("row-subset enumeration too large");
    FieldMatrix sub(n, n);
    for (;;) {
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) sub.at(r, c) = rs.stacked.at(c, pick[r]);
        if (rank_over_field(rs.family.field, sub) != n) return false;
        int i = n - 1;
        while (i >= 0 && pick[i] == total - n + i) --i;
        if (i < 0) break;
        ++pick[i];
        for (int j = i + 1; j < n; ++j) pick[j] = pick[j - 1] + 1;
    }
    return true;
}

}  // namespace stc
