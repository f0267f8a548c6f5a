#include "stc/waterfill.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "stc/criteria.hpp"

namespace stc {
namespace {

constexpr double kLn2 = 0.6931471805599453094;

struct Solution {
    int k = 0;
    double inv_level = 0.0;  // 1/lambda
    double criterion = 0.0;
    std::vector<double> sq;  // ascending squared singular values
    bool degenerate = false;
};

Solution solve_core(const RVector& sv, double rate_bits) {
    const int m = static_cast<int>(sv.size());
    if (m < 1) throw std::invalid_argument("need at least one singular value");
    if (rate_bits <= 0) throw std::invalid_argument("rate must be positive");

    Solution sol;
    sol.sq.resize(m);
    for (int i = 0; i < m; ++i) {
        if (!(sv(i) >= 0)) throw std::invalid_argument("singular values must be nonnegative");
        sol.sq[i] = sv(i) * sv(i);
    }
    std::sort(sol.sq.begin(), sol.sq.end());
    if (sol.sq.back() == 0.0)
        throw std::domain_error("all singular values zero: pair indistinguishable");

    int zeros = 0;
    while (zeros < m && sol.sq[zeros] == 0.0) ++zeros;
    if (zeros > 0) {
        sol.k = zeros;
        sol.inv_level = 0.0;
        sol.criterion = 0.0;
        sol.degenerate = true;
        return sol;
    }

    // Largest k whose water level covers branch k: sq[k-1] <= water level,
    // where the level is 2^(R/k) times the geometric mean of sq[0..k-1].
    // Scanning downward, the first k that satisfies this also satisfies the
    // upper comparison against sq[k] automatically.
    double log_sum = 0.0;
    for (int i = 0; i < m; ++i) log_sum += std::log(sol.sq[i]);
    for (int k = m; k >= 1; --k) {
        const double log_level = (rate_bits * kLn2 + log_sum) / k;
        if (std::log(sol.sq[k - 1]) <= log_level) {
            sol.k = k;
            sol.inv_level = std::exp(log_level);
            double sum = 0.0;
            for (int i = 0; i < k; ++i) sum += sol.sq[i];
            sol.criterion = k * sol.inv_level - sum;
            return sol;
        }
        log_sum -= std::log(sol.sq[k - 1]);
    }
    throw std::logic_error("water level search failed");
}

}  // namespace

WorstCaseResult solve_worst_channel(const RVector& sv, double rate_bits, double snr) {
    if (snr <= 0) throw std::invalid_argument("snr must be positive");
    const Solution sol = solve_core(sv, rate_bits);
    const int m = static_cast<int>(sol.sq.size());

    WorstCaseResult out;
    out.active_k = sol.k;
    out.criterion = sol.criterion;
    out.worst_pep = 0.5 * std::erfc(std::sqrt(sol.criterion) / 2.0);
    out.allocations = RVector::Zero(m);
    out.worst_singular_values = RVector::Zero(m);
    if (sol.degenerate) {
        out.lagrange_level = std::numeric_limits<double>::infinity();
        return out;
    }
    out.lagrange_level = 1.0 / sol.inv_level;
    for (int l = 0; l < sol.k; ++l) {
        const double q = sol.inv_level - sol.sq[l];
        out.allocations(l) = q > 0 ? q : 0.0;
        out.worst_singular_values(l) = std::sqrt(out.allocations(l) / (snr * sol.sq[l]));
    }
    return out;
}

double universal_criterion(const RVector& sv, double rate_bits) {
    return solve_core(sv, rate_bits).criterion;
}

double worst_pairwise_error(const RVector& sv, double rate_bits) {
    return 0.5 * std::erfc(std::sqrt(solve_core(sv, rate_bits).criterion) / 2.0);
}

CodebookWorstReport codebook_worst_report(const Codebook& cb, double rate_bits, int nr) {
    if (cb.T < cb.nt) throw std::invalid_argument("need T >= nt");
    if (nr < 1) throw std::invalid_argument("need at least one receive antenna");
    const long n = cb.size();
    if (n < 2) throw std::invalid_argument("need at least two codewords");
    if (n * (n - 1) / 2 > kMaxPairScan)
        throw std::invalid_argument("pair scan larger than the exhaustive budget");

    const int take = std::min(nr, cb.nt);
    CodebookWorstReport rep;
    rep.min_criterion = std::numeric_limits<double>::infinity();
    for (long a = 0; a < n; ++a)
        for (long b = a + 1; b < n; ++b) {
            const RVector sv = singular_values_ascending(cb.words[a] - cb.words[b]);
            const RVector kept = sv.head(take);
            if (kept(take - 1) <= 0.0)
                throw std::domain_error("degenerate codeword pair in retained directions");
            const Solution sol = solve_core(kept, rate_bits);
            rep.table.push_back({a, b, sol.k,
                                 sol.degenerate ? std::numeric_limits<double>::infinity()
                                                : 1.0 / sol.inv_level,
                                 sol.criterion});
            if (sol.criterion < rep.min_criterion) {
                rep.min_criterion = sol.criterion;
                rep.arg_a = a;
                rep.arg_b = b;
            }
        }
    return rep;
}

}  // namespace stc
