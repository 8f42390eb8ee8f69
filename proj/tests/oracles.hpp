#pragma once

// Test-only oracles, independent of the library implementation paths they
// check: series extrapolation for the dilogarithm and exact-rational
// Bernoulli polynomials from the generating-function recurrence.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <vector>

namespace oracles {

// Li2(1) from partial sums of sum 1/k^2, Neville-extrapolated in h = 1/n.
inline double dilog_one_series() {
    const std::array<int, 6> ns = {16, 32, 64, 128, 256, 512};
    std::array<double, 6> h{}, val{};
    for (std::size_t i = 0; i < ns.size(); ++i) {
        double s = 0.0;
        for (int k = 1; k <= ns[i]; ++k) s += 1.0 / (static_cast<double>(k) * k);
        h[i] = 1.0 / ns[i];
        val[i] = s;
    }
    // Neville table toward h = 0
    for (std::size_t lvl = 1; lvl < ns.size(); ++lvl)
        for (std::size_t i = ns.size() - 1; i >= lvl; --i)
            val[i] = val[i] + (val[i] - val[i - 1]) * h[i] / (h[i - lvl] - h[i]);
    return val.back();
}

// Li2(-1) from the alternating series with repeated Euler averaging.
inline double dilog_minus_one_series() {
    std::vector<double> partial;
    double s = 0.0;
    for (int k = 1; k <= 60; ++k) {
        s += (k % 2 ? -1.0 : 1.0) / (static_cast<double>(k) * k);
        partial.push_back(s);
    }
    for (int level = 0; level < 40; ++level)
        for (std::size_t i = 0; i + 1 < partial.size(); ++i)
            partial[i] = 0.5 * (partial[i] + partial[i + 1]);
    return partial.front();
}

// Exact rational arithmetic, small denominators only (Bernoulli up to ~12).
struct Rat {
    long long n = 0, d = 1;
    static Rat make(long long n_, long long d_) {
        if (d_ < 0) {
            n_ = -n_;
            d_ = -d_;
        }
        const long long g = std::gcd(n_ < 0 ? -n_ : n_, d_);
        return {g ? n_ / g : 0, g ? d_ / g : 1};
    }
    Rat operator+(Rat o) const { return make(n * o.d + o.n * d, d * o.d); }
    Rat operator-(Rat o) const { return make(n * o.d - o.n * d, d * o.d); }
    Rat operator*(Rat o) const { return make(n * o.n, d * o.d); }
    Rat operator/(Rat o) const { return make(n * o.d, d * o.n); }
    bool operator==(const Rat& o) const { return n == o.n && d == o.d; }
    double value() const { return static_cast<double>(n) / static_cast<double>(d); }
};

inline long long binomial_ll(int n, int k) {
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// B_m(x) over the rationals from the defining recurrence
//   sum_{k=0}^{m} C(m+1, k) B_k(x) = (m+1) x^m,
// which is the coefficient identity of t e^{xt} / (e^t - 1).
inline Rat bernoulli_poly_rat(int m, Rat x) {
    std::vector<Rat> b(m + 1);
    std::vector<Rat> xpow(m + 1);
    xpow[0] = {1, 1};
    for (int k = 1; k <= m; ++k) xpow[k] = xpow[k - 1] * x;
    for (int k = 0; k <= m; ++k) {
        Rat rhs = Rat{k + 1, 1} * xpow[k];
        for (int j = 0; j < k; ++j)
            rhs = rhs - Rat{binomial_ll(k + 1, j), 1} * b[j];
        b[k] = rhs / Rat{k + 1, 1};
    }
    return b[m];
}

inline double bernoulli_number_rat(int n) { return bernoulli_poly_rat(n, {0, 1}).value(); }

}  // namespace oracles
