#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace radical {

// Exact scalar backend. All arithmetic over Rat is error-free.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline Rat rat_from_string(const std::string& s) {
    Rat q(s);
    q.canonicalize();
    return q;
}

// Comparison tolerance for the real backend, relative.  Overridable per run.
struct Tolerances {
    double cmp = 1e-9;       // equality comparisons
    double rank = 1e-8;      // singular-value / pivot threshold, times ||A||
};

template <typename T>
struct scalar_traits;

template <>
struct scalar_traits<Rat> {
    static constexpr bool is_exact = true;
    static Rat zero() { return Rat(0); }
    static Rat one() { return Rat(1); }
    static Rat abs(const Rat& x) { return ::abs(x); }
    static bool is_zero(const Rat& x, double /*tol*/ = 0, const Rat& /*scale*/ = Rat(1)) {
        return sgn(x) == 0;
    }
    static Rat div(const Rat& a, const Rat& b) {
        if (sgn(b) == 0) throw std::domain_error("division by zero");
        return a / b;
    }
    static double to_double(const Rat& x) { return x.get_d(); }
    static Rat from_long(long v) { return Rat(v); }
};

template <>
struct scalar_traits<double> {
    static constexpr bool is_exact = false;
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static double abs(double x) { return std::fabs(x); }
    static bool is_zero(double x, double tol = 1e-12, double scale = 1.0) {
        return std::fabs(x) <= tol * std::max(1.0, std::fabs(scale));
    }
    static double div(double a, double b) {
        if (b == 0.0) throw std::domain_error("division by zero");
        return a / b;
    }
    static double to_double(double x) { return x; }
    static double from_long(long v) { return static_cast<double>(v); }
};

template <typename T>
bool scalar_close(const T& a, const T& b, double rel_tol) {
    if constexpr (scalar_traits<T>::is_exact) {
        (void)rel_tol;
        return a == b;
    } else {
        double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
        return std::fabs(a - b) <= rel_tol * scale;
    }
}

// Exact square root test: returns sqrt(q) if q is the square of a rational.
inline std::optional<Rat> rat_sqrt(const Rat& q) {
    if (sgn(q) < 0) return std::nullopt;
    if (sgn(q) == 0) return Rat(0);
    mpz_class num = q.get_num(), den = q.get_den();
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
    if (rn * rn != num || rd * rd != den) return std::nullopt;
    return Rat(rn, rd);
}

}  // namespace radical
