#pragma once

// Exact rational linear algebra and integer-lattice helpers.

#include <gmpxx.h>

#include <algorithm>
#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "toricstab/errors.hpp"

namespace toricstab {

using Integer = mpz_class;
using Rational = mpq_class;
using IntVector = std::vector<Integer>;
using RatVector = std::vector<Rational>;
using RatMatrix = std::vector<RatVector>;
using IntMatrix = std::vector<IntVector>;

inline std::string to_string(const Rational& q) { return q.get_str(); }
inline std::string to_string(const Integer& z) { return z.get_str(); }

/// Parses "n" or "p/q" (optional sign on p). Throws InputError on anything else.
inline Rational parse_rational(std::string_view text) {
    auto is_int = [](std::string_view s) {
        if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
        return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
    };
    auto strip_plus = [](std::string_view s) {
        if (!s.empty() && s.front() == '+') s.remove_prefix(1);
        return std::string(s);
    };
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        if (!is_int(text)) throw InputError("not a rational literal: '" + std::string(text) + "'");
        return Rational(Integer(strip_plus(text)));
    }
    const auto num = text.substr(0, slash);
    const auto den = text.substr(slash + 1);
    if (!is_int(num) || den.empty() || !std::all_of(den.begin(), den.end(), [](char c) { return c >= '0' && c <= '9'; }))
        throw InputError("not a rational literal: '" + std::string(text) + "'");
    Integer d(std::string{den});
    if (d == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
    Rational q(Integer(strip_plus(num)), d);
    q.canonicalize();
    return q;
}

inline RatVector to_rational(const IntVector& v) {
    RatVector out;
    out.reserve(v.size());
    for (const auto& x : v) out.emplace_back(x);
    return out;
}

template <class A, class B>
auto dot(const std::vector<A>& a, const std::vector<B>& b) {
    if (a.size() != b.size()) throw InputError("dot: length mismatch");
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += Rational(a[i]) * Rational(b[i]);
    return s;
}

inline Integer int_dot(const IntVector& a, const IntVector& b) {
    if (a.size() != b.size()) throw InputError("dot: length mismatch");
    Integer s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline bool is_zero(const RatVector& v) {
    return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
}

inline bool is_zero(const IntVector& v) {
    return std::all_of(v.begin(), v.end(), [](const Integer& x) { return x == 0; });
}

/// Reduces `rows` to reduced row-echelon form in place, dropping zero rows.
/// Returns the pivot column of each surviving row.
inline std::vector<std::size_t> row_reduce(RatMatrix& rows, std::size_t ncols) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < ncols && r < rows.size(); ++c) {
        std::size_t p = r;
        while (p < rows.size() && rows[p][c] == 0) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[r], rows[p]);
        const Rational inv = 1 / rows[r][c];
        for (auto& x : rows[r]) x *= inv;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][c] == 0) continue;
            const Rational f = rows[i][c];
            for (std::size_t k = c; k < ncols; ++k) rows[i][k] -= f * rows[r][k];
        }
        pivots.push_back(c);
        ++r;
    }
    rows.resize(r);
    return pivots;
}

inline std::size_t rank(RatMatrix rows, std::size_t ncols) { return row_reduce(rows, ncols).size(); }

/// Basis of {x : rows * x = 0}.
inline RatMatrix nullspace(RatMatrix rows, std::size_t ncols) {
    const auto pivots = row_reduce(rows, ncols);
    std::vector<bool> is_pivot(ncols, false);
    for (auto p : pivots) is_pivot[p] = true;
    RatMatrix out;
    for (std::size_t free = 0; free < ncols; ++free) {
        if (is_pivot[free]) continue;
        RatVector x(ncols, 0);
        x[free] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = -rows[i][free];
        out.push_back(std::move(x));
    }
    return out;
}

/// Scales a nonzero rational vector to the primitive integer vector on the
/// same ray (first nonzero entry positive).
inline IntVector primitive_integer_vector(const RatVector& v) {
    Integer l = 1;
    for (const auto& x : v) l = lcm(l, x.get_den());
    IntVector out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(Integer(x.get_num() * (l / x.get_den())));
    Integer g = 0;
    for (const auto& x : out) g = gcd(g, x);
    if (g == 0) throw InputError("primitive_integer_vector: zero vector");
    const auto first = std::find_if(out.begin(), out.end(), [](const Integer& x) { return x != 0; });
    if (*first < 0) g = -g;
    for (auto& x : out) x /= g;
    return out;
}

inline bool is_primitive(const IntVector& v) {
    Integer g = 0;
    for (const auto& x : v) g = gcd(g, x);
    return g == 1;
}

/// A linear subspace of Q^r in canonical reduced row-echelon form.
class Subspace {
public:
    explicit Subspace(std::size_t ambient_dim = 0) : ambient_(ambient_dim) {}

    static Subspace span(std::span<const RatVector> vectors, std::size_t ambient_dim) {
        RatMatrix rows;
        rows.reserve(vectors.size());
        for (const auto& v : vectors) {
            if (v.size() != ambient_dim) throw InputError("span: vector length does not match ambient dimension");
            rows.push_back(v);
        }
        Subspace s(ambient_dim);
        row_reduce(rows, ambient_dim);
        s.basis_ = std::move(rows);
        return s;
    }

    static Subspace span(const RatMatrix& vectors, std::size_t ambient_dim) {
        return span(std::span<const RatVector>(vectors), ambient_dim);
    }

    static Subspace line(const RatVector& v) { return span(RatMatrix{v}, v.size()); }

    static Subspace full(std::size_t ambient_dim) {
        RatMatrix id(ambient_dim, RatVector(ambient_dim, 0));
        for (std::size_t i = 0; i < ambient_dim; ++i) id[i][i] = 1;
        return span(id, ambient_dim);
    }

    std::size_t ambient_dim() const noexcept { return ambient_; }
    std::size_t dim() const noexcept { return basis_.size(); }
    const RatMatrix& basis() const noexcept { return basis_; }
    bool is_zero() const noexcept { return basis_.empty(); }
    bool is_full() const noexcept { return basis_.size() == ambient_; }

    bool contains(const RatVector& w) const {
        if (w.size() != ambient_) throw InputError("contains: dimension mismatch");
        RatVector x = w;
        std::size_t row = 0;
        for (std::size_t c = 0; c < ambient_ && row < basis_.size(); ++c) {
            if (basis_[row][c] == 0) continue;
            if (x[c] != 0) {
                const Rational f = x[c];
                for (std::size_t k = c; k < ambient_; ++k) x[k] -= f * basis_[row][k];
            }
            ++row;
        }
        return toricstab::is_zero(x);
    }

    bool contains(const Subspace& other) const {
        if (other.ambient_ != ambient_) throw InputError("contains: ambient dimension mismatch");
        return std::all_of(other.basis_.begin(), other.basis_.end(), [&](const RatVector& v) { return contains(v); });
    }

    /// Basis of the orthogonal complement under the standard pairing.
    RatMatrix annihilator() const { return nullspace(basis_, ambient_); }

    friend bool operator==(const Subspace& a, const Subspace& b) {
        return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
    }

    /// Orders by dimension, then lexicographically by canonical basis.
    friend std::strong_ordering operator<=>(const Subspace& a, const Subspace& b) {
        if (auto c = a.ambient_ <=> b.ambient_; c != 0) return c;
        if (auto c = a.basis_.size() <=> b.basis_.size(); c != 0) return c;
        for (std::size_t i = 0; i < a.basis_.size(); ++i)
            for (std::size_t k = 0; k < a.ambient_; ++k) {
                const int s = cmp(a.basis_[i][k], b.basis_[i][k]);
                if (s != 0) return s < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
            }
        return std::strong_ordering::equal;
    }

private:
    std::size_t ambient_;
    RatMatrix basis_;
};

inline Subspace subspace_sum(const Subspace& u, const Subspace& v) {
    if (u.ambient_dim() != v.ambient_dim()) throw InputError("subspace_sum: ambient dimension mismatch");
    RatMatrix rows = u.basis();
    rows.insert(rows.end(), v.basis().begin(), v.basis().end());
    return Subspace::span(rows, u.ambient_dim());
}

inline bool sum_contains(const Subspace& u, const Subspace& v, const RatVector& w) {
    return subspace_sum(u, v).contains(w);
}

inline Subspace intersect(const Subspace& u, const Subspace& v) {
    if (u.ambient_dim() != v.ambient_dim()) throw InputError("intersect: ambient dimension mismatch");
    const std::size_t r = u.ambient_dim();
    if (u.is_zero() || v.is_zero()) return Subspace(r);
    if (u.is_full()) return v;
    if (v.is_full()) return u;
    // x = sum a_k u_k lies in v iff it is orthogonal to v's annihilator.
    const RatMatrix ann = v.annihilator();
    RatMatrix system(ann.size(), RatVector(u.dim(), 0));
    for (std::size_t i = 0; i < ann.size(); ++i)
        for (std::size_t k = 0; k < u.dim(); ++k) system[i][k] = dot(ann[i], u.basis()[k]);
    RatMatrix out;
    for (const auto& coeffs : nullspace(system, u.dim())) {
        RatVector x(r, 0);
        for (std::size_t k = 0; k < u.dim(); ++k)
            if (coeffs[k] != 0)
                for (std::size_t c = 0; c < r; ++c) x[c] += coeffs[k] * u.basis()[k][c];
        out.push_back(std::move(x));
    }
    return Subspace::span(out, r);
}

inline Rational determinant(RatMatrix m) {
    const std::size_t n = m.size();
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m[p][c] == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(m[p], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            if (m[i][c] == 0) continue;
            const Rational f = m[i][c] / m[c][c];
            for (std::size_t k = c; k < n; ++k) m[i][k] -= f * m[c][k];
        }
    }
    return det;
}

inline Integer determinant(const IntMatrix& m) {
    RatMatrix q;
    for (const auto& row : m) q.push_back(to_rational(row));
    const Rational d = determinant(std::move(q));
    return d.get_num();
}

/// Unique solution of the square system rows * x = b, or nullopt if singular.
inline std::optional<RatVector> solve_rational(const RatMatrix& rows, const RatVector& b) {
    const std::size_t n = rows.size();
    if (b.size() != n) throw InputError("solve: right-hand side length mismatch");
    RatMatrix aug;
    aug.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n) throw InputError("solve: matrix is not square");
        RatVector row = rows[i];
        row.push_back(b[i]);
        aug.push_back(std::move(row));
    }
    const auto pivots = row_reduce(aug, n + 1);
    if (pivots.size() != n || pivots.back() != n - 1) return std::nullopt;
    RatVector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = aug[i][n];
    return x;
}

/// Solves A u = b over the integers for a unimodular A.
inline IntVector solve_integer_system(const IntMatrix& a, const IntVector& b) {
    const Integer det = determinant(a);
    if (abs(det) != 1) throw InputError("solve_integer_system: |det| = " + to_string(Integer(abs(det))) + " != 1 (cone is not smooth)");
    RatMatrix q;
    for (const auto& row : a) q.push_back(to_rational(row));
    const auto x = solve_rational(q, to_rational(b));
    IntVector out;
    for (const auto& v : *x) out.push_back(v.get_num());
    return out;
}

/// Basis of the lattice {m in Z^d : <m, v> = 0} for a primitive v, obtained by
/// unimodular column reduction of the 1 x d matrix v.
inline IntMatrix orthogonal_lattice_basis(const IntVector& v) {
    const std::size_t d = v.size();
    if (d == 0 || is_zero(v)) throw InputError("orthogonal_lattice_basis: zero vector");
    if (!is_primitive(v)) throw InputError("orthogonal_lattice_basis: vector is not primitive");
    IntVector a = v;
    IntMatrix cols(d, IntVector(d, 0)); // cols[k] is column k of the transform
    for (std::size_t k = 0; k < d; ++k) cols[k][k] = 1;
    while (true) {
        std::size_t piv = d;
        for (std::size_t k = 0; k < d; ++k)
            if (a[k] != 0 && (piv == d || abs(a[k]) < abs(a[piv]))) piv = k;
        bool reduced = false;
        for (std::size_t k = 0; k < d; ++k) {
            if (k == piv || a[k] == 0) continue;
            Integer q;
            mpz_fdiv_q(q.get_mpz_t(), a[k].get_mpz_t(), a[piv].get_mpz_t());
            a[k] -= q * a[piv];
            for (std::size_t i = 0; i < d; ++i) cols[k][i] -= q * cols[piv][i];
            reduced = true;
        }
        if (!reduced) {
            IntMatrix out;
            for (std::size_t k = 0; k < d; ++k)
                if (k != piv) out.push_back(cols[k]);
            return out;
        }
    }
}

} // namespace toricstab
