// Copyright 2026 The ghgkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GHG_ARITH_HPP
#define GHG_ARITH_HPP

#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ghg/autgrp.hpp"

namespace ghg {

using QNum = boost::multiprecision::cpp_rational;
using QVec = std::vector<QNum>;
using QMat = std::vector<QVec>;

/// Inverse of a square rational matrix by Gauss-Jordan elimination.
inline QMat qmat_inverse(QMat A) {
    size_t n = A.size();
    QMat I(n, QVec(n, QNum(0)));
    for (size_t i = 0; i < n; i++) {
        I[i][i] = 1;
    }
    for (size_t c = 0; c < n; c++) {
        size_t p = c;
        while (p < n && A[p][c] == 0) {
            p++;
        }
        if (p == n) {
            throw DomainError("qmat_inverse: singular matrix");
        }
        std::swap(A[p], A[c]);
        std::swap(I[p], I[c]);
        QNum piv = A[c][c];
        for (size_t j = 0; j < n; j++) {
            A[c][j] /= piv;
            I[c][j] /= piv;
        }
        for (size_t i = 0; i < n; i++) {
            if (i != c && A[i][c] != 0) {
                QNum f = A[i][c];
                for (size_t j = 0; j < n; j++) {
                    A[i][j] -= f * A[c][j];
                    I[i][j] -= f * I[c][j];
                }
            }
        }
    }
    return I;
}

/// Row vector times matrix.
inline QVec qvec_mul(const QVec &v, const QMat &M) {
    QVec out(M.empty() ? 0 : M[0].size(), QNum(0));
    for (size_t i = 0; i < v.size(); i++) {
        if (v[i] == 0) {
            continue;
        }
        for (size_t j = 0; j < out.size(); j++) {
            out[j] += v[i] * M[i][j];
        }
    }
    return out;
}

inline QNum qmat_det(QMat A) {
    size_t n = A.size();
    QNum det = 1;
    for (size_t c = 0; c < n; c++) {
        size_t p = c;
        while (p < n && A[p][c] == 0) {
            p++;
        }
        if (p == n) {
            return 0;
        }
        if (p != c) {
            std::swap(A[p], A[c]);
            det = -det;
        }
        det *= A[c][c];
        for (size_t i = c + 1; i < n; i++) {
            QNum f = A[i][c] / A[c][c];
            for (size_t j = c; j < n; j++) {
                A[i][j] -= f * A[c][j];
            }
        }
    }
    return det;
}

/// The number field Q[x]/(f) for a monic integer f, with elements in the power basis of Z[theta].
class NumberField {
  public:
    NumberField() = default;

    /// Coefficients of f, constant term first; the last one must be 1.
    explicit NumberField(std::vector<int64_t> min_poly) : poly_(std::move(min_poly)) {
        if (poly_.size() < 2 || poly_.back() != 1) {
            throw DomainError("NumberField: minimal polynomial must be monic of degree at least 1");
        }
        size_t n = degree();
        if (n > 1) {
            int64_t c0 = poly_[0];
            if (c0 == 0) {
                throw DomainError("NumberField: polynomial has the rational root 0");
            }
            int64_t a = c0 < 0 ? -c0 : c0;
            for (int64_t k = 1; k <= a; k++) {
                if (a % k != 0) {
                    continue;
                }
                for (int64_t root : {k, -k}) {
                    BigInt v = 0;
                    for (size_t i = poly_.size(); i-- > 0;) {
                        v = v * root + poly_[i];
                    }
                    if (v == 0) {
                        throw DomainError("NumberField: polynomial has the rational root " + std::to_string(root));
                    }
                }
            }
        }
    }

    size_t degree() const { return poly_.size() - 1; }
    const std::vector<int64_t> &min_poly() const { return poly_; }

    QVec zero() const { return QVec(degree(), QNum(0)); }

    QVec from_int(int64_t k) const {
        QVec v = zero();
        v[0] = k;
        return v;
    }

    QVec one() const { return from_int(1); }

    QVec theta_power(size_t k) const {
        QVec v = one();
        for (size_t i = 0; i < k; i++) {
            v = mul_theta(v);
        }
        return v;
    }

    QVec add(const QVec &x, const QVec &y) const {
        QVec z = x;
        for (size_t i = 0; i < z.size(); i++) {
            z[i] += y[i];
        }
        return z;
    }

    QVec sub(const QVec &x, const QVec &y) const {
        QVec z = x;
        for (size_t i = 0; i < z.size(); i++) {
            z[i] -= y[i];
        }
        return z;
    }

    QVec scale(const QVec &x, const QNum &k) const {
        QVec z = x;
        for (auto &c : z) {
            c *= k;
        }
        return z;
    }

    QVec mul_theta(const QVec &x) const {
        size_t n = degree();
        QVec z = zero();
        QNum top = x[n - 1];
        for (size_t i = n - 1; i > 0; i--) {
            z[i] = x[i - 1];
        }
        if (n > 1) {
            z[0] = 0;
        }
        for (size_t i = 0; i < n; i++) {
            z[i] -= top * poly_[i];
        }
        return z;
    }

    QVec mul(const QVec &x, const QVec &y) const {
        QVec acc = zero();
        QVec p = y;
        for (size_t i = 0; i < degree(); i++) {
            if (x[i] != 0) {
                acc = add(acc, scale(p, x[i]));
            }
            p = mul_theta(p);
        }
        return acc;
    }

    /// Row i holds the coordinates of theta^i * x, so y * x = y . M.
    QMat mult_matrix(const QVec &x) const {
        QMat M;
        QVec p = x;
        for (size_t i = 0; i < degree(); i++) {
            M.push_back(p);
            p = mul_theta(p);
        }
        return M;
    }

    QNum trace(const QVec &x) const {
        QMat M = mult_matrix(x);
        QNum t = 0;
        for (size_t i = 0; i < degree(); i++) {
            t += M[i][i];
        }
        return t;
    }

    QNum norm(const QVec &x) const { return qmat_det(mult_matrix(x)); }

    QVec inverse(const QVec &x) const {
        QMat Mi = qmat_inverse(mult_matrix(x));
        return Mi[0];
    }

    /// f'(theta).
    QVec derivative_at_theta() const {
        QVec acc = zero();
        for (size_t k = 1; k < poly_.size(); k++) {
            acc = add(acc, scale(theta_power(k - 1), QNum(static_cast<int64_t>(k) * poly_[k])));
        }
        return acc;
    }

    /// Parses sums of terms like "3", "-1/2*th", "th^2", "2th".
    QVec parse(const std::string &text) const {
        std::string s;
        for (char ch : text) {
            if (!std::isspace(static_cast<unsigned char>(ch))) {
                s.push_back(ch);
            }
        }
        if (s.empty()) {
            throw DomainError("parse: empty element");
        }
        QVec acc = zero();
        size_t i = 0;
        auto bad = [&]() { return DomainError("parse: cannot read element '" + text + "'"); };
        while (i < s.size()) {
            int sign = 1;
            if (s[i] == '+' || s[i] == '-') {
                sign = s[i] == '-' ? -1 : 1;
                i++;
            } else if (i != 0) {
                throw bad();
            }
            QNum coef = 1;
            bool have_coef = false;
            if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
                size_t j = i;
                while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
                    j++;
                }
                BigInt num(s.substr(i, j - i));
                BigInt den = 1;
                i = j;
                if (i < s.size() && s[i] == '/') {
                    j = ++i;
                    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
                        j++;
                    }
                    if (j == i) {
                        throw bad();
                    }
                    den = BigInt(s.substr(i, j - i));
                    if (den == 0) {
                        throw bad();
                    }
                    i = j;
                }
                coef = QNum(num, den);
                have_coef = true;
                if (i < s.size() && s[i] == '*') {
                    i++;
                    if (s.compare(i, 2, "th") != 0) {
                        throw bad();
                    }
                }
            }
            size_t power = 0;
            if (s.compare(i, 2, "th") == 0) {
                i += 2;
                power = 1;
                if (i < s.size() && s[i] == '^') {
                    size_t j = ++i;
                    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
                        j++;
                    }
                    if (j == i) {
                        throw bad();
                    }
                    power = std::stoul(s.substr(i, j - i));
                    i = j;
                }
            } else if (!have_coef) {
                throw bad();
            }
            acc = add(acc, scale(theta_power(power), coef * sign));
        }
        return acc;
    }

    std::string format(const QVec &x) const {
        std::string out;
        for (size_t i = 0; i < x.size(); i++) {
            if (x[i] == 0) {
                continue;
            }
            std::string c = x[i].str();
            if (!out.empty() && c[0] != '-') {
                out += "+";
            }
            if (i == 0) {
                out += c;
            } else {
                out += (c == "1" ? "" : c == "-1" ? "-" : c + "*") + std::string("th") +
                       (i > 1 ? "^" + std::to_string(i) : "");
            }
        }
        return out.empty() ? "0" : out;
    }

    bool operator==(const NumberField &o) const = default;

  private:
    std::vector<int64_t> poly_;
};

/// Q(sqrt m) with theta = sqrt m, or (1 + sqrt m)/2 when m = 1 mod 4, so that Z[theta] is maximal.
inline NumberField quadratic_field(int64_t m) {
    if (m == 0 || m == 1) {
        throw DomainError("quadratic_field: m must be a squarefree integer other than 0 and 1");
    }
    for (int64_t k = 2; k * k <= (m < 0 ? -m : m); k++) {
        if (m % (k * k) == 0) {
            throw DomainError("quadratic_field: m must be squarefree");
        }
    }
    if (mod(m, 4) == 1) {
        return NumberField({-(m - 1) / 4, -1, 1});
    }
    return NumberField({-m, 0, 1});
}

/// A fractional ideal: the Z-lattice spanned by the rows of num divided by denom.
class FracIdeal {
  public:
    FracIdeal() = default;

    /// The Z-span of the given vectors; it must have full rank.
    static FracIdeal from_lattice(size_t n, const std::vector<QVec> &rows) {
        BigInt D = 1;
        for (const auto &r : rows) {
            for (const auto &q : r) {
                D = boost::multiprecision::lcm(D, BigInt(boost::multiprecision::denominator(q)));
            }
        }
        IntMatrix M(rows.size(), n);
        for (size_t i = 0; i < rows.size(); i++) {
            for (size_t j = 0; j < n; j++) {
                QNum v = rows[i][j] * QNum(D);
                M(i, j) = boost::multiprecision::numerator(v);
            }
        }
        IntMatrix H = hermite_rows(M);
        if (H.rows() != n) {
            throw DomainError("FracIdeal: lattice is not of full rank (zero ideal)");
        }
        BigInt g = D;
        for (size_t i = 0; i < n; i++) {
            for (size_t j = 0; j < n; j++) {
                g = boost::multiprecision::gcd(g, H(i, j));
            }
        }
        FracIdeal out;
        out.num_ = IntMatrix(n, n);
        for (size_t i = 0; i < n; i++) {
            for (size_t j = 0; j < n; j++) {
                out.num_(i, j) = H(i, j) / g;
            }
        }
        out.denom_ = D / g;
        return out;
    }

    /// The O-module generated by the given elements.
    static FracIdeal from_generators(const NumberField &K, const std::vector<QVec> &gens) {
        std::vector<QVec> rows;
        for (const auto &g : gens) {
            QVec p = g;
            for (size_t i = 0; i < K.degree(); i++) {
                rows.push_back(p);
                p = K.mul_theta(p);
            }
        }
        if (rows.empty()) {
            throw DomainError("FracIdeal: no generators (zero ideal)");
        }
        return from_lattice(K.degree(), rows);
    }

    static FracIdeal from_strings(const NumberField &K, const std::vector<std::string> &gens) {
        std::vector<QVec> v;
        for (const auto &g : gens) {
            v.push_back(K.parse(g));
        }
        return from_generators(K, v);
    }

    static FracIdeal unit(const NumberField &K) { return from_generators(K, {K.one()}); }

    size_t degree() const { return num_.rows(); }
    const IntMatrix &num() const { return num_; }
    const BigInt &denom() const { return denom_; }

    /// Rational basis rows.
    QMat basis() const {
        QMat B(degree(), QVec(degree()));
        for (size_t i = 0; i < degree(); i++) {
            for (size_t j = 0; j < degree(); j++) {
                B[i][j] = QNum(num_(i, j), denom_);
            }
        }
        return B;
    }

    bool is_integral() const { return denom_ == 1; }

    /// Index [O : I] extended multiplicatively to fractional ideals.
    QNum norm() const {
        BigInt dn = 1;
        for (size_t i = 0; i < degree(); i++) {
            dn *= denom_;
        }
        return QNum(abs(num_.det()), dn);
    }

    bool contains(const QVec &x) const {
        std::vector<BigInt> v(degree());
        for (size_t j = 0; j < degree(); j++) {
            QNum s = x[j] * QNum(denom_);
            if (boost::multiprecision::denominator(s) != 1) {
                return false;
            }
            v[j] = boost::multiprecision::numerator(s);
        }
        return lattice_coordinates(num_, v, nullptr);
    }

    bool closed_under_theta(const NumberField &K) const {
        for (const auto &b : basis()) {
            if (!contains(K.mul_theta(b))) {
                return false;
            }
        }
        return true;
    }

    bool operator==(const FracIdeal &o) const { return denom_ == o.denom_ && num_ == o.num_; }

    std::string str() const { return "(" + num_.str() + ")/" + denom_.str(); }

  private:
    IntMatrix num_;
    BigInt denom_ = 1;
};

inline FracIdeal principal_ideal(const NumberField &K, const QVec &x) { return FracIdeal::from_generators(K, {x}); }

inline FracIdeal ideal_add(const FracIdeal &a, const FracIdeal &b) {
    std::vector<QVec> rows = a.basis();
    for (const auto &r : b.basis()) {
        rows.push_back(r);
    }
    return FracIdeal::from_lattice(a.degree(), rows);
}

inline FracIdeal ideal_mul(const NumberField &K, const FracIdeal &a, const FracIdeal &b) {
    std::vector<QVec> rows;
    for (const auto &x : a.basis()) {
        for (const auto &y : b.basis()) {
            rows.push_back(K.mul(x, y));
        }
    }
    return FracIdeal::from_lattice(K.degree(), rows);
}

/// {x : x a in O}, the trace-free dual of the lattice spanned by the columns of all M_b, b in a.
inline FracIdeal ideal_inverse(const NumberField &K, const FracIdeal &a) {
    size_t n = K.degree();
    std::vector<QVec> cols;
    for (const auto &b : a.basis()) {
        QMat M = K.mult_matrix(b);
        for (size_t j = 0; j < n; j++) {
            QVec c(n);
            for (size_t i = 0; i < n; i++) {
                c[i] = M[i][j];
            }
            cols.push_back(c);
        }
    }
    QMat B = FracIdeal::from_lattice(n, cols).basis();
    QMat Bi = qmat_inverse(B);
    QMat dual(n, QVec(n));
    for (size_t i = 0; i < n; i++) {
        for (size_t j = 0; j < n; j++) {
            dual[i][j] = Bi[j][i];
        }
    }
    FracIdeal inv = FracIdeal::from_lattice(n, dual);
    if (!(ideal_mul(K, a, inv) == FracIdeal::unit(K))) {
        throw InternalError("ideal_inverse: product with the inverse is not O");
    }
    return inv;
}

/// The different (f'(theta)) of a monogenic maximal order.
inline FracIdeal different(const NumberField &K) { return principal_ideal(K, K.derivative_at_theta()); }

/// L/M for full-rank lattices M in L, through the Smith form of the inclusion.
struct LatticeQuotient {
    QMat big_basis;
    QMat big_inverse;
    FinAbGroup group;
    /// L-coordinates c map to (c V)_k mod d_k over the kept indices k.
    IntMatrix V;
    std::vector<size_t> kept;
    /// Field elements lifting the generators of group.
    std::vector<QVec> lifts;

    GroupElement project(const QVec &x) const {
        QVec c = qvec_mul(x, big_inverse);
        std::vector<int64_t> coords;
        for (size_t k = 0; k < kept.size(); k++) {
            BigInt acc = 0;
            for (size_t i = 0; i < c.size(); i++) {
                if (boost::multiprecision::denominator(c[i]) != 1) {
                    throw DomainError("LatticeQuotient::project: element is not in the lattice");
                }
                acc += boost::multiprecision::numerator(c[i]) * V(i, kept[k]);
            }
            BigInt dk = group.factors()[k];
            acc %= dk;
            if (acc < 0) {
                acc += dk;
            }
            coords.push_back(static_cast<int64_t>(acc));
        }
        return group.make(coords);
    }

    /// A lift in L of a group element.
    QVec lift(const GroupElement &g) const {
        QVec out(big_basis.size(), QNum(0));
        for (size_t k = 0; k < lifts.size(); k++) {
            for (size_t j = 0; j < out.size(); j++) {
                out[j] += lifts[k][j] * g.coords[k];
            }
        }
        return out;
    }
};

inline LatticeQuotient lattice_quotient(const FracIdeal &L, const FracIdeal &M) {
    size_t n = L.degree();
    LatticeQuotient q;
    q.big_basis = L.basis();
    q.big_inverse = qmat_inverse(q.big_basis);
    QMat BM = M.basis();
    IntMatrix T(n, n);
    for (size_t i = 0; i < n; i++) {
        QVec row = qvec_mul(BM[i], q.big_inverse);
        for (size_t j = 0; j < n; j++) {
            if (boost::multiprecision::denominator(row[j]) != 1) {
                throw DomainError("lattice_quotient: sublattice is not contained in the lattice");
            }
            T(i, j) = boost::multiprecision::numerator(row[j]);
        }
    }
    SmithForm s = smith_decompose(T);
    std::vector<int64_t> inv;
    for (size_t i = 0; i < n; i++) {
        if (s.D(i, i) == 0) {
            throw DomainError("lattice_quotient: sublattice is not of full rank");
        }
        if (s.D(i, i) > 1) {
            q.kept.push_back(i);
            inv.push_back(static_cast<int64_t>(s.D(i, i)));
        }
    }
    q.group = FinAbGroup(inv);
    q.V = s.V;
    for (size_t k : q.kept) {
        QVec c(n);
        for (size_t j = 0; j < n; j++) {
            c[j] = QNum(s.V_inv(k, j));
        }
        q.lifts.push_back(qvec_mul(c, q.big_basis));
    }
    return q;
}

/// A GHG of arithmetic type with its defining lattices.
struct ArithGhg {
    NumberField K;
    FracIdeal I;
    FracIdeal frak_f;
    FracIdeal different;
    FracIdeal I_hat;
    /// f with frak_f meet Z = fZ.
    int64_t f = 1;
    int64_t r = 1;
    /// A = I / frak_f I and B = frak_f^{-1} I_hat / I_hat.
    LatticeQuotient qa;
    LatticeQuotient qb;
    GhgDescriptor desc;
};

/// The positive generator of frak_f meet Z.
inline int64_t ideal_min_integer(const FracIdeal &a) {
    if (!a.is_integral()) {
        throw DomainError("ideal_min_integer: ideal is not integral");
    }
    QVec e0(a.degree(), QNum(0));
    e0[0] = 1;
    QVec c = qvec_mul(e0, qmat_inverse(a.basis()));
    BigInt l = 1;
    for (const auto &x : c) {
        l = boost::multiprecision::lcm(l, BigInt(boost::multiprecision::denominator(x)));
    }
    return static_cast<int64_t>(l);
}

inline GroupHom lattice_multiplication(const NumberField &K, const LatticeQuotient &q, const QVec &x) {
    std::vector<GroupElement> imgs;
    for (const auto &l : q.lifts) {
        imgs.push_back(q.project(K.mul(x, l)));
    }
    return GroupHom::from_images(q.group, q.group, imgs);
}

/// H[I, frak_f, r]: the trace pairing lambda(x, y) = Tr(xy) on I/frak_f I x frak_f^{-1} I_hat / I_hat, valued in
/// r^{-1}Z/Z (r defaults to f). The ring O/frak_f acts through theta when the degree exceeds 1.
inline ArithGhg trace_pairing_build(const NumberField &K, const FracIdeal &I, const FracIdeal &frak_f,
                                    std::optional<int64_t> r = std::nullopt) {
    ArithGhg g;
    g.K = K;
    g.I = I;
    g.frak_f = frak_f;
    if (!frak_f.is_integral()) {
        throw DomainError("trace_pairing_build: frak_f must be integral");
    }
    g.f = ideal_min_integer(frak_f);
    if (g.f == 1) {
        throw DomainError("trace_pairing_build: frak_f must be a proper ideal");
    }
    g.r = r.value_or(g.f);
    if (g.r <= 0 || g.r % g.f != 0) {
        throw DomainError("trace_pairing_build: r must be a positive multiple of f = " + std::to_string(g.f));
    }
    g.different = different(K);
    g.I_hat = ideal_inverse(K, ideal_mul(K, g.different, I));
    FracIdeal f_inv = ideal_inverse(K, frak_f);
    g.qa = lattice_quotient(I, ideal_mul(K, frak_f, I));
    g.qb = lattice_quotient(ideal_mul(K, f_inv, g.I_hat), g.I_hat);
    std::vector<std::vector<int64_t>> V(g.qa.lifts.size(), std::vector<int64_t>(g.qb.lifts.size(), 0));
    for (size_t i = 0; i < g.qa.lifts.size(); i++) {
        for (size_t j = 0; j < g.qb.lifts.size(); j++) {
            QNum t = K.trace(K.mul(g.qa.lifts[i], g.qb.lifts[j])) * g.f;
            if (boost::multiprecision::denominator(t) != 1) {
                throw InternalError("trace_pairing_build: trace pairing is not valued in f^{-1}Z");
            }
            int64_t v = static_cast<int64_t>(boost::multiprecision::numerator(t) % g.f);
            V[i][j] = mod(v, g.f) * (g.r / g.f);
        }
    }
    std::optional<RingAction> ring;
    if (K.degree() > 1) {
        QVec th = K.theta_power(1);
        ring = RingAction{{lattice_multiplication(K, g.qa, th)}, {lattice_multiplication(K, g.qb, th)}};
    }
    g.desc = GhgDescriptor::cyclic(g.qa.group, g.qb.group, g.r, V, ring);
    return g;
}

inline ArithGhg ghg_with_enlarged_centre(const NumberField &K, const FracIdeal &I, const FracIdeal &frak_f,
                                         int64_t r) {
    return trace_pairing_build(K, I, frak_f, r);
}

/// Field and ideal data as written in a config file.
struct ArithConfig {
    std::vector<int64_t> min_poly;
    std::vector<std::string> I;
    std::vector<std::string> frak_f;
    std::optional<int64_t> r;
};

inline ArithGhg arith_from_config(const ArithConfig &c) {
    NumberField K(c.min_poly);
    return trace_pairing_build(K, FracIdeal::from_strings(K, c.I), FracIdeal::from_strings(K, c.frak_f), c.r);
}

/// O/frak_f with full addition and multiplication tables.
struct ResidueRing {
    LatticeQuotient q;
    size_t size = 0;
    std::vector<QVec> lifts;
    std::vector<std::vector<size_t>> add;
    std::vector<std::vector<size_t>> mul;
    size_t zero = 0;
    size_t one = 0;

    size_t neg(size_t x) const {
        for (size_t y = 0; y < size; y++) {
            if (add[x][y] == zero) {
                return y;
            }
        }
        throw InternalError("ResidueRing::neg: no additive inverse");
    }

    size_t sub(size_t x, size_t y) const { return add[x][neg(y)]; }
};

inline ResidueRing residue_ring(const NumberField &K, const FracIdeal &frak_f) {
    ResidueRing R;
    R.q = lattice_quotient(FracIdeal::unit(K), frak_f);
    const FinAbGroup &G = R.q.group;
    R.size = G.order();
    for (size_t i = 0; i < R.size; i++) {
        R.lifts.push_back(R.q.lift(G.at(i)));
    }
    R.add.assign(R.size, std::vector<size_t>(R.size));
    R.mul.assign(R.size, std::vector<size_t>(R.size));
    for (size_t i = 0; i < R.size; i++) {
        for (size_t j = 0; j < R.size; j++) {
            R.add[i][j] = G.index_of(G.add(G.at(i), G.at(j)));
            R.mul[i][j] = G.index_of(R.q.project(K.mul(R.lifts[i], R.lifts[j])));
        }
    }
    R.zero = 0;
    R.one = G.index_of(R.q.project(K.one()));
    return R;
}

inline ResidueRing residue_ring(const ArithGhg &g) { return residue_ring(g.K, g.frak_f); }

/// O/frak_f-bases x of A and y of B with the tables u -> u x and w -> w y (residue index to group index).
struct BasisPick {
    QVec x;
    QVec y;
    GroupElement xbar;
    GroupElement ybar;
    std::vector<size_t> a_of_u;
    std::vector<size_t> b_of_w;
    std::vector<size_t> u_of_a;
    std::vector<size_t> w_of_b;
};

namespace detail {

inline std::vector<QVec> pick_candidates(const NumberField &K, const FracIdeal &L) {
    QMat B = L.basis();
    std::vector<QVec> out(B.begin(), B.end());
    for (int64_t k = 1; k <= 6; k++) {
        for (size_t i = 0; i < B.size(); i++) {
            for (size_t j = 0; j < B.size(); j++) {
                if (i != j) {
                    out.push_back(K.add(B[i], K.scale(B[j], QNum(k))));
                }
            }
        }
    }
    return out;
}

inline std::optional<QVec> pick_generator(const NumberField &K, const FracIdeal &L, const FracIdeal &M) {
    for (const auto &x : pick_candidates(K, L)) {
        std::vector<QVec> rows = M.basis();
        QVec p = x;
        for (size_t i = 0; i < K.degree(); i++) {
            rows.push_back(p);
            p = K.mul_theta(p);
        }
        if (FracIdeal::from_lattice(K.degree(), rows) == L) {
            return x;
        }
    }
    return std::nullopt;
}

inline std::vector<size_t> invert_table(const std::vector<size_t> &t, const char *what) {
    std::vector<size_t> inv(t.size(), t.size());
    for (size_t u = 0; u < t.size(); u++) {
        if (t[u] >= t.size() || inv[t[u]] != t.size()) {
            throw InternalError(std::string("basis_pick: multiplication by the chosen element is not a bijection on ") +
                                what);
        }
        inv[t[u]] = u;
    }
    return inv;
}

}  // namespace detail

inline BasisPick basis_pick(const ArithGhg &g, const ResidueRing &R) {
    const NumberField &K = g.K;
    FracIdeal fI = ideal_mul(K, g.frak_f, g.I);
    FracIdeal fIhat = ideal_mul(K, ideal_inverse(K, g.frak_f), g.I_hat);
    auto x = detail::pick_generator(K, g.I, fI);
    if (!x) {
        throw InternalError("basis_pick: no x with xO + frak_f I = I among small combinations of the basis of I " +
                            g.I.str());
    }
    auto y = detail::pick_generator(K, fIhat, g.I_hat);
    if (!y) {
        throw InternalError("basis_pick: no y generating frak_f^{-1} I_hat modulo I_hat among small combinations");
    }
    BasisPick p;
    p.x = *x;
    p.y = *y;
    p.xbar = g.qa.project(p.x);
    p.ybar = g.qb.project(p.y);
    if (R.size != g.qa.group.order() || R.size != g.qb.group.order()) {
        throw InternalError("basis_pick: |O/frak_f| differs from |A| or |B|");
    }
    for (size_t u = 0; u < R.size; u++) {
        p.a_of_u.push_back(g.qa.group.index_of(g.qa.project(K.mul(R.lifts[u], p.x))));
        p.b_of_w.push_back(g.qb.group.index_of(g.qb.project(K.mul(R.lifts[u], p.y))));
    }
    p.u_of_a = detail::invert_table(p.a_of_u, "A");
    p.w_of_b = detail::invert_table(p.b_of_w, "B");
    return p;
}

/// A 2x2 matrix over O/frak_f, entries as residue indices.
struct Mat2 {
    size_t u = 0;
    size_t v = 0;
    size_t w = 0;
    size_t z = 0;

    bool operator==(const Mat2 &o) const = default;
};

inline size_t mat2_det(const ResidueRing &R, const Mat2 &m) { return R.sub(R.mul[m.u][m.z], R.mul[m.v][m.w]); }

/// M with phi(x, 0) = (u x, w y) and phi(0, y) = (v x, z y).
inline Mat2 xi_sl2_map(const ArithGhg &g, const BasisPick &p, const SpElement &phi) {
    const GhgDescriptor &d = g.desc;
    if (!is_ring_linear(d, phi.map)) {
        throw DomainError("xi_sl2_map: map is not O/frak_f-linear");
    }
    const FinAbGroup &A = d.A();
    const FinAbGroup &B = d.B();
    auto [a1, b1] = split_abar(d, phi.apply(join_abar(p.xbar, B.zero())));
    auto [a2, b2] = split_abar(d, phi.apply(join_abar(A.zero(), p.ybar)));
    return Mat2{p.u_of_a[A.index_of(a1)], p.u_of_a[A.index_of(a2)], p.w_of_b[B.index_of(b1)],
                p.w_of_b[B.index_of(b2)]};
}

/// The endomorphism (alpha x, beta y) -> ((u alpha + v beta) x, (w alpha + z beta) y) of A + B.
inline GroupHom map_from_mat2(const ArithGhg &g, const ResidueRing &R, const BasisPick &p, const Mat2 &m) {
    const GhgDescriptor &d = g.desc;
    FinAbGroup G = d.abar();
    const FinAbGroup &A = d.A();
    const FinAbGroup &B = d.B();
    std::vector<GroupElement> imgs;
    for (size_t j = 0; j < G.rank(); j++) {
        auto [a, b] = split_abar(d, G.generator(j));
        size_t al = p.u_of_a[A.index_of(a)];
        size_t be = p.w_of_b[B.index_of(b)];
        size_t na = R.add[R.mul[m.u][al]][R.mul[m.v][be]];
        size_t nb = R.add[R.mul[m.w][al]][R.mul[m.z][be]];
        imgs.push_back(join_abar(A.at(p.a_of_u[na]), B.at(p.b_of_w[nb])));
    }
    return GroupHom::from_images(G, G, imgs);
}

/// All of SL_2(O/frak_f) from the residue ring tables.
inline std::vector<Mat2> enumerate_sl2_residue(const ResidueRing &R) {
    std::vector<Mat2> out;
    size_t n = R.size;
    for (size_t u = 0; u < n; u++) {
        for (size_t v = 0; v < n; v++) {
            for (size_t w = 0; w < n; w++) {
                for (size_t z = 0; z < n; z++) {
                    Mat2 m{u, v, w, z};
                    if (mat2_det(R, m) == R.one) {
                        out.push_back(m);
                    }
                }
            }
        }
    }
    return out;
}

/// Counts of the two directions of the determinant criterion over all 2x2 matrices.
struct Sl2Report {
    size_t matrices = 0;
    size_t symplectic = 0;
    size_t det_one = 0;
    /// Matrices where symplecticity and det = 1 disagree.
    size_t mismatches = 0;
};

inline Sl2Report sl2_criterion_check(const ArithGhg &g, const ResidueRing &R, const BasisPick &p) {
    Sl2Report rep;
    size_t n = R.size;
    for (size_t u = 0; u < n; u++) {
        for (size_t v = 0; v < n; v++) {
            for (size_t w = 0; w < n; w++) {
                for (size_t z = 0; z < n; z++) {
                    Mat2 m{u, v, w, z};
                    rep.matrices++;
                    bool det1 = mat2_det(R, m) == R.one;
                    bool sp = is_symplectic(g.desc, map_from_mat2(g, R, p, m));
                    rep.det_one += det1;
                    rep.symplectic += sp;
                    rep.mismatches += det1 != sp;
                }
            }
        }
    }
    return rep;
}

/// Whether the inclusion frak_f^{-1} I^{-1} -> frak_f^{-1} I_hat induces an isomorphism modulo I^{-1} and I_hat.
inline bool dual_quotient_isomorphic(const ArithGhg &g) {
    const NumberField &K = g.K;
    FracIdeal I_inv = ideal_inverse(K, g.I);
    FracIdeal f_inv = ideal_inverse(K, g.frak_f);
    LatticeQuotient q1 = lattice_quotient(ideal_mul(K, f_inv, I_inv), I_inv);
    std::vector<GroupElement> imgs;
    for (const auto &l : q1.lifts) {
        imgs.push_back(g.qb.project(l));
    }
    GroupHom h = GroupHom::from_images(q1.group, g.qb.group, imgs);
    return h.is_bijective();
}

inline bool ideals_coprime(const NumberField &K, const FracIdeal &a, const FracIdeal &b) {
    return ideal_add(a, b) == FracIdeal::unit(K);
}

}  // namespace ghg

#endif
