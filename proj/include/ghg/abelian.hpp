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

#ifndef GHG_ABELIAN_HPP
#define GHG_ABELIAN_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ghg/errors.hpp"

namespace ghg {

using BigInt = boost::multiprecision::cpp_int;

/// Dense integer matrix with arbitrary-precision entries.
class IntMatrix {
  public:
    IntMatrix() = default;
    IntMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static IntMatrix identity(size_t n) {
        IntMatrix m(n, n);
        for (size_t i = 0; i < n; i++) {
            m(i, i) = 1;
        }
        return m;
    }

    static IntMatrix from_rows(const std::vector<std::vector<int64_t>> &rows) {
        size_t nc = rows.empty() ? 0 : rows[0].size();
        IntMatrix m(rows.size(), nc);
        for (size_t i = 0; i < rows.size(); i++) {
            if (rows[i].size() != nc) {
                throw DomainError("IntMatrix::from_rows: ragged rows");
            }
            for (size_t j = 0; j < nc; j++) {
                m(i, j) = rows[i][j];
            }
        }
        return m;
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    BigInt &operator()(size_t i, size_t j) { return data_[i * cols_ + j]; }
    const BigInt &operator()(size_t i, size_t j) const { return data_[i * cols_ + j]; }
    bool operator==(const IntMatrix &other) const = default;

    IntMatrix operator*(const IntMatrix &o) const {
        if (cols_ != o.rows_) {
            throw DomainError("IntMatrix: shape mismatch in product");
        }
        IntMatrix r(rows_, o.cols_);
        for (size_t i = 0; i < rows_; i++) {
            for (size_t k = 0; k < cols_; k++) {
                const BigInt &a = (*this)(i, k);
                if (a == 0) {
                    continue;
                }
                for (size_t j = 0; j < o.cols_; j++) {
                    r(i, j) += a * o(k, j);
                }
            }
        }
        return r;
    }

    IntMatrix transpose() const {
        IntMatrix t(cols_, rows_);
        for (size_t i = 0; i < rows_; i++) {
            for (size_t j = 0; j < cols_; j++) {
                t(j, i) = (*this)(i, j);
            }
        }
        return t;
    }

    void swap_rows(size_t a, size_t b) {
        if (a == b) {
            return;
        }
        for (size_t j = 0; j < cols_; j++) {
            std::swap((*this)(a, j), (*this)(b, j));
        }
    }
    void swap_cols(size_t a, size_t b) {
        if (a == b) {
            return;
        }
        for (size_t i = 0; i < rows_; i++) {
            std::swap((*this)(i, a), (*this)(i, b));
        }
    }
    /// row dst += q * row src
    void add_row_multiple(size_t dst, size_t src, const BigInt &q) {
        if (q == 0) {
            return;
        }
        for (size_t j = 0; j < cols_; j++) {
            (*this)(dst, j) += q * (*this)(src, j);
        }
    }
    /// col dst += q * col src
    void add_col_multiple(size_t dst, size_t src, const BigInt &q) {
        if (q == 0) {
            return;
        }
        for (size_t i = 0; i < rows_; i++) {
            (*this)(i, dst) += q * (*this)(i, src);
        }
    }
    void negate_row(size_t i) {
        for (size_t j = 0; j < cols_; j++) {
            (*this)(i, j) = -(*this)(i, j);
        }
    }
    void negate_col(size_t j) {
        for (size_t i = 0; i < rows_; i++) {
            (*this)(i, j) = -(*this)(i, j);
        }
    }

    /// Determinant by fraction-free Bareiss elimination.
    BigInt det() const {
        if (rows_ != cols_) {
            throw DomainError("IntMatrix::det: not square");
        }
        size_t n = rows_;
        if (n == 0) {
            return 1;
        }
        IntMatrix a = *this;
        BigInt prev = 1;
        int sign = 1;
        for (size_t k = 0; k + 1 < n; k++) {
            if (a(k, k) == 0) {
                size_t p = k + 1;
                while (p < n && a(p, k) == 0) {
                    p++;
                }
                if (p == n) {
                    return 0;
                }
                a.swap_rows(k, p);
                sign = -sign;
            }
            for (size_t i = k + 1; i < n; i++) {
                for (size_t j = k + 1; j < n; j++) {
                    a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
                }
            }
            prev = a(k, k);
        }
        return sign * a(n - 1, n - 1);
    }

    std::vector<std::vector<int64_t>> to_int64() const {
        std::vector<std::vector<int64_t>> out(rows_, std::vector<int64_t>(cols_));
        for (size_t i = 0; i < rows_; i++) {
            for (size_t j = 0; j < cols_; j++) {
                const BigInt &v = (*this)(i, j);
                if (v > INT64_MAX || v < INT64_MIN) {
                    throw NumericalError("IntMatrix::to_int64: entry overflows 64 bits");
                }
                out[i][j] = static_cast<int64_t>(v);
            }
        }
        return out;
    }

    std::string str() const {
        std::ostringstream ss;
        ss << "[";
        for (size_t i = 0; i < rows_; i++) {
            ss << (i ? ", [" : "[");
            for (size_t j = 0; j < cols_; j++) {
                ss << (j ? ", " : "") << (*this)(i, j);
            }
            ss << "]";
        }
        ss << "]";
        return ss.str();
    }

  private:
    size_t rows_ = 0;
    size_t cols_ = 0;
    std::vector<BigInt> data_;
};

inline BigInt floor_div(const BigInt &a, const BigInt &b) {
    BigInt q = a / b;
    if (a % b != 0 && ((a < 0) != (b < 0))) {
        q -= 1;
    }
    return q;
}

/// Result of smith_decompose: U * M * V = D, with U_inv, V_inv the exact inverses.
struct SmithForm {
    IntMatrix U;
    IntMatrix D;
    IntMatrix V;
    IntMatrix U_inv;
    IntMatrix V_inv;
    size_t rank = 0;

    std::vector<BigInt> diagonal() const {
        std::vector<BigInt> d;
        for (size_t i = 0; i < std::min(D.rows(), D.cols()); i++) {
            d.push_back(D(i, i));
        }
        return d;
    }
};

/// Smith normal form. Diagonal entries are non-negative, each divides the next, zeros last.
inline SmithForm smith_decompose(const IntMatrix &M) {
    size_t m = M.rows();
    size_t n = M.cols();
    IntMatrix A = M;
    IntMatrix U = IntMatrix::identity(m);
    IntMatrix Ui = IntMatrix::identity(m);
    IntMatrix V = IntMatrix::identity(n);
    IntMatrix Vi = IntMatrix::identity(n);

    auto row_add = [&](size_t dst, size_t src, const BigInt &q) {
        A.add_row_multiple(dst, src, q);
        U.add_row_multiple(dst, src, q);
        Ui.add_col_multiple(src, dst, -q);
    };
    auto row_swap = [&](size_t a, size_t b) {
        A.swap_rows(a, b);
        U.swap_rows(a, b);
        Ui.swap_cols(a, b);
    };
    auto row_neg = [&](size_t i) {
        A.negate_row(i);
        U.negate_row(i);
        Ui.negate_col(i);
    };
    auto col_add = [&](size_t dst, size_t src, const BigInt &q) {
        A.add_col_multiple(dst, src, q);
        V.add_col_multiple(dst, src, q);
        Vi.add_row_multiple(src, dst, -q);
    };
    auto col_swap = [&](size_t a, size_t b) {
        A.swap_cols(a, b);
        V.swap_cols(a, b);
        Vi.swap_rows(a, b);
    };

    size_t rank = 0;
    for (size_t t = 0; t < std::min(m, n); t++) {
        bool found_any = true;
        while (true) {
            size_t pi = m, pj = n;
            BigInt best = 0;
            for (size_t i = t; i < m; i++) {
                for (size_t j = t; j < n; j++) {
                    if (A(i, j) != 0) {
                        BigInt a = abs(A(i, j));
                        if (pi == m || a < best) {
                            best = a;
                            pi = i;
                            pj = j;
                        }
                    }
                }
            }
            if (pi == m) {
                found_any = false;
                break;
            }
            row_swap(t, pi);
            col_swap(t, pj);
            bool changed = false;
            for (size_t i = t + 1; i < m; i++) {
                if (A(i, t) != 0) {
                    BigInt q = A(i, t) / A(t, t);
                    row_add(i, t, -q);
                    if (A(i, t) != 0) {
                        changed = true;
                    }
                }
            }
            for (size_t j = t + 1; j < n; j++) {
                if (A(t, j) != 0) {
                    BigInt q = A(t, j) / A(t, t);
                    col_add(j, t, -q);
                    if (A(t, j) != 0) {
                        changed = true;
                    }
                }
            }
            if (changed) {
                continue;
            }
            size_t bad = m;
            for (size_t i = t + 1; i < m && bad == m; i++) {
                for (size_t j = t + 1; j < n; j++) {
                    if (A(i, j) % A(t, t) != 0) {
                        bad = i;
                        break;
                    }
                }
            }
            if (bad != m) {
                row_add(t, bad, 1);
                continue;
            }
            break;
        }
        if (!found_any) {
            break;
        }
        if (A(t, t) < 0) {
            row_neg(t);
        }
        rank++;
    }
    return SmithForm{std::move(U), std::move(A), std::move(V), std::move(Ui), std::move(Vi), rank};
}

/// Hermite normal form of the lattice spanned by the rows of M. Returns only the nonzero rows, in
/// echelon form with positive pivots and entries above each pivot reduced into [0, pivot).
inline IntMatrix hermite_rows(const IntMatrix &M) {
    IntMatrix A = M;
    size_t m = A.rows();
    size_t n = A.cols();
    size_t r = 0;
    for (size_t c = 0; c < n && r < m; c++) {
        while (true) {
            size_t p = m;
            BigInt best = 0;
            for (size_t i = r; i < m; i++) {
                if (A(i, c) != 0) {
                    BigInt a = abs(A(i, c));
                    if (p == m || a < best) {
                        best = a;
                        p = i;
                    }
                }
            }
            if (p == m) {
                break;
            }
            A.swap_rows(r, p);
            bool done = true;
            for (size_t i = r + 1; i < m; i++) {
                if (A(i, c) != 0) {
                    BigInt q = A(i, c) / A(r, c);
                    A.add_row_multiple(i, r, -q);
                    if (A(i, c) != 0) {
                        done = false;
                    }
                }
            }
            if (done) {
                break;
            }
        }
        if (r < m && A(r, c) != 0) {
            if (A(r, c) < 0) {
                A.negate_row(r);
            }
            for (size_t i = 0; i < r; i++) {
                BigInt q = floor_div(A(i, c), A(r, c));
                A.add_row_multiple(i, r, -q);
            }
            r++;
        }
    }
    IntMatrix out(r, n);
    for (size_t i = 0; i < r; i++) {
        for (size_t j = 0; j < n; j++) {
            out(i, j) = A(i, j);
        }
    }
    return out;
}

/// Expresses v as an integer combination of the rows of an echelon basis H (from hermite_rows).
/// Returns false if v is not in the row lattice.
inline bool lattice_coordinates(const IntMatrix &H, std::vector<BigInt> v, std::vector<BigInt> *coeffs) {
    std::vector<BigInt> c(H.rows());
    size_t n = H.cols();
    for (size_t i = 0; i < H.rows(); i++) {
        size_t p = 0;
        while (p < n && H(i, p) == 0) {
            p++;
        }
        for (size_t j = 0; j < p; j++) {
            if (v[j] != 0) {
                return false;
            }
        }
        if (v[p] % H(i, p) != 0) {
            return false;
        }
        c[i] = v[p] / H(i, p);
        for (size_t j = p; j < n; j++) {
            v[j] -= c[i] * H(i, j);
        }
    }
    for (const auto &x : v) {
        if (x != 0) {
            return false;
        }
    }
    if (coeffs != nullptr) {
        *coeffs = std::move(c);
    }
    return true;
}

/// Columns form a basis of the integer kernel {x : M x = 0}.
inline IntMatrix integer_kernel(const IntMatrix &M) {
    SmithForm s = smith_decompose(M);
    size_t n = M.cols();
    IntMatrix K(n, n - s.rank);
    for (size_t j = s.rank; j < n; j++) {
        for (size_t i = 0; i < n; i++) {
            K(i, j - s.rank) = s.V(i, j);
        }
    }
    return K;
}

/// An element of a finite abelian group: residues with respect to the group's cyclic factors.
struct GroupElement {
    std::vector<int64_t> coords;

    bool operator==(const GroupElement &other) const = default;
    auto operator<=>(const GroupElement &other) const = default;

    bool is_zero() const {
        return std::all_of(coords.begin(), coords.end(), [](int64_t c) { return c == 0; });
    }
};

class Subgroup;

/// A finite abelian group given as a product of cyclic groups Z/d_1 x ... x Z/d_k.
///
/// Groups built with the public constructor are in invariant-factor form (d_i | d_{i+1}, all d_i >= 2).
/// product_of_cyclic admits arbitrary orders; such groups are used for coordinates on A + B.
class FinAbGroup {
  public:
    FinAbGroup() = default;

    explicit FinAbGroup(std::vector<int64_t> invariant_factors) {
        for (int64_t d : invariant_factors) {
            if (d < 1) {
                throw DomainError("FinAbGroup: invariant factors must be positive");
            }
            if (d > 1) {
                factors_.push_back(d);
            }
        }
        for (size_t i = 0; i + 1 < factors_.size(); i++) {
            if (factors_[i + 1] % factors_[i] != 0) {
                throw DomainError("FinAbGroup: invariant factors must form a divisibility chain");
            }
        }
        check_order();
    }

    static FinAbGroup cyclic(int64_t n) { return FinAbGroup(std::vector<int64_t>{n}); }

    static FinAbGroup product_of_cyclic(const std::vector<int64_t> &orders) {
        FinAbGroup g;
        for (int64_t d : orders) {
            if (d < 1) {
                throw DomainError("FinAbGroup: cyclic orders must be positive");
            }
            if (d > 1) {
                g.factors_.push_back(d);
            }
        }
        g.check_order();
        return g;
    }

    const std::vector<int64_t> &factors() const { return factors_; }
    size_t rank() const { return factors_.size(); }

    bool is_canonical() const {
        for (size_t i = 0; i + 1 < factors_.size(); i++) {
            if (factors_[i + 1] % factors_[i] != 0) {
                return false;
            }
        }
        return true;
    }

    uint64_t order() const {
        uint64_t n = 1;
        for (int64_t d : factors_) {
            n *= static_cast<uint64_t>(d);
        }
        return n;
    }

    int64_t exponent() const {
        int64_t e = 1;
        for (int64_t d : factors_) {
            e = std::lcm(e, d);
        }
        return e;
    }

    FinAbGroup canonical_form() const;

    bool is_cyclic() const { return canonical_form().rank() <= 1; }

    bool contains(const GroupElement &x) const {
        if (x.coords.size() != factors_.size()) {
            return false;
        }
        for (size_t i = 0; i < factors_.size(); i++) {
            if (x.coords[i] < 0 || x.coords[i] >= factors_[i]) {
                return false;
            }
        }
        return true;
    }

    GroupElement zero() const { return GroupElement{std::vector<int64_t>(factors_.size(), 0)}; }

    GroupElement generator(size_t i) const {
        GroupElement g = zero();
        g.coords.at(i) = 1;
        return g;
    }

    /// Reduces arbitrary integer coordinates into the group.
    GroupElement make(const std::vector<int64_t> &coords) const {
        if (coords.size() != factors_.size()) {
            throw DomainError("FinAbGroup::make: expected " + std::to_string(factors_.size()) + " coordinates, got " +
                              std::to_string(coords.size()));
        }
        GroupElement g{coords};
        for (size_t i = 0; i < factors_.size(); i++) {
            g.coords[i] = mod(g.coords[i], factors_[i]);
        }
        return g;
    }

    GroupElement add(const GroupElement &x, const GroupElement &y) const {
        require(x);
        require(y);
        GroupElement r = x;
        for (size_t i = 0; i < factors_.size(); i++) {
            r.coords[i] += y.coords[i];
            if (r.coords[i] >= factors_[i]) {
                r.coords[i] -= factors_[i];
            }
        }
        return r;
    }

    GroupElement neg(const GroupElement &x) const {
        require(x);
        GroupElement r = x;
        for (size_t i = 0; i < factors_.size(); i++) {
            r.coords[i] = r.coords[i] == 0 ? 0 : factors_[i] - r.coords[i];
        }
        return r;
    }

    GroupElement sub(const GroupElement &x, const GroupElement &y) const { return add(x, neg(y)); }

    GroupElement scale(const GroupElement &x, int64_t k) const {
        require(x);
        GroupElement r = x;
        for (size_t i = 0; i < factors_.size(); i++) {
            r.coords[i] = mulmod(mod(k, factors_[i]), r.coords[i], factors_[i]);
        }
        return r;
    }

    int64_t element_order(const GroupElement &x) const {
        require(x);
        int64_t o = 1;
        for (size_t i = 0; i < factors_.size(); i++) {
            o = std::lcm(o, factors_[i] / std::gcd(factors_[i], x.coords[i]));
        }
        return o;
    }

    /// Position of x in the lexicographic enumeration (first coordinate most significant).
    size_t index_of(const GroupElement &x) const {
        require(x);
        size_t idx = 0;
        for (size_t i = 0; i < factors_.size(); i++) {
            idx = idx * static_cast<size_t>(factors_[i]) + static_cast<size_t>(x.coords[i]);
        }
        return idx;
    }

    GroupElement at(size_t idx) const {
        if (idx >= order()) {
            throw DomainError("FinAbGroup::at: index out of range");
        }
        GroupElement g = zero();
        for (size_t i = factors_.size(); i-- > 0;) {
            g.coords[i] = static_cast<int64_t>(idx % static_cast<size_t>(factors_[i]));
            idx /= static_cast<size_t>(factors_[i]);
        }
        return g;
    }

    std::vector<GroupElement> elements() const {
        std::vector<GroupElement> out;
        size_t n = order();
        out.reserve(n);
        for (size_t i = 0; i < n; i++) {
            out.push_back(at(i));
        }
        return out;
    }

    bool operator==(const FinAbGroup &other) const = default;

    std::string str() const {
        if (factors_.empty()) {
            return "0";
        }
        std::string s;
        for (size_t i = 0; i < factors_.size(); i++) {
            s += (i ? " + Z/" : "Z/") + std::to_string(factors_[i]);
        }
        return s;
    }

    void require(const GroupElement &x) const {
        if (!contains(x)) {
            throw DomainError("element does not belong to group " + str());
        }
    }

  private:
    void check_order() const {
        unsigned __int128 n = 1;
        for (int64_t d : factors_) {
            n *= static_cast<unsigned __int128>(d);
            if (n > (static_cast<unsigned __int128>(1) << 62)) {
                throw DomainError("FinAbGroup: order too large");
            }
        }
    }

    std::vector<int64_t> factors_;
};

inline GroupElement element_add(const FinAbGroup &g, const GroupElement &x, const GroupElement &y) {
    return g.add(x, y);
}

inline FinAbGroup direct_product(const FinAbGroup &a, const FinAbGroup &b) {
    std::vector<int64_t> f = a.factors();
    f.insert(f.end(), b.factors().begin(), b.factors().end());
    return FinAbGroup::product_of_cyclic(f);
}

/// A subgroup of a finite abelian group, stored as the lattice L with d Z^n <= L <= Z^n.
class Subgroup {
  public:
    Subgroup() = default;

    /// Subgroup generated by the rows of `generators` (integer coordinate vectors).
    Subgroup(FinAbGroup ambient, const IntMatrix &generators) : ambient_(std::move(ambient)) {
        size_t n = ambient_.rank();
        if (generators.rows() > 0 && generators.cols() != n) {
            throw DomainError("Subgroup: generator width mismatch");
        }
        IntMatrix all(generators.rows() + n, n);
        for (size_t i = 0; i < generators.rows(); i++) {
            for (size_t j = 0; j < n; j++) {
                all(i, j) = generators(i, j);
            }
        }
        for (size_t i = 0; i < n; i++) {
            all(generators.rows() + i, i) = ambient_.factors()[i];
        }
        basis_ = hermite_rows(all);
        BigInt idx = 1;
        for (size_t i = 0; i < n; i++) {
            idx *= basis_(i, i);
        }
        BigInt total = ambient_.order();
        order_ = static_cast<uint64_t>(total / idx);
        IntMatrix rel(n, n);
        for (size_t i = 0; i < n; i++) {
            std::vector<BigInt> v(n);
            v[i] = ambient_.factors()[i];
            std::vector<BigInt> c;
            if (!lattice_coordinates(basis_, v, &c)) {
                throw InternalError("Subgroup: relation lattice not contained in subgroup lattice");
            }
            for (size_t j = 0; j < n; j++) {
                rel(i, j) = c[j];
            }
        }
        SmithForm s = smith_decompose(rel);
        std::vector<int64_t> inv;
        for (const auto &d : s.diagonal()) {
            inv.push_back(static_cast<int64_t>(d));
        }
        structure_ = FinAbGroup(inv);
        for (size_t i = 0; i < n; i++) {
            std::vector<int64_t> c(n);
            for (size_t j = 0; j < n; j++) {
                c[j] = static_cast<int64_t>(basis_(i, j) % ambient_.factors()[j]);
            }
            GroupElement g = ambient_.make(c);
            if (!g.is_zero()) {
                generators_.push_back(g);
            }
        }
    }

    static Subgroup generated_by(const FinAbGroup &ambient, const std::vector<GroupElement> &gens) {
        IntMatrix m(gens.size(), ambient.rank());
        for (size_t i = 0; i < gens.size(); i++) {
            ambient.require(gens[i]);
            for (size_t j = 0; j < ambient.rank(); j++) {
                m(i, j) = gens[i].coords[j];
            }
        }
        return Subgroup(ambient, m);
    }

    const FinAbGroup &ambient() const { return ambient_; }
    const std::vector<GroupElement> &generators() const { return generators_; }
    uint64_t order() const { return order_; }
    bool is_trivial() const { return order_ == 1; }
    /// Invariant-factor form of the subgroup as an abstract group.
    const FinAbGroup &structure() const { return structure_; }

    bool contains(const GroupElement &x) const {
        ambient_.require(x);
        std::vector<BigInt> v(x.coords.begin(), x.coords.end());
        return lattice_coordinates(basis_, v, nullptr);
    }

    std::vector<GroupElement> elements() const {
        std::vector<GroupElement> out;
        for (const auto &g : ambient_.elements()) {
            if (contains(g)) {
                out.push_back(g);
            }
        }
        return out;
    }

  private:
    FinAbGroup ambient_;
    IntMatrix basis_;
    uint64_t order_ = 1;
    FinAbGroup structure_;
    std::vector<GroupElement> generators_;
};

/// Isomorphism data between a product of cyclic groups and its invariant-factor form.
struct CyclicPresentation {
    FinAbGroup source;
    FinAbGroup canonical;
    /// canonical.rank() x source.rank(): source coordinates -> canonical coordinates.
    std::vector<std::vector<int64_t>> to_canonical;
    /// source.rank() x canonical.rank(): canonical coordinates -> source coordinates.
    std::vector<std::vector<int64_t>> from_canonical;
};

inline CyclicPresentation canonical_presentation(const FinAbGroup &g) {
    CyclicPresentation p;
    p.source = g;
    size_t n = g.rank();
    if (g.is_canonical()) {
        p.canonical = g;
        p.to_canonical.assign(n, std::vector<int64_t>(n, 0));
        for (size_t i = 0; i < n; i++) {
            p.to_canonical[i][i] = 1;
        }
        p.from_canonical = p.to_canonical;
        return p;
    }
    IntMatrix rel(n, n);
    for (size_t i = 0; i < n; i++) {
        rel(i, i) = g.factors()[i];
    }
    SmithForm s = smith_decompose(rel);
    std::vector<int64_t> inv;
    std::vector<size_t> kept;
    for (size_t i = 0; i < n; i++) {
        int64_t d = static_cast<int64_t>(s.D(i, i));
        if (d > 1) {
            inv.push_back(d);
            kept.push_back(i);
        }
    }
    p.canonical = FinAbGroup(inv);
    p.to_canonical.assign(kept.size(), std::vector<int64_t>(n, 0));
    p.from_canonical.assign(n, std::vector<int64_t>(kept.size(), 0));
    for (size_t k = 0; k < kept.size(); k++) {
        for (size_t j = 0; j < n; j++) {
            p.to_canonical[k][j] = static_cast<int64_t>(mod(static_cast<int64_t>(s.U(kept[k], j) % inv[k]), inv[k]));
            p.from_canonical[j][k] =
                static_cast<int64_t>(mod(static_cast<int64_t>(s.U_inv(j, kept[k]) % g.factors()[j]), g.factors()[j]));
        }
    }
    return p;
}

inline FinAbGroup FinAbGroup::canonical_form() const {
    if (is_canonical()) {
        return *this;
    }
    return canonical_presentation(*this).canonical;
}

/// A homomorphism between finite abelian groups, acting on coordinate column vectors.
class GroupHom {
  public:
    GroupHom() = default;

    GroupHom(FinAbGroup source, FinAbGroup target, std::vector<std::vector<int64_t>> matrix)
        : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
        size_t m = target_.rank();
        size_t n = source_.rank();
        if (matrix_.size() != m) {
            if (!(m == 0 && matrix_.empty())) {
                throw DomainError("GroupHom: matrix must have one row per target factor");
            }
        }
        for (size_t i = 0; i < m; i++) {
            if (matrix_[i].size() != n) {
                throw DomainError("GroupHom: matrix must have one column per source factor");
            }
            for (size_t j = 0; j < n; j++) {
                matrix_[i][j] = mod(matrix_[i][j], target_.factors()[i]);
            }
        }
        for (size_t j = 0; j < n; j++) {
            for (size_t i = 0; i < m; i++) {
                if (mulmod(source_.factors()[j], matrix_[i][j], target_.factors()[i]) != 0) {
                    throw DomainError("GroupHom: image of generator " + std::to_string(j) +
                                      " does not respect its order " + std::to_string(source_.factors()[j]));
                }
            }
        }
    }

    static GroupHom identity(const FinAbGroup &g) {
        std::vector<std::vector<int64_t>> m(g.rank(), std::vector<int64_t>(g.rank(), 0));
        for (size_t i = 0; i < g.rank(); i++) {
            m[i][i] = 1;
        }
        return GroupHom(g, g, m);
    }

    static GroupHom zero(const FinAbGroup &source, const FinAbGroup &target) {
        return GroupHom(source, target,
                        std::vector<std::vector<int64_t>>(target.rank(), std::vector<int64_t>(source.rank(), 0)));
    }

    /// The homomorphism with the given images of the source generators.
    static GroupHom from_images(const FinAbGroup &source, const FinAbGroup &target,
                                const std::vector<GroupElement> &images) {
        if (images.size() != source.rank()) {
            throw DomainError("GroupHom::from_images: need one image per generator");
        }
        std::vector<std::vector<int64_t>> m(target.rank(), std::vector<int64_t>(source.rank(), 0));
        for (size_t j = 0; j < images.size(); j++) {
            target.require(images[j]);
            for (size_t i = 0; i < target.rank(); i++) {
                m[i][j] = images[j].coords[i];
            }
        }
        return GroupHom(source, target, m);
    }

    const FinAbGroup &source() const { return source_; }
    const FinAbGroup &target() const { return target_; }
    const std::vector<std::vector<int64_t>> &matrix() const { return matrix_; }

    GroupElement apply(const GroupElement &x) const {
        source_.require(x);
        GroupElement y = target_.zero();
        for (size_t i = 0; i < target_.rank(); i++) {
            int64_t t = target_.factors()[i];
            int64_t acc = 0;
            for (size_t j = 0; j < source_.rank(); j++) {
                acc = mod(acc + mulmod(matrix_[i][j], x.coords[j], t), t);
            }
            y.coords[i] = acc;
        }
        return y;
    }

    /// The composite `after` o this.
    GroupHom then(const GroupHom &after) const {
        if (!(after.source_ == target_)) {
            throw DomainError("GroupHom::then: composition mismatch");
        }
        std::vector<GroupElement> imgs;
        for (size_t j = 0; j < source_.rank(); j++) {
            imgs.push_back(after.apply(apply(source_.generator(j))));
        }
        return from_images(source_, after.target_, imgs);
    }

    GroupHom operator+(const GroupHom &o) const {
        if (!(source_ == o.source_) || !(target_ == o.target_)) {
            throw DomainError("GroupHom::+: domain mismatch");
        }
        auto m = matrix_;
        for (size_t i = 0; i < m.size(); i++) {
            for (size_t j = 0; j < m[i].size(); j++) {
                m[i][j] += o.matrix_[i][j];
            }
        }
        return GroupHom(source_, target_, m);
    }

    bool operator==(const GroupHom &o) const = default;

    Subgroup kernel() const {
        size_t n = source_.rank();
        size_t m = target_.rank();
        IntMatrix sys(m, n + m);
        for (size_t i = 0; i < m; i++) {
            for (size_t j = 0; j < n; j++) {
                sys(i, j) = matrix_[i][j];
            }
            sys(i, n + i) = -target_.factors()[i];
        }
        IntMatrix k = integer_kernel(sys);
        IntMatrix gens(k.cols(), n);
        for (size_t c = 0; c < k.cols(); c++) {
            for (size_t j = 0; j < n; j++) {
                gens(c, j) = k(j, c);
            }
        }
        return Subgroup(source_, gens);
    }

    Subgroup image() const {
        std::vector<GroupElement> imgs;
        for (size_t j = 0; j < source_.rank(); j++) {
            imgs.push_back(apply(source_.generator(j)));
        }
        return Subgroup::generated_by(target_, imgs);
    }

    bool is_bijective() const { return source_.order() == target_.order() && kernel().is_trivial(); }

  private:
    FinAbGroup source_;
    FinAbGroup target_;
    std::vector<std::vector<int64_t>> matrix_;
};

/// A Z-bilinear map left x right -> target, determined by its values on pairs of generators.
class BilinearPairing {
  public:
    BilinearPairing() = default;

    BilinearPairing(FinAbGroup left, FinAbGroup right, FinAbGroup target,
                    std::vector<std::vector<GroupElement>> values)
        : left_(std::move(left)), right_(std::move(right)), target_(std::move(target)), values_(std::move(values)) {
        if (values_.size() != left_.rank()) {
            throw DomainError("BilinearPairing: need one row of values per left generator");
        }
        for (size_t i = 0; i < left_.rank(); i++) {
            if (values_[i].size() != right_.rank()) {
                throw DomainError("BilinearPairing: need one value per right generator");
            }
            for (size_t j = 0; j < right_.rank(); j++) {
                values_[i][j] = target_.make(values_[i][j].coords);
                if (!target_.scale(values_[i][j], left_.factors()[i]).is_zero() ||
                    !target_.scale(values_[i][j], right_.factors()[j]).is_zero()) {
                    throw DomainError("BilinearPairing: value on generators (" + std::to_string(i) + "," +
                                      std::to_string(j) + ") is inconsistent with generator orders");
                }
            }
        }
    }

    /// Pairing into the cyclic group Z/r with generator values V[i][j] mod r.
    static BilinearPairing cyclic(const FinAbGroup &left, const FinAbGroup &right, int64_t r,
                                  const std::vector<std::vector<int64_t>> &V) {
        FinAbGroup C = FinAbGroup::cyclic(r);
        std::vector<std::vector<GroupElement>> vals(V.size());
        for (size_t i = 0; i < V.size(); i++) {
            for (int64_t v : V[i]) {
                vals[i].push_back(C.make(C.rank() == 0 ? std::vector<int64_t>{} : std::vector<int64_t>{v}));
            }
        }
        return BilinearPairing(left, right, C, vals);
    }

    const FinAbGroup &left() const { return left_; }
    const FinAbGroup &right() const { return right_; }
    const FinAbGroup &target() const { return target_; }
    const std::vector<std::vector<GroupElement>> &values() const { return values_; }

    bool target_is_cyclic() const { return target_.is_canonical() && target_.rank() <= 1; }

    /// Order r of a cyclic target.
    int64_t modulus() const {
        if (!target_is_cyclic()) {
            throw DomainError("BilinearPairing: target is not cyclic");
        }
        return target_.rank() == 0 ? 1 : target_.factors()[0];
    }

    /// Matrix V with lambda(e_i, f_j) = V[i][j] mod r (cyclic target only).
    std::vector<std::vector<int64_t>> cyclic_matrix() const {
        modulus();
        std::vector<std::vector<int64_t>> V(left_.rank(), std::vector<int64_t>(right_.rank(), 0));
        for (size_t i = 0; i < left_.rank(); i++) {
            for (size_t j = 0; j < right_.rank(); j++) {
                V[i][j] = target_.rank() == 0 ? 0 : values_[i][j].coords[0];
            }
        }
        return V;
    }

    GroupElement eval(const GroupElement &a, const GroupElement &b) const {
        left_.require(a);
        right_.require(b);
        std::vector<int64_t> acc(target_.rank(), 0);
        for (size_t i = 0; i < left_.rank(); i++) {
            if (a.coords[i] == 0) {
                continue;
            }
            for (size_t j = 0; j < right_.rank(); j++) {
                if (b.coords[j] == 0) {
                    continue;
                }
                for (size_t k = 0; k < target_.rank(); k++) {
                    int64_t t = target_.factors()[k];
                    acc[k] = mod(acc[k] + mulmod(mulmod(a.coords[i], b.coords[j], t), values_[i][j].coords[k], t), t);
                }
            }
        }
        return GroupElement{acc};
    }

    /// Fast evaluation into Z/r on raw coordinates (cyclic target only, no validation).
    int64_t eval_cyclic(const std::vector<int64_t> &a, const std::vector<int64_t> &b) const {
        if (target_.rank() == 0) {
            return 0;
        }
        int64_t r = target_.factors()[0];
        int64_t acc = 0;
        for (size_t i = 0; i < left_.rank(); i++) {
            if (a[i] == 0) {
                continue;
            }
            for (size_t j = 0; j < right_.rank(); j++) {
                acc = mod(acc + mulmod(mulmod(a[i], b[j], r), values_[i][j].coords[0], r), r);
            }
        }
        return acc;
    }

    bool is_symmetric() const {
        if (!(left_ == right_)) {
            return false;
        }
        for (size_t i = 0; i < left_.rank(); i++) {
            for (size_t j = 0; j < i; j++) {
                if (!(values_[i][j] == values_[j][i])) {
                    return false;
                }
            }
        }
        return true;
    }

    bool operator==(const BilinearPairing &o) const = default;

  private:
    FinAbGroup left_;
    FinAbGroup right_;
    FinAbGroup target_;
    std::vector<std::vector<GroupElement>> values_;
};

inline GroupElement pairing_eval(const BilinearPairing &lambda, const GroupElement &a, const GroupElement &b) {
    return lambda.eval(a, b);
}

/// Every homomorphism A -> C for cyclic C, each exactly once.
inline std::vector<GroupHom> hom_enumerate(const FinAbGroup &A, const FinAbGroup &C) {
    if (!(C.is_canonical() && C.rank() <= 1)) {
        throw DomainError("hom_enumerate: target " + C.str() + " is not cyclic");
    }
    int64_t r = C.rank() == 0 ? 1 : C.factors()[0];
    size_t n = A.rank();
    std::vector<int64_t> g(n), step(n);
    size_t count = 1;
    for (size_t i = 0; i < n; i++) {
        g[i] = std::gcd(A.factors()[i], r);
        step[i] = r / g[i];
        count *= static_cast<size_t>(g[i]);
    }
    std::vector<GroupHom> out;
    out.reserve(count);
    std::vector<int64_t> k(n, 0);
    for (size_t idx = 0; idx < count; idx++) {
        std::vector<std::vector<int64_t>> m;
        if (C.rank() == 1) {
            m.push_back(std::vector<int64_t>(n));
            for (size_t i = 0; i < n; i++) {
                m[0][i] = k[i] * step[i];
            }
        }
        out.emplace_back(A, C, m);
        for (size_t i = n; i-- > 0;) {
            if (++k[i] < g[i]) {
                break;
            }
            k[i] = 0;
        }
    }
    return out;
}

}  // namespace ghg

#endif
