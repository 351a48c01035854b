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

#ifndef GHG_BOUQUET_HPP
#define GHG_BOUQUET_HPP

#include <map>
#include <optional>
#include <vector>

#include <boost/rational.hpp>

#include "ghg/autgrp.hpp"

namespace ghg {

/// A complex line, stored as a unit generator whose first entry of largest modulus is positive real.
struct Line {
    StateVector v;
};

inline Line make_line(const StateVector &v) {
    double n = v.norm();
    if (!(n > 0)) {
        throw DomainError("make_line: zero vector");
    }
    CVector w = v.values / n;
    double best = 0;
    for (Eigen::Index i = 0; i < w.size(); i++) {
        best = std::max(best, std::abs(w(i)));
    }
    for (Eigen::Index i = 0; i < w.size(); i++) {
        if (std::abs(w(i)) >= best - 1e-12) {
            w *= std::abs(w(i)) / w(i);
            break;
        }
    }
    return Line{StateVector(v.domain, w)};
}

inline bool same_line(const Line &x, const Line &y, double tol = 1e-9) {
    return std::abs(pdhf(x.v, y.v)) > 1.0 - tol;
}

/// The orbit of a line under A + B acting through sigma_p.
struct Bouquet {
    Line base;
    /// Indices (in the enumeration of A + B) of the stabilizer.
    std::vector<size_t> stabilizer;
    /// One key per coset of the stabilizer, with the line gamma . base.
    std::vector<size_t> keys;
    std::vector<Line> lines;

    bool is_free() const { return stabilizer.size() == 1; }
};

enum class Section { Displacement, ZeroLift };

/// h(a, b, 0) or D(a, b) for gamma = (a, b).
inline HeisElem section_lift(const GhgDescriptor &d, const GroupElement &gamma, Section section) {
    if (section == Section::Displacement) {
        return dmap(d, gamma);
    }
    auto [a, b] = split_abar(d, gamma);
    return HeisElem{a, b, d.C().zero()};
}

inline Section default_section(const GhgDescriptor &d) {
    return d.r() % 2 == 1 ? Section::Displacement : Section::ZeroLift;
}

inline Bouquet orbit_and_stabilizer(const SchrodingerRep &rep, const Line &line) {
    const GhgDescriptor &d = rep.desc();
    FinAbGroup G = d.abar();
    size_t n = G.order();
    Bouquet out;
    out.base = line;
    std::vector<Line> images;
    images.reserve(n);
    for (size_t i = 0; i < n; i++) {
        HeisElem h = section_lift(d, G.at(i), Section::ZeroLift);
        images.push_back(Line{rep.sigma_apply(h, line.v)});
        if (same_line(images.back(), line)) {
            out.stabilizer.push_back(i);
        }
    }
    std::vector<char> covered(n, 0);
    for (size_t i = 0; i < n; i++) {
        if (covered[i]) {
            continue;
        }
        out.keys.push_back(i);
        out.lines.push_back(make_line(images[i].v));
        GroupElement g = G.at(i);
        for (size_t s : out.stabilizer) {
            covered[G.index_of(G.add(g, G.at(s)))] = 1;
        }
    }
    if (out.lines.size() * out.stabilizer.size() != n) {
        throw InternalError("orbit_and_stabilizer: orbit size times stabilizer order differs from |A + B|");
    }
    return out;
}

/// gamma -> <v, R(gamma) v> for a section R, with the angles |.| and the ambiguity order f = |C|.
struct OverlapTable {
    std::vector<cdouble> values;
    std::vector<double> angles;
    int64_t ambiguity_order = 1;
    Section section = Section::ZeroLift;
};

inline OverlapTable overlap_table(const SchrodingerRep &rep, const Line &line, Section section) {
    const GhgDescriptor &d = rep.desc();
    FinAbGroup G = d.abar();
    OverlapTable t;
    t.section = section;
    t.ambiguity_order = d.r();
    for (size_t i = 0; i < G.order(); i++) {
        StateVector w = rep.sigma_apply(section_lift(d, G.at(i), section), line.v);
        cdouble o = pdhf(line.v, w);
        t.values.push_back(o);
        t.angles.push_back(std::abs(o));
    }
    return t;
}

/// Coefficients l_a with Pi = sum_a l_a D(a); s l_{-a} = <v, D(a) v>.
inline std::vector<cdouble> projector_decompose(const SchrodingerRep &rep, const Line &line) {
    const GhgDescriptor &d = rep.desc();
    FinAbGroup G = d.abar();
    OverlapTable t = overlap_table(rep, line, Section::Displacement);
    std::vector<cdouble> l(G.order());
    double s = static_cast<double>(d.s());
    for (size_t i = 0; i < G.order(); i++) {
        l[G.index_of(G.neg(G.at(i)))] = t.values[i] / s;
    }
    return l;
}

inline CMatrix projector_from_coefficients(const SchrodingerRep &rep, const std::vector<cdouble> &l) {
    FinAbGroup G = rep.desc().abar();
    Eigen::Index n = static_cast<Eigen::Index>(rep.dim());
    CMatrix P = CMatrix::Zero(n, n);
    for (size_t i = 0; i < G.order(); i++) {
        P += l[i] * displacement_matrix(rep, G.at(i));
    }
    return P;
}

/// The operator (Upsilon f)(g') = sum_g psi(delta(g, g')) f(g) on functions on A + B.
class Upsilon {
  public:
    explicit Upsilon(const SchrodingerRep &rep) : rep_(&rep) {
        require_ndc(rep.desc(), "Upsilon");
        na_ = rep.dim();
        nb_ = rep.dim_right();
        n_ = na_ * nb_;
        if (rep.dim() <= 16) {
            M_ = CMatrix(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
            for (size_t gp = 0; gp < n_; gp++) {
                for (size_t g = 0; g < n_; g++) {
                    (*M_)(static_cast<Eigen::Index>(gp), static_cast<Eigen::Index>(g)) = kernel(g, gp);
                }
            }
        }
    }

    size_t size() const { return n_; }
    bool materialized() const { return M_.has_value(); }

    /// psi(delta(g, g')) on enumeration indices.
    cdouble kernel(size_t g, size_t gp) const {
        size_t a = g / nb_, b = g % nb_;
        size_t a2 = gp / nb_, b2 = gp % nb_;
        return rep_->p(rep_->lam(a, b2) - rep_->lam(a2, b));
    }

    CMatrix matrix() const {
        if (M_) {
            return *M_;
        }
        CMatrix M(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
        for (size_t gp = 0; gp < n_; gp++) {
            for (size_t g = 0; g < n_; g++) {
                M(static_cast<Eigen::Index>(gp), static_cast<Eigen::Index>(g)) = kernel(g, gp);
            }
        }
        return M;
    }

    CVector apply(const CVector &f) const {
        if (static_cast<size_t>(f.size()) != n_) {
            throw DomainError("Upsilon::apply: function has the wrong length");
        }
        if (M_) {
            return *M_ * f;
        }
        CVector out = CVector::Zero(static_cast<Eigen::Index>(n_));
        for (size_t gp = 0; gp < n_; gp++) {
            cdouble acc = 0;
            for (size_t g = 0; g < n_; g++) {
                acc += kernel(g, gp) * f(static_cast<Eigen::Index>(g));
            }
            out(static_cast<Eigen::Index>(gp)) = acc;
        }
        return out;
    }

  private:
    const SchrodingerRep *rep_;
    size_t na_ = 0;
    size_t nb_ = 0;
    size_t n_ = 0;
    std::optional<CMatrix> M_;
};

inline CVector upsilon_apply(const SchrodingerRep &rep, const CVector &f) { return Upsilon(rep).apply(f); }

struct ClinometricReport {
    double residual = 0;
    double sum = 0;
    double expected = 0;
};

/// ||Upsilon(a^2) - (|G|/s) a^2||_inf and sum_g a(g)^2 against |G|/s.
inline ClinometricReport clinometric_check(const SchrodingerRep &rep, const Line &line) {
    OverlapTable t = overlap_table(rep, line, Section::ZeroLift);
    CVector a2(static_cast<Eigen::Index>(t.angles.size()));
    double sum = 0;
    for (size_t i = 0; i < t.angles.size(); i++) {
        a2(static_cast<Eigen::Index>(i)) = t.angles[i] * t.angles[i];
        sum += t.angles[i] * t.angles[i];
    }
    double expected = static_cast<double>(rep.desc().abar().order()) / static_cast<double>(rep.desc().s());
    CVector res = upsilon_apply(rep, a2) - expected * a2;
    return ClinometricReport{res.cwiseAbs().maxCoeff(), sum, expected};
}

inline ClinometricReport clinometric_check(const SchrodingerRep &rep, const Bouquet &y) {
    return clinometric_check(rep, y.base);
}

/// A partition of the non-identity elements of A + B into orbits (lists of enumeration indices).
using OrbitPartition = std::vector<std::vector<size_t>>;

/// Orbits by additive order.
inline OrbitPartition partition_by_order(const GhgDescriptor &d) {
    FinAbGroup G = d.abar();
    std::map<int64_t, std::vector<size_t>> by;
    for (size_t i = 1; i < G.order(); i++) {
        by[G.element_order(G.at(i))].push_back(i);
    }
    OrbitPartition out;
    for (auto &[o, v] : by) {
        out.push_back(v);
    }
    return out;
}

/// Orbits of a group of symplectic maps acting on A + B.
inline OrbitPartition partition_by_sp(const GhgDescriptor &d, const std::vector<SpElement> &group) {
    FinAbGroup G = d.abar();
    size_t n = G.order();
    std::vector<int> label(n, -1);
    OrbitPartition out;
    for (size_t i = 1; i < n; i++) {
        if (label[i] >= 0) {
            continue;
        }
        std::vector<size_t> orbit{i};
        label[i] = static_cast<int>(out.size());
        for (size_t k = 0; k < orbit.size(); k++) {
            GroupElement x = G.at(orbit[k]);
            for (const auto &g : group) {
                size_t j = G.index_of(g.apply(x));
                if (label[j] < 0) {
                    label[j] = static_cast<int>(out.size());
                    orbit.push_back(j);
                }
            }
        }
        std::sort(orbit.begin(), orbit.end());
        out.push_back(orbit);
    }
    return out;
}

inline void validate_partition(const GhgDescriptor &d, const OrbitPartition &part) {
    size_t n = d.abar().order();
    std::vector<int> seen(n, 0);
    for (const auto &orb : part) {
        for (size_t i : orb) {
            if (i == 0 || i >= n || seen[i]++) {
                throw DomainError("orbit partition must cover the non-identity elements exactly once");
            }
        }
    }
    for (size_t i = 1; i < n; i++) {
        if (!seen[i]) {
            throw DomainError("orbit partition must cover the non-identity elements exactly once");
        }
    }
}

struct Classification {
    bool equiangular = false;
    /// Mean angle off the identity.
    double value = 0;
    double equiangular_spread = 0;
    /// |value - 1/sqrt(s + 1)| when equiangular.
    double value_deviation = 0;
    bool regular = false;
    std::vector<double> orbit_means;
    std::vector<double> orbit_spreads;
    /// Two elements realizing the largest angle difference off the identity.
    size_t witness_a = 0;
    size_t witness_b = 0;
};

inline Classification classify(const SchrodingerRep &rep, const Bouquet &y, const OrbitPartition &part,
                               double tol = 1e-7) {
    const GhgDescriptor &d = rep.desc();
    if (!y.is_free()) {
        throw DomainError("classify: bouquet is not free");
    }
    if (d.abar().order() != d.s() * d.s()) {
        throw DomainError("classify: requires |A + B| = s^2");
    }
    validate_partition(d, part);
    OverlapTable t = overlap_table(rep, y.base, Section::ZeroLift);
    Classification c;
    size_t lo = 1, hi = 1;
    double sum = 0;
    for (size_t i = 1; i < t.angles.size(); i++) {
        if (t.angles[i] < t.angles[lo]) {
            lo = i;
        }
        if (t.angles[i] > t.angles[hi]) {
            hi = i;
        }
        sum += t.angles[i];
    }
    c.value = sum / static_cast<double>(t.angles.size() - 1);
    c.equiangular_spread = t.angles[hi] - t.angles[lo];
    c.witness_a = lo;
    c.witness_b = hi;
    c.equiangular = c.equiangular_spread < tol;
    c.value_deviation = std::abs(c.value - 1.0 / std::sqrt(static_cast<double>(d.s()) + 1.0));
    if (c.equiangular && c.value_deviation > 10 * tol) {
        throw InternalError("classify: equiangular value differs from 1/sqrt(s + 1)");
    }
    c.regular = true;
    for (const auto &orb : part) {
        double mn = 2, mx = -1, acc = 0;
        for (size_t i : orb) {
            mn = std::min(mn, t.angles[i]);
            mx = std::max(mx, t.angles[i]);
            acc += t.angles[i];
        }
        c.orbit_means.push_back(acc / static_cast<double>(orb.size()));
        c.orbit_spreads.push_back(mx - mn);
        if (mx - mn >= tol) {
            c.regular = false;
        }
    }
    return c;
}

struct SymmetryReport {
    /// Indices into the candidate list of the maps whose Weil operator preserves the bouquet.
    std::vector<size_t> members;
    /// Largest |a(alpha g) - a(g)| over members and g.
    double invariance_residual = 0;
};

inline SymmetryReport symmetry_group(const SchrodingerRep &rep, const Bouquet &y,
                                     const std::vector<SpElement> &candidates, uint64_t seed = 1) {
    const GhgDescriptor &d = rep.desc();
    FinAbGroup G = d.abar();
    OverlapTable t = overlap_table(rep, y.base, Section::ZeroLift);
    SymmetryReport rep_out;
    for (size_t k = 0; k < candidates.size(); k++) {
        Automorphism phi = auto_from_pair(d, zero_eta(d), candidates[k], false);
        CMatrix T = weil_solve(rep, phi, seed);
        Line img{StateVector(d.A(), T * y.base.v.values)};
        bool inside = false;
        for (const auto &l : y.lines) {
            if (same_line(l, img)) {
                inside = true;
                break;
            }
        }
        if (inside) {
            rep_out.members.push_back(k);
            for (size_t i = 0; i < G.order(); i++) {
                size_t j = G.index_of(candidates[k].apply(G.at(i)));
                rep_out.invariance_residual =
                    std::max(rep_out.invariance_residual, std::abs(t.angles[j] - t.angles[i]));
            }
        }
    }
    return rep_out;
}

using Rational = boost::rational<int64_t>;

/// Orbits O_j, indicators w_j and eigenfunctions u_j on (Z/d)^2 for odd d.
struct BaseCaseEigenbasis {
    int64_t d = 0;
    std::vector<int64_t> divisors;
    std::map<int64_t, std::vector<size_t>> orbits;
    std::map<int64_t, std::vector<Rational>> w;
    std::map<int64_t, std::vector<Rational>> u;
};

inline BaseCaseEigenbasis base_case_eigenbasis(int64_t d) {
    if (d < 3 || d % 2 == 0) {
        throw DomainError("base_case_eigenbasis: d must be odd and at least 3");
    }
    BaseCaseEigenbasis e;
    e.d = d;
    for (int64_t j = 1; j <= d; j++) {
        if (d % j == 0) {
            e.divisors.push_back(j);
        }
    }
    FinAbGroup G = FinAbGroup::product_of_cyclic({d, d});
    size_t n = G.order();
    for (int64_t j : e.divisors) {
        e.orbits[j] = {};
        e.w[j] = std::vector<Rational>(n, Rational(0));
    }
    for (size_t i = 0; i < n; i++) {
        GroupElement x = G.at(i);
        e.orbits[G.element_order(x)].push_back(i);
        for (int64_t j : e.divisors) {
            if (x.coords[0] % j == 0 && x.coords[1] % j == 0) {
                e.w[j][i] = Rational(1);
            }
        }
    }
    for (int64_t j : e.divisors) {
        if (j * j > d) {
            continue;
        }
        std::vector<Rational> v(n);
        Rational c1(j * j, j * j + d), c2(d, j * j + d);
        for (size_t i = 0; i < n; i++) {
            v[i] = c1 * e.w[j][i] + c2 * e.w[d / j][i];
        }
        e.u[j] = v;
    }
    return e;
}

namespace detail {

inline std::vector<int64_t> poly_divexact(std::vector<int64_t> num, const std::vector<int64_t> &den) {
    size_t dn = den.size() - 1;
    std::vector<int64_t> q(num.size() - dn, 0);
    for (size_t k = num.size(); k-- > dn;) {
        int64_t c = num[k] / den[dn];
        q[k - dn] = c;
        for (size_t i = 0; i <= dn; i++) {
            num[k - dn + i] -= c * den[i];
        }
    }
    return q;
}

}  // namespace detail

/// Coefficients (constant term first) of the n-th cyclotomic polynomial.
inline std::vector<int64_t> cyclotomic_polynomial(int64_t n) {
    std::vector<int64_t> p(static_cast<size_t>(n) + 1, 0);
    p[0] = -1;
    p[static_cast<size_t>(n)] = 1;
    for (int64_t k = 1; k < n; k++) {
        if (n % k == 0) {
            p = detail::poly_divexact(p, cyclotomic_polynomial(k));
        }
    }
    return p;
}

/// An element of Q(zeta_d), as a reduced polynomial in zeta_d.
using CyclotomicValue = std::vector<Rational>;

inline CyclotomicValue cyclotomic_reduce(std::vector<Rational> p, const std::vector<int64_t> &phi) {
    size_t dn = phi.size() - 1;
    for (size_t k = p.size(); k-- > dn;) {
        Rational c = p[k];
        if (c == Rational(0)) {
            continue;
        }
        for (size_t i = 0; i <= dn; i++) {
            p[k - dn + i] -= c * Rational(phi[i]);
        }
    }
    p.resize(dn, Rational(0));
    return p;
}

/// Base Case Upsilon with psi(c) = zeta_d^c, evaluated exactly in Q(zeta_d).
inline std::vector<CyclotomicValue> exact_base_case_upsilon(int64_t d, const std::vector<Rational> &f) {
    FinAbGroup G = FinAbGroup::product_of_cyclic({d, d});
    size_t n = G.order();
    if (f.size() != n) {
        throw DomainError("exact_base_case_upsilon: function has the wrong length");
    }
    std::vector<int64_t> phi = cyclotomic_polynomial(d);
    std::vector<CyclotomicValue> out;
    for (size_t gp = 0; gp < n; gp++) {
        std::vector<Rational> acc(static_cast<size_t>(d), Rational(0));
        GroupElement y = G.at(gp);
        for (size_t g = 0; g < n; g++) {
            if (f[g] == Rational(0)) {
                continue;
            }
            GroupElement x = G.at(g);
            int64_t k = mod(x.coords[0] * y.coords[1] - y.coords[0] * x.coords[1], d);
            acc[static_cast<size_t>(k)] += f[g];
        }
        out.push_back(cyclotomic_reduce(acc, phi));
    }
    return out;
}

/// True iff every entry of `lhs` equals the rational scalar * rhs exactly.
inline bool cyclotomic_equals_scaled(const std::vector<CyclotomicValue> &lhs, const std::vector<Rational> &rhs,
                                     Rational scalar) {
    if (lhs.size() != rhs.size()) {
        return false;
    }
    for (size_t i = 0; i < lhs.size(); i++) {
        for (size_t k = 0; k < lhs[i].size(); k++) {
            Rational expect = k == 0 ? scalar * rhs[i] : Rational(0);
            if (lhs[i][k] != expect) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace ghg

#endif
