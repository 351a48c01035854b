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

#ifndef GHG_AUTGRP_HPP
#define GHG_AUTGRP_HPP

#include <map>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/SVD>

#include "ghg/schrodinger.hpp"

namespace ghg {

/// Splits an element of A + B into its A and B parts.
inline std::pair<GroupElement, GroupElement> split_abar(const GhgDescriptor &d, const GroupElement &x) {
    d.abar().require(x);
    size_t na = d.A().rank();
    GroupElement a{std::vector<int64_t>(x.coords.begin(), x.coords.begin() + static_cast<long>(na))};
    GroupElement b{std::vector<int64_t>(x.coords.begin() + static_cast<long>(na), x.coords.end())};
    return {a, b};
}

inline GroupElement join_abar(const GroupElement &a, const GroupElement &b) {
    GroupElement x = a;
    x.coords.insert(x.coords.end(), b.coords.begin(), b.coords.end());
    return x;
}

/// The image of h in A + B.
inline GroupElement project_abar(const HeisElem &h) { return join_abar(h.a, h.b); }

/// delta((a, b), (a', b')) = lambda(a, b') - lambda(a', b).
inline GroupElement delta(const GhgDescriptor &d, const GroupElement &x, const GroupElement &y) {
    auto [a, b] = split_abar(d, x);
    auto [a2, b2] = split_abar(d, y);
    return d.C().sub(d.lambda().eval(a, b2), d.lambda().eval(a2, b));
}

/// (r + 1) / 2, the inverse of 2 modulo odd r.
inline int64_t half_mod(const GhgDescriptor &d, const char *who) {
    int64_t r = d.r();
    if (!d.lambda().target_is_cyclic()) {
        throw DomainError(std::string(who) + ": C must be cyclic");
    }
    if (r % 2 == 0) {
        throw DomainError(std::string(who) + ": requires |C| odd");
    }
    return (r + 1) / 2 % r;
}

/// D(a, b) = h(a, b, lambda(a, b) / 2).
inline HeisElem dmap(const GhgDescriptor &d, const GroupElement &x) {
    int64_t half = half_mod(d, "dmap");
    auto [a, b] = split_abar(d, x);
    return HeisElem{a, b, d.C().scale(d.lambda().eval(a, b), half)};
}

inline CMatrix displacement_matrix(const SchrodingerRep &rep, const GroupElement &x) {
    return rep.rep_matrix(dmap(rep.desc(), x));
}

inline CMatrix displacement_matrix(const RepConfig &cfg, const GroupElement &x) {
    if (!cfg.p_injective()) {
        throw DomainError("displacement_matrix: p must be injective");
    }
    return displacement_matrix(SchrodingerRep(cfg), x);
}

/// An endomorphism of A + B, in coordinates on the product of the cyclic factors of A then B.
struct SpElement {
    GroupHom map;

    const std::vector<std::vector<int64_t>> &matrix() const { return map.matrix(); }
    GroupElement apply(const GroupElement &x) const { return map.apply(x); }
    bool operator==(const SpElement &o) const = default;
    bool operator<(const SpElement &o) const { return map.matrix() < o.map.matrix(); }
};

inline SpElement sp_identity(const GhgDescriptor &d) { return SpElement{GroupHom::identity(d.abar())}; }

inline SpElement sp_from_matrix(const GhgDescriptor &d, const std::vector<std::vector<int64_t>> &m) {
    return SpElement{GroupHom(d.abar(), d.abar(), m)};
}

/// x -> a(b(x)).
inline SpElement sp_compose(const SpElement &a, const SpElement &b) { return SpElement{b.map.then(a.map)}; }

inline SpElement sp_inverse(const SpElement &g) {
    const FinAbGroup &G = g.map.source();
    size_t n = G.order();
    std::vector<size_t> preimage(n, n);
    for (size_t i = 0; i < n; i++) {
        size_t j = G.index_of(g.apply(G.at(i)));
        if (preimage[j] != n) {
            throw DomainError("sp_inverse: map is not invertible");
        }
        preimage[j] = i;
    }
    std::vector<GroupElement> imgs;
    for (size_t k = 0; k < G.rank(); k++) {
        imgs.push_back(G.at(preimage[G.index_of(G.generator(k))]));
    }
    return SpElement{GroupHom::from_images(G, G, imgs)};
}

/// The ring action on A + B, one endomorphism per ring generator.
inline std::vector<GroupHom> ring_on_abar(const GhgDescriptor &d) {
    std::vector<GroupHom> out;
    if (!d.ring()) {
        return out;
    }
    FinAbGroup G = d.abar();
    for (size_t k = 0; k < d.ring()->num_generators(); k++) {
        std::vector<GroupElement> imgs;
        for (size_t j = 0; j < G.rank(); j++) {
            auto [a, b] = split_abar(d, G.generator(j));
            imgs.push_back(join_abar(d.ring()->on_A[k].apply(a), d.ring()->on_B[k].apply(b)));
        }
        out.push_back(GroupHom::from_images(G, G, imgs));
    }
    return out;
}

inline bool is_ring_linear(const GhgDescriptor &d, const GroupHom &m) {
    for (const auto &rg : ring_on_abar(d)) {
        if (!(m.then(rg) == rg.then(m))) {
            return false;
        }
    }
    return true;
}

/// True iff the endomorphism preserves delta on all generator pairs, is R-linear and is invertible.
inline bool is_symplectic(const GhgDescriptor &d, const GroupHom &m) {
    FinAbGroup G = d.abar();
    if (!(m.source() == G) || !(m.target() == G)) {
        return false;
    }
    std::vector<GroupElement> imgs;
    for (size_t i = 0; i < G.rank(); i++) {
        imgs.push_back(m.apply(G.generator(i)));
    }
    for (size_t i = 0; i < G.rank(); i++) {
        for (size_t j = i + 1; j < G.rank(); j++) {
            if (!(delta(d, imgs[i], imgs[j]) == delta(d, G.generator(i), G.generator(j)))) {
                return false;
            }
        }
    }
    return is_ring_linear(d, m) && m.is_bijective();
}

inline bool is_symplectic(const GhgDescriptor &d, const SpElement &m) { return is_symplectic(d, m.map); }

/// Enumerates Sp_R(A + B; delta) by assigning generator images one at a time, pruning on delta.
inline std::vector<SpElement> enumerate_sp(const GhgDescriptor &d) {
    FinAbGroup G = d.abar();
    size_t n = G.rank();
    std::vector<std::vector<GroupElement>> candidates(n);
    std::vector<GroupElement> all = G.elements();
    for (size_t k = 0; k < n; k++) {
        int64_t ord = G.factors()[k];
        for (const auto &x : all) {
            if (G.scale(x, ord).is_zero()) {
                candidates[k].push_back(x);
            }
        }
    }
    std::vector<std::vector<GroupElement>> target(n, std::vector<GroupElement>(n));
    for (size_t i = 0; i < n; i++) {
        for (size_t j = 0; j < n; j++) {
            target[i][j] = delta(d, G.generator(i), G.generator(j));
        }
    }
    std::vector<SpElement> out;
    std::vector<GroupElement> chosen;
    std::function<void(size_t)> rec = [&](size_t k) {
        if (k == n) {
            GroupHom m = GroupHom::from_images(G, G, chosen);
            if (is_ring_linear(d, m) && m.is_bijective()) {
                out.push_back(SpElement{m});
            }
            return;
        }
        for (const auto &x : candidates[k]) {
            bool ok = true;
            for (size_t i = 0; i < k && ok; i++) {
                ok = delta(d, chosen[i], x) == target[i][k];
            }
            if (!ok) {
                continue;
            }
            chosen.push_back(x);
            rec(k + 1);
            chosen.pop_back();
        }
    };
    rec(0);
    return out;
}

/// SL_2(Z/d), as 2x2 integer matrices with entries in [0, d).
inline std::vector<std::vector<std::vector<int64_t>>> enumerate_sl2(int64_t d) {
    std::vector<std::vector<std::vector<int64_t>>> out;
    for (int64_t a = 0; a < d; a++) {
        for (int64_t b = 0; b < d; b++) {
            for (int64_t c = 0; c < d; c++) {
                for (int64_t e = 0; e < d; e++) {
                    if (mod(a * e - b * c, d) == 1 % d) {
                        out.push_back({{a, b}, {c, e}});
                    }
                }
            }
        }
    }
    return out;
}

/// An automorphism of H fixing the centre, stored through the pair (eta, alpha).
struct Automorphism {
    GhgDescriptor desc;
    GroupHom eta;
    SpElement sp;

    /// nu(D(x) m(c)) = D(alpha x) m(eta(x) + c).
    HeisElem apply(const HeisElem &h) const {
        desc.require(h);
        int64_t half = half_mod(desc, "Automorphism::apply");
        GroupElement x = project_abar(h);
        GroupElement cprime = desc.C().sub(h.c, desc.C().scale(desc.lambda().eval(h.a, h.b), half));
        GroupElement y = sp.apply(x);
        HeisElem out = dmap(desc, y);
        out.c = desc.C().add(out.c, desc.C().add(eta.apply(x), cprime));
        return out;
    }

    std::function<HeisElem(const HeisElem &)> as_function() const {
        return [self = *this](const HeisElem &h) { return self.apply(h); };
    }
};

inline GroupHom zero_eta(const GhgDescriptor &d) { return GroupHom::zero(d.abar(), d.C()); }

inline Automorphism auto_from_pair(const GhgDescriptor &d, const GroupHom &eta, const SpElement &alpha,
                                   bool verify = true) {
    half_mod(d, "auto_from_pair");
    if (!(eta.source() == d.abar()) || !(eta.target() == d.C())) {
        throw DomainError("auto_from_pair: eta must be a homomorphism A + B -> C");
    }
    if (!is_symplectic(d, alpha)) {
        throw DomainError("auto_from_pair: alpha is not symplectic");
    }
    Automorphism nu{d, eta, alpha};
    if (verify) {
        std::mt19937_64 rng(0x5eed);
        for (int k = 0; k < 64; k++) {
            HeisElem x = d.random_element(rng);
            HeisElem y = d.random_element(rng);
            if (!(nu.apply(multiply(d, x, y)) == multiply(d, nu.apply(x), nu.apply(y)))) {
                throw InternalError("auto_from_pair: reconstruction is not a homomorphism");
            }
        }
    }
    return nu;
}

/// (phi1 o phi2): alpha = alpha1 alpha2, eta = eta2 + eta1 o alpha2.
inline Automorphism compose(const Automorphism &phi1, const Automorphism &phi2) {
    SpElement alpha = sp_compose(phi1.sp, phi2.sp);
    GroupHom eta = phi2.eta + phi2.sp.map.then(phi1.eta);
    return Automorphism{phi1.desc, eta, alpha};
}

/// Recovers (eta_phi, phi-bar) from an automorphism given elementwise, and checks the reconstruction.
inline Automorphism theta_decompose(const GhgDescriptor &d, const std::function<HeisElem(const HeisElem &)> &phi,
                                    uint64_t exhaustive_limit = 20000) {
    int64_t half = half_mod(d, "theta_decompose");
    for (size_t k = 0; k < d.C().rank(); k++) {
        HeisElem z = d.central(d.C().generator(k));
        if (!(phi(z) == z)) {
            throw DomainError("theta_decompose: map does not fix the centre");
        }
    }
    FinAbGroup G = d.abar();
    std::vector<GroupElement> bar_imgs, eta_imgs;
    for (size_t k = 0; k < G.rank(); k++) {
        HeisElem img = phi(dmap(d, G.generator(k)));
        GroupElement y = project_abar(img);
        bar_imgs.push_back(y);
        eta_imgs.push_back(d.C().sub(img.c, d.C().scale(d.lambda().eval(img.a, img.b), half)));
    }
    SpElement alpha{GroupHom::from_images(G, G, bar_imgs)};
    if (!is_symplectic(d, alpha)) {
        throw DomainError("theta_decompose: induced map on A + B is not symplectic");
    }
    GroupHom eta = GroupHom::from_images(G, d.C(), eta_imgs);
    Automorphism nu = auto_from_pair(d, eta, alpha, false);
    if (d.order() <= exhaustive_limit) {
        for (const auto &h : d.elements()) {
            if (!(nu.apply(h) == phi(h))) {
                throw InternalError("theta_decompose: reconstruction differs from the input map");
            }
        }
    } else {
        std::mt19937_64 rng(0xdec0);
        for (int k = 0; k < 2000; k++) {
            HeisElem h = d.random_element(rng);
            if (!(nu.apply(h) == phi(h))) {
                throw InternalError("theta_decompose: reconstruction differs from the input map");
            }
        }
    }
    return nu;
}

/// An element (eta, N) of Hom(A + B, C) x| Sp.
struct ThetaPair {
    GroupHom eta;
    SpElement n;

    bool operator==(const ThetaPair &o) const = default;
};

/// Theta_D(phi) = (eta_phi, phi-bar^{-1}).
inline ThetaPair theta_d(const Automorphism &phi) { return ThetaPair{phi.eta, sp_inverse(phi.sp)}; }

/// (eta1, N1)(eta2, N2) = (eta1 + eta2 o N1^{-1}, N1 N2).
inline ThetaPair semidirect_mul(const ThetaPair &x, const ThetaPair &y) {
    SpElement n1inv = sp_inverse(x.n);
    return ThetaPair{x.eta + n1inv.map.then(y.eta), sp_compose(x.n, y.n)};
}

/// Every automorphism fixing the centre, as pairs (eta, alpha).
inline std::vector<Automorphism> enumerate_aut0(const GhgDescriptor &d) {
    std::vector<Automorphism> out;
    std::vector<SpElement> sp = enumerate_sp(d);
    std::vector<GroupHom> etas = hom_enumerate(d.abar(), d.C());
    for (const auto &alpha : sp) {
        for (const auto &eta : etas) {
            out.push_back(Automorphism{d, eta, alpha});
        }
    }
    return out;
}

/// The inner automorphism g -> h g h^{-1}.
inline std::function<HeisElem(const HeisElem &)> inner_automorphism(const GhgDescriptor &d, const HeisElem &h) {
    HeisElem hinv = inverse(d, h);
    return [d, h, hinv](const HeisElem &g) { return multiply(d, multiply(d, h, g), hinv); };
}

/// Delta(alpha) = alpha x beta x id with lambda(alpha a, beta b) = lambda(a, b).
inline Automorphism delta_diagonal(const GhgDescriptor &d, const GroupHom &alpha) {
    require_ndc(d, "delta_diagonal");
    const FinAbGroup &A = d.A();
    const FinAbGroup &B = d.B();
    if (!(alpha.source() == A) || !(alpha.target() == A) || !alpha.is_bijective()) {
        throw DomainError("delta_diagonal: alpha must be an automorphism of A");
    }
    if (d.ring()) {
        for (const auto &ra : d.ring()->on_A) {
            if (!(alpha.then(ra) == ra.then(alpha))) {
                throw DomainError("delta_diagonal: alpha is not R-linear");
            }
        }
    }
    std::vector<size_t> pre(A.order());
    for (size_t i = 0; i < A.order(); i++) {
        pre[A.index_of(alpha.apply(A.at(i)))] = i;
    }
    std::map<std::vector<int64_t>, GroupElement> by_signature;
    for (const auto &b : B.elements()) {
        std::vector<int64_t> sig;
        for (size_t i = 0; i < A.rank(); i++) {
            GroupElement v = d.lambda().eval(A.generator(i), b);
            sig.insert(sig.end(), v.coords.begin(), v.coords.end());
        }
        by_signature.emplace(sig, b);
    }
    std::vector<GroupElement> beta_imgs;
    for (size_t j = 0; j < B.rank(); j++) {
        std::vector<int64_t> sig;
        for (size_t i = 0; i < A.rank(); i++) {
            GroupElement ainv = A.at(pre[A.index_of(A.generator(i))]);
            GroupElement v = d.lambda().eval(ainv, B.generator(j));
            sig.insert(sig.end(), v.coords.begin(), v.coords.end());
        }
        auto it = by_signature.find(sig);
        if (it == by_signature.end()) {
            throw InternalError("delta_diagonal: no solution for beta");
        }
        beta_imgs.push_back(it->second);
    }
    GroupHom beta = GroupHom::from_images(B, B, beta_imgs);
    FinAbGroup G = d.abar();
    std::vector<GroupElement> imgs;
    for (size_t k = 0; k < G.rank(); k++) {
        auto [a, b] = split_abar(d, G.generator(k));
        imgs.push_back(join_abar(alpha.apply(a), beta.apply(b)));
    }
    return auto_from_pair(d, zero_eta(d), SpElement{GroupHom::from_images(G, G, imgs)});
}

/// Numerical Weil intertwiner: T sigma(h) = sigma(phi(h)) T, unitary, phase-normalized.
inline CMatrix weil_solve(const SchrodingerRep &rep, const std::function<HeisElem(const HeisElem &)> &phi,
                          uint64_t seed = 1, double tol = 1e-8) {
    const GhgDescriptor &d = rep.desc();
    Eigen::Index n = static_cast<Eigen::Index>(rep.dim());
    FinAbGroup G = d.abar();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    std::vector<CMatrix> src, dst;
    for (size_t i = 0; i < G.order(); i++) {
        GroupElement x = G.at(i);
        auto [a, b] = split_abar(d, x);
        HeisElem g{a, b, d.C().zero()};
        src.push_back(rep.rep_matrix(g).adjoint());
        dst.push_back(rep.rep_matrix(phi(g)));
    }
    for (int attempt = 0; attempt < 8; attempt++) {
        CMatrix X(n, n);
        for (Eigen::Index i = 0; i < n; i++) {
            for (Eigen::Index j = 0; j < n; j++) {
                X(i, j) = cdouble(gauss(rng), gauss(rng));
            }
        }
        CMatrix T0 = CMatrix::Zero(n, n);
        for (size_t k = 0; k < src.size(); k++) {
            T0.noalias() += dst[k] * (X * src[k]);
        }
        if (T0.norm() < 1e-6) {
            continue;
        }
        Eigen::JacobiSVD<CMatrix> svd(T0, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const auto &sv = svd.singularValues();
        if (sv(n - 1) < 1e-6 * sv(0)) {
            throw NumericalError("weil_solve: intertwiner is rank-deficient (representation not irreducible?)");
        }
        CMatrix T = svd.matrixU() * svd.matrixV().adjoint();
        std::vector<HeisElem> gens;
        for (size_t i = 0; i < d.A().rank(); i++) {
            gens.push_back(HeisElem{d.A().generator(i), d.B().zero(), d.C().zero()});
        }
        for (size_t j = 0; j < d.B().rank(); j++) {
            gens.push_back(HeisElem{d.A().zero(), d.B().generator(j), d.C().zero()});
        }
        for (size_t k = 0; k < d.C().rank(); k++) {
            gens.push_back(d.central(d.C().generator(k)));
        }
        for (const auto &g : gens) {
            if (max_abs(T * rep.rep_matrix(g) - rep.rep_matrix(phi(g)) * T) > tol) {
                throw NumericalError("weil_solve: intertwining residual above tolerance");
            }
        }
        return normalize_phase(T);
    }
    throw NumericalError("weil_solve: averaging vanished for every draw");
}

inline CMatrix weil_solve(const SchrodingerRep &rep, const Automorphism &phi, uint64_t seed = 1) {
    return weil_solve(rep, phi.as_function(), seed);
}

/// An R-linear map f -> M f (linear) or f -> M conj(f) (antilinear).
struct RealLinearMap {
    CMatrix M;
    bool antilinear = false;

    CVector apply(const CVector &f) const { return antilinear ? CVector(M * f.conjugate()) : CVector(M * f); }
};

/// Matrix of L o sigma(h) in the same convention as L.
inline CMatrix after_matrix(const RealLinearMap &L, const CMatrix &S) {
    return L.antilinear ? CMatrix(L.M * S.conjugate()) : CMatrix(L.M * S);
}

/// Extension of the Weil representation to maps acting on the centre by c -> +c or c -> -c.
inline RealLinearMap conj_extension(const SchrodingerRep &rep, const std::function<HeisElem(const HeisElem &)> &ups,
                                    uint64_t seed = 1) {
    const GhgDescriptor &d = rep.desc();
    if (d.r() == 2) {
        throw DomainError("conj_extension: requires |C| != 2");
    }
    HeisElem z = d.central(d.C().generator(0));
    HeisElem img = ups(z);
    if (img == z) {
        return RealLinearMap{weil_solve(rep, ups, seed), false};
    }
    if (!(img == inverse(d, z))) {
        throw DomainError("conj_extension: map acts on the centre by a scalar other than +1 or -1");
    }
    auto phi_upper = [d](const HeisElem &h) { return HeisElem{h.a, d.B().neg(h.b), d.C().neg(h.c)}; };
    auto phi0 = [phi_upper, ups](const HeisElem &h) { return phi_upper(ups(h)); };
    CMatrix T0 = weil_solve(rep, phi0, seed);
    return RealLinearMap{normalize_phase(T0.conjugate()), true};
}

}  // namespace ghg

#endif
