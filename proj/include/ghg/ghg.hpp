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

#ifndef GHG_GHG_HPP
#define GHG_GHG_HPP

#include <functional>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ghg/abelian.hpp"

namespace ghg {

/// Action of a ring R on A and B, given by one endomorphism of each per ring generator.
struct RingAction {
    std::vector<GroupHom> on_A;
    std::vector<GroupHom> on_B;

    bool operator==(const RingAction &o) const = default;
    size_t num_generators() const { return on_A.size(); }
};

/// An element h(a, b, c) of H(A, B, C, lambda).
struct HeisElem {
    GroupElement a;
    GroupElement b;
    GroupElement c;

    bool operator==(const HeisElem &o) const = default;
    auto operator<=>(const HeisElem &o) const = default;
};

/// The tuple (A, B, C, lambda) with an optional ring action.
class GhgDescriptor {
  public:
    GhgDescriptor() = default;

    GhgDescriptor(BilinearPairing lambda, std::optional<RingAction> ring = std::nullopt)
        : lambda_(std::move(lambda)), ring_(std::move(ring)) {
        if (!lambda_.left().is_canonical() || !lambda_.right().is_canonical() || !lambda_.target().is_canonical()) {
            throw DomainError("GhgDescriptor: A, B and C must be given by invariant factors");
        }
        if (ring_) {
            if (ring_->on_A.size() != ring_->on_B.size()) {
                throw DomainError("GhgDescriptor: ring action needs matching generator lists on A and B");
            }
            for (size_t k = 0; k < ring_->on_A.size(); k++) {
                const GroupHom &ra = ring_->on_A[k];
                const GroupHom &rb = ring_->on_B[k];
                if (!(ra.source() == A()) || !(ra.target() == A()) || !(rb.source() == B()) || !(rb.target() == B())) {
                    throw DomainError("GhgDescriptor: ring generator must act by endomorphisms of A and B");
                }
                for (size_t i = 0; i < A().rank(); i++) {
                    for (size_t j = 0; j < B().rank(); j++) {
                        GroupElement ea = A().generator(i);
                        GroupElement fb = B().generator(j);
                        if (!(lambda_.eval(ra.apply(ea), fb) == lambda_.eval(ea, rb.apply(fb)))) {
                            throw DomainError("GhgDescriptor: pairing is not balanced for ring generator " +
                                              std::to_string(k));
                        }
                    }
                }
            }
        }
    }

    /// Descriptor with cyclic C = Z/r and lambda(e_i, f_j) = V[i][j].
    static GhgDescriptor cyclic(const FinAbGroup &A, const FinAbGroup &B, int64_t r,
                                const std::vector<std::vector<int64_t>> &V,
                                std::optional<RingAction> ring = std::nullopt) {
        return GhgDescriptor(BilinearPairing::cyclic(A, B, r, V), std::move(ring));
    }

    const FinAbGroup &A() const { return lambda_.left(); }
    const FinAbGroup &B() const { return lambda_.right(); }
    const FinAbGroup &C() const { return lambda_.target(); }
    const BilinearPairing &lambda() const { return lambda_; }
    const std::optional<RingAction> &ring() const { return ring_; }

    uint64_t s() const { return A().order(); }
    int64_t e() const { return A().exponent(); }
    /// Order of C.
    int64_t r() const { return static_cast<int64_t>(C().order()); }
    uint64_t order() const { return A().order() * B().order() * C().order(); }

    /// Coordinates on A + B (the quotient by the centre under ND-C).
    FinAbGroup abar() const { return direct_product(A(), B()); }

    bool operator==(const GhgDescriptor &o) const = default;

    bool contains(const HeisElem &h) const { return A().contains(h.a) && B().contains(h.b) && C().contains(h.c); }

    void require(const HeisElem &h) const {
        if (!contains(h)) {
            throw DomainError("element does not belong to H(" + A().str() + ", " + B().str() + ", " + C().str() + ")");
        }
    }

    HeisElem identity() const { return HeisElem{A().zero(), B().zero(), C().zero()}; }

    HeisElem make(const std::vector<int64_t> &a, const std::vector<int64_t> &b, const std::vector<int64_t> &c) const {
        return HeisElem{A().make(a), B().make(b), C().make(c)};
    }

    /// The central element m(c) = h(0, 0, c).
    HeisElem central(const GroupElement &c) const { return HeisElem{A().zero(), B().zero(), C().make(c.coords)}; }

    size_t index_of(const HeisElem &h) const {
        require(h);
        return (A().index_of(h.a) * B().order() + B().index_of(h.b)) * C().order() + C().index_of(h.c);
    }

    HeisElem at(size_t idx) const {
        size_t nc = C().order();
        size_t nb = B().order();
        GroupElement c = C().at(idx % nc);
        idx /= nc;
        GroupElement b = B().at(idx % nb);
        idx /= nb;
        return HeisElem{A().at(idx), b, c};
    }

    std::vector<HeisElem> elements() const {
        std::vector<HeisElem> out;
        size_t n = order();
        out.reserve(n);
        for (size_t i = 0; i < n; i++) {
            out.push_back(at(i));
        }
        return out;
    }

    HeisElem random_element(std::mt19937_64 &rng) const {
        std::uniform_int_distribution<uint64_t> dist(0, order() - 1);
        return at(dist(rng));
    }

  private:
    BilinearPairing lambda_;
    std::optional<RingAction> ring_;
};

inline HeisElem multiply(const GhgDescriptor &d, const HeisElem &x, const HeisElem &y) {
    d.require(x);
    d.require(y);
    return HeisElem{d.A().add(x.a, y.a), d.B().add(x.b, y.b),
                    d.C().add(d.C().add(x.c, y.c), d.lambda().eval(x.a, y.b))};
}

inline HeisElem inverse(const GhgDescriptor &d, const HeisElem &x) {
    d.require(x);
    return HeisElem{d.A().neg(x.a), d.B().neg(x.b), d.C().sub(d.lambda().eval(x.a, x.b), x.c)};
}

/// [h, h'] = h h' h^-1 h'^-1 = h(0, 0, lambda(a, b') - lambda(a', b)).
inline HeisElem commutator(const GhgDescriptor &d, const HeisElem &x, const HeisElem &y) {
    d.require(x);
    d.require(y);
    return d.central(d.C().sub(d.lambda().eval(x.a, y.b), d.lambda().eval(y.a, x.b)));
}

inline HeisElem power(const GhgDescriptor &d, const HeisElem &x, int64_t n) {
    HeisElem base = n < 0 ? inverse(d, x) : x;
    uint64_t k = n < 0 ? static_cast<uint64_t>(-n) : static_cast<uint64_t>(n);
    HeisElem acc = d.identity();
    while (k > 0) {
        if (k & 1) {
            acc = multiply(d, acc, base);
        }
        base = multiply(d, base, base);
        k >>= 1;
    }
    return acc;
}

/// Kernels of lambda on each side, its image, and the resulting centre and derived subgroup orders.
struct CentreData {
    Subgroup K_A;
    Subgroup K_B;
    Subgroup Lambda;
    uint64_t centre_order = 0;
    uint64_t derived_order = 0;
};

namespace detail {

/// a -> (lambda(a, f_j))_j as a homomorphism into a product of copies of C (side 0), or the mirror (side 1).
inline GroupHom pairing_adjoint(const BilinearPairing &lam, int side) {
    const FinAbGroup &src = side == 0 ? lam.left() : lam.right();
    const FinAbGroup &oth = side == 0 ? lam.right() : lam.left();
    const FinAbGroup &C = lam.target();
    std::vector<int64_t> tf;
    for (size_t j = 0; j < oth.rank(); j++) {
        tf.insert(tf.end(), C.factors().begin(), C.factors().end());
    }
    FinAbGroup tgt = FinAbGroup::product_of_cyclic(tf);
    std::vector<std::vector<int64_t>> m(tgt.rank(), std::vector<int64_t>(src.rank(), 0));
    for (size_t i = 0; i < src.rank(); i++) {
        for (size_t j = 0; j < oth.rank(); j++) {
            const GroupElement &v = side == 0 ? lam.values()[i][j] : lam.values()[j][i];
            for (size_t k = 0; k < C.rank(); k++) {
                m[j * C.rank() + k][i] = v.coords[k];
            }
        }
    }
    return GroupHom(src, tgt, m);
}

}  // namespace detail

inline CentreData centre_and_derived(const GhgDescriptor &d) {
    CentreData out;
    out.K_A = detail::pairing_adjoint(d.lambda(), 0).kernel();
    out.K_B = detail::pairing_adjoint(d.lambda(), 1).kernel();
    std::vector<GroupElement> vals;
    for (const auto &row : d.lambda().values()) {
        vals.insert(vals.end(), row.begin(), row.end());
    }
    out.Lambda = Subgroup::generated_by(d.C(), vals);
    out.centre_order = out.K_A.order() * out.K_B.order() * d.C().order();
    out.derived_order = out.Lambda.order();
    return out;
}

struct NdcReport {
    bool ndc = false;
    bool c_cyclic = false;
    bool nondegenerate = false;
    uint64_t K_A_order = 0;
    uint64_t K_B_order = 0;
    bool equal_orders = false;
    bool exponent_divides_r = false;
};

/// Checks the hypothesis "lambda non-degenerate and C cyclic".
inline NdcReport check_ndc(const GhgDescriptor &d) {
    NdcReport rep;
    CentreData cd = centre_and_derived(d);
    rep.c_cyclic = d.C().rank() <= 1;
    rep.K_A_order = cd.K_A.order();
    rep.K_B_order = cd.K_B.order();
    rep.nondegenerate = rep.K_A_order == 1 && rep.K_B_order == 1;
    rep.ndc = rep.c_cyclic && rep.nondegenerate;
    rep.equal_orders = d.A().order() == d.B().order();
    rep.exponent_divides_r = static_cast<int64_t>(d.C().order()) % d.A().exponent() == 0;
    return rep;
}

inline void require_ndc(const GhgDescriptor &d, const char *who) {
    if (!check_ndc(d).ndc) {
        throw DomainError(std::string(who) + ": descriptor does not satisfy ND-C");
    }
}

/// The map h(a, b, c) -> h(tA a, tB b, tC c) between two GHGs.
class GhgHom {
  public:
    GhgHom(GhgDescriptor src, GhgDescriptor dst, GroupHom tA, GroupHom tB, GroupHom tC)
        : src_(std::move(src)), dst_(std::move(dst)), tA_(std::move(tA)), tB_(std::move(tB)), tC_(std::move(tC)) {}

    const GhgDescriptor &source() const { return src_; }
    const GhgDescriptor &target() const { return dst_; }
    const GroupHom &tA() const { return tA_; }
    const GroupHom &tB() const { return tB_; }
    const GroupHom &tC() const { return tC_; }

    HeisElem apply(const HeisElem &h) const {
        src_.require(h);
        return HeisElem{tA_.apply(h.a), tB_.apply(h.b), tC_.apply(h.c)};
    }

  private:
    GhgDescriptor src_;
    GhgDescriptor dst_;
    GroupHom tA_;
    GroupHom tB_;
    GroupHom tC_;
};

inline GhgHom diagonal_hom(const GroupHom &tA, const GroupHom &tB, const GroupHom &tC, const GhgDescriptor &src,
                           const GhgDescriptor &dst) {
    if (!(tA.source() == src.A()) || !(tA.target() == dst.A()) || !(tB.source() == src.B()) ||
        !(tB.target() == dst.B()) || !(tC.source() == src.C()) || !(tC.target() == dst.C())) {
        throw DomainError("diagonal_hom: component maps do not match the descriptors");
    }
    for (size_t i = 0; i < src.A().rank(); i++) {
        for (size_t j = 0; j < src.B().rank(); j++) {
            GroupElement e = src.A().generator(i);
            GroupElement f = src.B().generator(j);
            GroupElement lhs = tC.apply(src.lambda().eval(e, f));
            GroupElement rhs = dst.lambda().eval(tA.apply(e), tB.apply(f));
            if (!(lhs == rhs)) {
                throw DomainError("diagonal_hom: compatibility fails on generator pair (" + std::to_string(i) + ", " +
                                  std::to_string(j) + ")");
            }
        }
    }
    return GhgHom(src, dst, tA, tB, tC);
}

/// A direct sum of GHGs sharing C, with the injections and projections on A and B.
struct DirectSum {
    std::vector<GhgDescriptor> summands;
    GhgDescriptor sum;
    std::vector<GroupHom> inj_A;
    std::vector<GroupHom> inj_B;
    std::vector<GroupHom> proj_A;
    std::vector<GroupHom> proj_B;

    /// The injection of the i-th summand, h(a, b, c) -> h(j_i a, j_i b, c).
    HeisElem inject(size_t i, const HeisElem &h) const {
        summands.at(i).require(h);
        return HeisElem{inj_A[i].apply(h.a), inj_B[i].apply(h.b), h.c};
    }

    /// theta(h_1, ..., h_m) = product of the injected elements.
    HeisElem theta(const std::vector<HeisElem> &hs) const {
        if (hs.size() != summands.size()) {
            throw DomainError("DirectSum::theta: wrong number of components");
        }
        HeisElem acc = sum.identity();
        for (size_t i = 0; i < hs.size(); i++) {
            acc = multiply(sum, acc, inject(i, hs[i]));
        }
        return acc;
    }
};

namespace detail {

struct BlockPresentation {
    CyclicPresentation pres;
    std::vector<size_t> offsets;
};

inline BlockPresentation concat_groups(const std::vector<FinAbGroup> &gs) {
    BlockPresentation bp;
    std::vector<int64_t> f;
    for (const auto &g : gs) {
        bp.offsets.push_back(f.size());
        f.insert(f.end(), g.factors().begin(), g.factors().end());
    }
    bp.offsets.push_back(f.size());
    bp.pres = canonical_presentation(FinAbGroup::product_of_cyclic(f));
    return bp;
}

inline GroupHom block_injection(const BlockPresentation &bp, const FinAbGroup &g, size_t i) {
    const auto &T = bp.pres.to_canonical;
    std::vector<std::vector<int64_t>> m(bp.pres.canonical.rank(), std::vector<int64_t>(g.rank()));
    for (size_t k = 0; k < m.size(); k++) {
        for (size_t j = 0; j < g.rank(); j++) {
            m[k][j] = T[k][bp.offsets[i] + j];
        }
    }
    return GroupHom(g, bp.pres.canonical, m);
}

inline GroupHom block_projection(const BlockPresentation &bp, const FinAbGroup &g, size_t i) {
    const auto &F = bp.pres.from_canonical;
    std::vector<std::vector<int64_t>> m(g.rank(), std::vector<int64_t>(bp.pres.canonical.rank()));
    for (size_t j = 0; j < g.rank(); j++) {
        m[j] = F[bp.offsets[i] + j];
    }
    return GroupHom(bp.pres.canonical, g, m);
}

}  // namespace detail

inline DirectSum direct_sum(const std::vector<GhgDescriptor> &descs) {
    if (descs.empty()) {
        throw DomainError("direct_sum: need at least one summand");
    }
    for (const auto &d : descs) {
        if (!(d.C() == descs[0].C())) {
            throw DomainError("direct_sum: summands have different C");
        }
        require_ndc(d, "direct_sum");
    }
    std::vector<FinAbGroup> as, bs;
    for (const auto &d : descs) {
        as.push_back(d.A());
        bs.push_back(d.B());
    }
    auto pa = detail::concat_groups(as);
    auto pb = detail::concat_groups(bs);
    DirectSum ds;
    ds.summands = descs;
    for (size_t i = 0; i < descs.size(); i++) {
        ds.inj_A.push_back(detail::block_injection(pa, descs[i].A(), i));
        ds.inj_B.push_back(detail::block_injection(pb, descs[i].B(), i));
        ds.proj_A.push_back(detail::block_projection(pa, descs[i].A(), i));
        ds.proj_B.push_back(detail::block_projection(pb, descs[i].B(), i));
    }
    const FinAbGroup &A = pa.pres.canonical;
    const FinAbGroup &B = pb.pres.canonical;
    const FinAbGroup &C = descs[0].C();
    std::vector<std::vector<GroupElement>> vals(A.rank(), std::vector<GroupElement>(B.rank()));
    for (size_t k = 0; k < A.rank(); k++) {
        for (size_t l = 0; l < B.rank(); l++) {
            GroupElement acc = C.zero();
            for (size_t i = 0; i < descs.size(); i++) {
                acc = C.add(acc, descs[i].lambda().eval(ds.proj_A[i].apply(A.generator(k)),
                                                        ds.proj_B[i].apply(B.generator(l))));
            }
            vals[k][l] = acc;
        }
    }
    std::optional<RingAction> ring;
    bool all_rings = std::all_of(descs.begin(), descs.end(), [&](const GhgDescriptor &d) {
        return d.ring().has_value() && d.ring()->num_generators() == descs[0].ring()->num_generators();
    });
    if (all_rings) {
        RingAction ra;
        for (size_t g = 0; g < descs[0].ring()->num_generators(); g++) {
            std::vector<GroupElement> ia, ib;
            for (size_t k = 0; k < A.rank(); k++) {
                GroupElement acc = A.zero();
                for (size_t i = 0; i < descs.size(); i++) {
                    GroupElement x = ds.proj_A[i].apply(A.generator(k));
                    acc = A.add(acc, ds.inj_A[i].apply(descs[i].ring()->on_A[g].apply(x)));
                }
                ia.push_back(acc);
            }
            for (size_t l = 0; l < B.rank(); l++) {
                GroupElement acc = B.zero();
                for (size_t i = 0; i < descs.size(); i++) {
                    GroupElement y = ds.proj_B[i].apply(B.generator(l));
                    acc = B.add(acc, ds.inj_B[i].apply(descs[i].ring()->on_B[g].apply(y)));
                }
                ib.push_back(acc);
            }
            ra.on_A.push_back(GroupHom::from_images(A, A, ia));
            ra.on_B.push_back(GroupHom::from_images(B, B, ib));
        }
        ring = ra;
    }
    ds.sum = GhgDescriptor(BilinearPairing(A, B, C, vals), ring);
    return ds;
}

/// A named map H -> H given elementwise.
struct ElementMap {
    std::string name;
    std::function<HeisElem(const HeisElem &)> apply;
};

/// Checks that f is a bijective homomorphism: exhaustively on pairs for |H| <= exhaustive_limit,
/// otherwise on `samples` random pairs plus bijectivity when |H| <= 10^5.
inline bool is_automorphism(const GhgDescriptor &d, const std::function<HeisElem(const HeisElem &)> &f,
                            uint64_t exhaustive_limit = 400, size_t samples = 2000, uint64_t seed = 7) {
    uint64_t n = d.order();
    if (n <= exhaustive_limit) {
        std::vector<HeisElem> els = d.elements();
        std::vector<HeisElem> img;
        for (const auto &x : els) {
            img.push_back(f(x));
        }
        for (size_t i = 0; i < els.size(); i++) {
            for (size_t j = 0; j < els.size(); j++) {
                if (!(f(multiply(d, els[i], els[j])) == multiply(d, img[i], img[j]))) {
                    return false;
                }
            }
        }
        std::set<HeisElem> seen(img.begin(), img.end());
        return seen.size() == els.size();
    }
    std::mt19937_64 rng(seed);
    for (size_t k = 0; k < samples; k++) {
        HeisElem x = d.random_element(rng);
        HeisElem y = d.random_element(rng);
        if (!(f(multiply(d, x, y)) == multiply(d, f(x), f(y)))) {
            return false;
        }
    }
    if (n <= 100000) {
        std::vector<char> hit(n, 0);
        for (size_t i = 0; i < n; i++) {
            HeisElem y = f(d.at(i));
            if (!d.contains(y)) {
                return false;
            }
            size_t idx = d.index_of(y);
            if (hit[idx]) {
                return false;
            }
            hit[idx] = 1;
        }
    }
    return true;
}

/// phi(h(a, b, c)) = h(-b, -a, lambda(a, b) - c); requires A = B and symmetric lambda.
inline ElementMap phi_swap(const GhgDescriptor &d) {
    if (!d.lambda().is_symmetric()) {
        throw DomainError("phi_swap: requires A = B and a symmetric pairing");
    }
    return ElementMap{"phi", [d](const HeisElem &h) {
                          d.require(h);
                          return HeisElem{d.B().neg(h.b), d.A().neg(h.a), d.C().sub(d.lambda().eval(h.a, h.b), h.c)};
                      }};
}

/// The automorphisms id, phi_-, phi^-, phi_-1 and, when A = B with symmetric lambda, phi.
inline std::vector<ElementMap> canonical_autos(const GhgDescriptor &d, bool verify = true) {
    std::vector<ElementMap> out;
    out.push_back({"id", [](const HeisElem &h) { return h; }});
    out.push_back({"phi_minus_lower", [d](const HeisElem &h) {
                       d.require(h);
                       return HeisElem{d.A().neg(h.a), h.b, d.C().neg(h.c)};
                   }});
    out.push_back({"phi_minus_upper", [d](const HeisElem &h) {
                       d.require(h);
                       return HeisElem{h.a, d.B().neg(h.b), d.C().neg(h.c)};
                   }});
    out.push_back({"phi_minus_one", [d](const HeisElem &h) {
                       d.require(h);
                       return HeisElem{d.A().neg(h.a), d.B().neg(h.b), h.c};
                   }});
    if (d.lambda().is_symmetric()) {
        out.push_back(phi_swap(d));
    }
    if (verify) {
        for (const auto &m : out) {
            if (!is_automorphism(d, m.apply)) {
                throw InternalError("canonical_autos: " + m.name + " failed the automorphism check");
            }
        }
    }
    return out;
}

/// H(Z/d, Z/d, Z/r, lambda(a, b) = (r/d) ab). r = d gives the odd Base Case, r = 2d the even one.
inline GhgDescriptor base_case_descriptor(int64_t d, int64_t r = 0) {
    if (r == 0) {
        r = d;
    }
    if (d < 2 || r % d != 0) {
        throw DomainError("base_case_descriptor: need d >= 2 dividing r");
    }
    FinAbGroup Zd = FinAbGroup::cyclic(d);
    return GhgDescriptor::cyclic(Zd, Zd, r, {{r / d}});
}

}  // namespace ghg

#endif
