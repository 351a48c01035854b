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

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "ghg/autgrp.hpp"

using namespace ghg;

namespace {

size_t sl2_brute(int64_t d) {
    size_t n = 0;
    for (int64_t a = 0; a < d; a++) {
        for (int64_t b = 0; b < d; b++) {
            for (int64_t c = 0; c < d; c++) {
                for (int64_t e = 0; e < d; e++) {
                    n += mod(a * e - b * c, d) == 1;
                }
            }
        }
    }
    return n;
}

// Symplectic check by definition: delta(alpha x, alpha y) = delta(x, y) for all x, y.
bool symplectic_brute(const GhgDescriptor &d, const SpElement &m) {
    FinAbGroup G = d.abar();
    for (const auto &x : G.elements()) {
        for (const auto &y : G.elements()) {
            if (!(delta(d, m.apply(x), m.apply(y)) == delta(d, x, y))) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace

TEST(Symplectic, EnumerationMatchesSl2Count) {
    for (int64_t d : {3, 5}) {
        GhgDescriptor D = base_case_descriptor(d);
        auto sp = enumerate_sp(D);
        EXPECT_EQ(sp.size(), sl2_brute(d));
        EXPECT_EQ(enumerate_sl2(d).size(), sl2_brute(d));
        std::set<SpElement> uniq(sp.begin(), sp.end());
        EXPECT_EQ(uniq.size(), sp.size());
        for (size_t k = 0; k < sp.size(); k += 7) {
            EXPECT_TRUE(symplectic_brute(D, sp[k]));
        }
    }
}

TEST(Symplectic, NonSymplecticRejected) {
    GhgDescriptor D = base_case_descriptor(5);
    SpElement m = sp_from_matrix(D, {{2, 0}, {0, 1}});
    EXPECT_FALSE(is_symplectic(D, m));
    EXPECT_FALSE(symplectic_brute(D, m));
    EXPECT_THROW(auto_from_pair(D, zero_eta(D), m), DomainError);
}

TEST(Symplectic, InverseAndComposition) {
    GhgDescriptor D = base_case_descriptor(5);
    auto sp = enumerate_sp(D);
    FinAbGroup G = D.abar();
    for (size_t k = 0; k < sp.size(); k += 11) {
        SpElement inv = sp_inverse(sp[k]);
        EXPECT_EQ(sp_compose(sp[k], inv), sp_identity(D));
        SpElement c = sp_compose(sp[k], sp[(k + 3) % sp.size()]);
        for (const auto &x : G.elements()) {
            EXPECT_EQ(c.apply(x), sp[k].apply(sp[(k + 3) % sp.size()].apply(x)));
        }
    }
}

TEST(Automorphisms, Aut0CountAndValidity) {
    GhgDescriptor D = base_case_descriptor(3);
    auto aut = enumerate_aut0(D);
    EXPECT_EQ(aut.size(), 24u * 9u);
    for (size_t k = 0; k < aut.size(); k += 13) {
        EXPECT_TRUE(is_automorphism(D, aut[k].as_function()));
        EXPECT_EQ(aut[k].apply(D.central(D.C().generator(0))), D.central(D.C().generator(0)));
    }
}

TEST(Automorphisms, ComposeIsFunctionComposition) {
    GhgDescriptor D = base_case_descriptor(5);
    auto aut = enumerate_aut0(D);
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<size_t> pick(0, aut.size() - 1);
    for (int k = 0; k < 20; k++) {
        const Automorphism &f = aut[pick(rng)], &g = aut[pick(rng)];
        Automorphism fg = compose(f, g);
        for (int j = 0; j < 20; j++) {
            HeisElem h = D.random_element(rng);
            EXPECT_EQ(fg.apply(h), f.apply(g.apply(h)));
        }
        EXPECT_EQ(theta_d(fg), semidirect_mul(theta_d(g), theta_d(f)));
    }
}

TEST(Automorphisms, ThetaDecomposeRecoversPair) {
    GhgDescriptor D = base_case_descriptor(5);
    auto aut = enumerate_aut0(D);
    for (size_t k = 0; k < aut.size(); k += 97) {
        Automorphism rec = theta_decompose(D, aut[k].as_function());
        EXPECT_EQ(rec.eta, aut[k].eta);
        EXPECT_EQ(rec.sp, aut[k].sp);
    }
    // Inner automorphisms induce the identity on A + B.
    Automorphism inner = theta_decompose(D, inner_automorphism(D, D.make({2}, {3}, {1})));
    EXPECT_EQ(inner.sp, sp_identity(D));
}

TEST(Automorphisms, CentreMustBeFixed) {
    GhgDescriptor D = base_case_descriptor(5);
    auto flip = [&D](const HeisElem &h) { return HeisElem{D.A().neg(h.a), h.b, D.C().neg(h.c)}; };
    EXPECT_THROW(theta_decompose(D, flip), DomainError);
}

TEST(Automorphisms, DeltaDiagonalOnNoncyclicA) {
    FinAbGroup A = FinAbGroup::product_of_cyclic({3, 9});
    GhgDescriptor D = GhgDescriptor::cyclic(A, A, 9, {{3, 0}, {0, 1}});
    GroupHom alpha(A, A, {{1, 0}, {0, 2}});
    Automorphism nu = delta_diagonal(D, alpha);
    std::mt19937_64 rng(3);
    for (int k = 0; k < 200; k++) {
        HeisElem x = D.random_element(rng), y = D.random_element(rng);
        EXPECT_EQ(nu.apply(multiply(D, x, y)), multiply(D, nu.apply(x), nu.apply(y)));
        auto [a, b] = split_abar(D, nu.sp.apply(join_abar(x.a, x.b)));
        EXPECT_EQ(a, alpha.apply(x.a));
    }
}

TEST(Weil, IntertwinesSampledAutomorphisms) {
    GhgDescriptor D = base_case_descriptor(7);
    SchrodingerRep rep(RepConfig{D, 1});
    auto sp = enumerate_sp(D);
    std::mt19937_64 rng(1);
    for (size_t k = 0; k < sp.size(); k += 41) {
        Automorphism phi = auto_from_pair(D, zero_eta(D), sp[k]);
        CMatrix T = weil_solve(rep, phi);
        EXPECT_LT(unitarity_residual(T), 1e-10);
        for (int j = 0; j < 10; j++) {
            HeisElem h = D.random_element(rng);
            EXPECT_LT(max_abs(T * rep.rep_matrix(h) - rep.rep_matrix(phi.apply(h)) * T), 1e-9);
        }
    }
}

TEST(Weil, AntilinearExtension) {
    GhgDescriptor D = base_case_descriptor(5);
    SchrodingerRep rep(RepConfig{D, 1});
    auto ups = [&D](const HeisElem &h) { return HeisElem{h.a, D.B().neg(h.b), D.C().neg(h.c)}; };
    RealLinearMap L = conj_extension(rep, ups);
    EXPECT_TRUE(L.antilinear);
    for (const auto &h : D.elements()) {
        EXPECT_LT(max_abs(after_matrix(L, rep.rep_matrix(h)) - rep.rep_matrix(ups(h)) * L.M), 1e-9);
    }
}

TEST(Displacement, EvenCentreRejected) {
    GhgDescriptor D = base_case_descriptor(4, 8);
    EXPECT_THROW(dmap(D, D.abar().zero()), DomainError);
}

TEST(Displacement, SquareIsCentralFree) {
    // D(x)^n = D(n x) for the symmetric section.
    GhgDescriptor D = base_case_descriptor(7);
    FinAbGroup G = D.abar();
    for (const auto &x : G.elements()) {
        EXPECT_EQ(power(D, dmap(D, x), 3), dmap(D, G.scale(x, 3)));
        EXPECT_EQ(inverse(D, dmap(D, x)), dmap(D, G.neg(x)));
    }
}
