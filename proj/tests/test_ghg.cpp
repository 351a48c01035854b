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

#include "ghg/ghg.hpp"

using namespace ghg;

namespace {

// Independent model of the base case group law on triples of integers mod d.
struct Triple {
    int64_t a, b, c;
};

Triple model_mul(int64_t d, int64_t r, Triple x, Triple y) {
    return Triple{mod(x.a + y.a, d), mod(x.b + y.b, d), mod(x.c + y.c + (r / d) * x.a * y.b, r)};
}

GhgDescriptor noncyclic_example() {
    // A = B = Z/2 x Z/4, C = Z/4, lambda(e_i, f_j) = V[i][j]; the Z/2 factors are radical.
    FinAbGroup A = FinAbGroup::product_of_cyclic({2, 4});
    return GhgDescriptor::cyclic(A, A, 4, {{0, 0}, {0, 1}});
}

}  // namespace

TEST(GroupLaw, MatchesIndependentModel) {
    for (auto [d, r] : std::vector<std::pair<int64_t, int64_t>>{{3, 3}, {5, 5}, {4, 8}, {6, 12}}) {
        GhgDescriptor D = base_case_descriptor(d, r);
        std::mt19937_64 rng(11);
        for (int k = 0; k < 300; k++) {
            HeisElem x = D.random_element(rng), y = D.random_element(rng);
            Triple m = model_mul(d, r, {x.a.coords[0], x.b.coords[0], x.c.coords[0]},
                                 {y.a.coords[0], y.b.coords[0], y.c.coords[0]});
            HeisElem p = multiply(D, x, y);
            EXPECT_EQ(p.a.coords[0], m.a);
            EXPECT_EQ(p.b.coords[0], m.b);
            EXPECT_EQ(p.c.coords[0], m.c);
        }
    }
}

TEST(GroupLaw, AssociativeWithInversesAndPowers) {
    GhgDescriptor D = noncyclic_example();
    std::mt19937_64 rng(3);
    for (int k = 0; k < 500; k++) {
        HeisElem x = D.random_element(rng), y = D.random_element(rng), z = D.random_element(rng);
        EXPECT_EQ(multiply(D, multiply(D, x, y), z), multiply(D, x, multiply(D, y, z)));
        EXPECT_EQ(multiply(D, x, inverse(D, x)), D.identity());
        HeisElem p = D.identity();
        for (int n = 0; n < 5; n++) {
            EXPECT_EQ(power(D, x, n), p);
            p = multiply(D, p, x);
        }
        EXPECT_EQ(multiply(D, power(D, x, -2), power(D, x, 2)), D.identity());
    }
}

TEST(GroupLaw, CommutatorIsCentralPairing) {
    GhgDescriptor D = base_case_descriptor(7);
    for (const auto &x : D.elements()) {
        HeisElem y = D.make({3}, {5}, {1});
        HeisElem k = commutator(D, x, y);
        int64_t expect = mod(x.a.coords[0] * 5 - 3 * x.b.coords[0], 7);
        EXPECT_EQ(k.a.coords[0], 0);
        EXPECT_EQ(k.b.coords[0], 0);
        EXPECT_TRUE(k.c.coords[0] == expect || k.c.coords[0] == mod(-expect, 7));
        EXPECT_EQ(multiply(D, commutator(D, x, y), commutator(D, y, x)), D.identity());
    }
}

TEST(Centre, BaseCaseAndDegenerate) {
    CentreData c = centre_and_derived(base_case_descriptor(9));
    EXPECT_EQ(c.centre_order, 9u);
    EXPECT_EQ(c.derived_order, 9u);
    EXPECT_TRUE(check_ndc(base_case_descriptor(9)).ndc);

    // lambda(a, b) = 3ab on Z/9 x Z/9 -> Z/9 has kernels of order 3 on each side.
    FinAbGroup Z9 = FinAbGroup::cyclic(9);
    GhgDescriptor deg = GhgDescriptor::cyclic(Z9, Z9, 9, {{3}});
    NdcReport rep = check_ndc(deg);
    EXPECT_FALSE(rep.ndc);
    EXPECT_EQ(rep.K_A_order, 3u);
    EXPECT_EQ(rep.K_B_order, 3u);
    CentreData cd = centre_and_derived(deg);
    EXPECT_EQ(cd.centre_order, 81u);
    EXPECT_EQ(cd.derived_order, 3u);

    // Brute force centre.
    size_t centre = 0;
    auto els = deg.elements();
    for (const auto &x : els) {
        bool central = true;
        for (const auto &y : els) {
            if (!(multiply(deg, x, y) == multiply(deg, y, x))) {
                central = false;
                break;
            }
        }
        centre += central;
    }
    EXPECT_EQ(centre, 81u);
}

TEST(Centre, NoncyclicExample) {
    GhgDescriptor D = noncyclic_example();
    NdcReport rep = check_ndc(D);
    EXPECT_FALSE(rep.nondegenerate);
    EXPECT_EQ(rep.K_A_order, 2u);
    EXPECT_EQ(rep.K_B_order, 2u);
    EXPECT_EQ(centre_and_derived(D).centre_order, 16u);
    FinAbGroup A = D.A();
    GhgDescriptor nd = GhgDescriptor::cyclic(A, A, 4, {{2, 0}, {0, 1}});
    EXPECT_TRUE(check_ndc(nd).ndc);
}

TEST(CanonicalAutos, AllVerifiedOnBaseCase) {
    GhgDescriptor D = base_case_descriptor(5);
    auto autos = canonical_autos(D);
    EXPECT_EQ(autos.size(), 5u);
    for (const auto &m : autos) {
        EXPECT_TRUE(is_automorphism(D, m.apply)) << m.name;
    }
}

TEST(CanonicalAutos, NonAutomorphismDetected) {
    GhgDescriptor D = base_case_descriptor(3);
    auto bad = [&D](const HeisElem &h) { return HeisElem{h.b, h.a, h.c}; };
    EXPECT_FALSE(is_automorphism(D, bad));
}

TEST(DirectSum, ThetaIsHomomorphism) {
    DirectSum ds = direct_sum({base_case_descriptor(3), base_case_descriptor(3)});
    EXPECT_EQ(ds.sum.order(), 3u * 3u * 3u * 3u * 3u);
    std::mt19937_64 rng(5);
    const GhgDescriptor &d0 = ds.summands[0];
    for (int k = 0; k < 200; k++) {
        HeisElem x0 = d0.random_element(rng), x1 = d0.random_element(rng);
        HeisElem y0 = d0.random_element(rng), y1 = d0.random_element(rng);
        HeisElem lhs = ds.theta({multiply(d0, x0, y0), multiply(d0, x1, y1)});
        HeisElem rhs = multiply(ds.sum, ds.theta({x0, x1}), ds.theta({y0, y1}));
        EXPECT_EQ(lhs, rhs);
    }
}

TEST(Descriptor, RejectsInvalid) {
    EXPECT_THROW(base_case_descriptor(4, 6), DomainError);
    FinAbGroup Z3 = FinAbGroup::cyclic(3);
    GhgDescriptor D = base_case_descriptor(3);
    EXPECT_THROW(D.require(HeisElem{GroupElement{{5}}, Z3.zero(), Z3.zero()}), DomainError);
}

TEST(Descriptor, IndexRoundTrip) {
    GhgDescriptor D = base_case_descriptor(4, 8);
    EXPECT_EQ(D.order(), 128u);
    for (size_t i = 0; i < D.order(); i++) {
        EXPECT_EQ(D.index_of(D.at(i)), i);
    }
}
