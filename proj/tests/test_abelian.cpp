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

#include <numeric>
#include <random>

#include "ghg/abelian.hpp"

using namespace ghg;

namespace {

// gcd of all entries, which equals the first Smith invariant.
int64_t gcd_of_minors_1x1(const std::vector<std::vector<int64_t>> &m) {
    int64_t g = 0;
    for (const auto &row : m) {
        for (int64_t x : row) {
            g = std::gcd(g, x);
        }
    }
    return g;
}

}  // namespace

TEST(SmithForm, DiagonalDividesAndFactorizes) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int64_t> dist(-20, 20);
    for (int trial = 0; trial < 100; trial++) {
        size_t m = 1 + trial % 3, n = 1 + (trial / 3) % 3;
        std::vector<std::vector<int64_t>> rows(m, std::vector<int64_t>(n));
        for (auto &r : rows) {
            for (auto &x : r) {
                x = dist(rng);
            }
        }
        IntMatrix M = IntMatrix::from_rows(rows);
        SmithForm s = smith_decompose(M);
        EXPECT_EQ(s.U * M * s.V, s.D);
        EXPECT_EQ(s.U * s.U_inv, IntMatrix::identity(m));
        EXPECT_EQ(s.V * s.V_inv, IntMatrix::identity(n));
        auto diag = s.diagonal();
        for (size_t i = 0; i + 1 < diag.size(); i++) {
            if (diag[i + 1] != 0) {
                EXPECT_EQ(diag[i + 1] % diag[i], 0);
            } else {
                EXPECT_TRUE(diag[i] == 0 || diag[i] > 0);
            }
        }
        for (size_t i = 0; i < s.D.rows(); i++) {
            for (size_t j = 0; j < s.D.cols(); j++) {
                if (i != j) {
                    EXPECT_EQ(s.D(i, j), 0);
                }
            }
        }
        if (!diag.empty()) {
            EXPECT_EQ(diag[0], gcd_of_minors_1x1(rows));
        }
    }
}

TEST(SmithForm, KnownExample) {
    IntMatrix M = IntMatrix::from_rows({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}});
    auto diag = smith_decompose(M).diagonal();
    ASSERT_EQ(diag.size(), 3u);
    EXPECT_EQ(diag[0], 2);
    EXPECT_EQ(diag[1], 6);
    EXPECT_EQ(diag[2], 12);
}

TEST(HermiteForm, SameRowLatticeAndEchelon) {
    IntMatrix M = IntMatrix::from_rows({{4, 6}, {2, 8}, {6, 2}});
    IntMatrix H = hermite_rows(M);
    for (size_t i = 0; i < M.rows(); i++) {
        std::vector<BigInt> v{M(i, 0), M(i, 1)}, c;
        EXPECT_TRUE(lattice_coordinates(H, v, &c));
    }
    // Index of the row lattice in Z^2 is the gcd of the 2 x 2 minors.
    int64_t g = 0;
    for (size_t i = 0; i < M.rows(); i++) {
        for (size_t k = i + 1; k < M.rows(); k++) {
            BigInt minor = M(i, 0) * M(k, 1) - M(i, 1) * M(k, 0);
            g = std::gcd(g, static_cast<int64_t>(minor));
        }
    }
    ASSERT_EQ(H.rows(), 2u);
    BigInt det = H(0, 0) * H(1, 1) - H(0, 1) * H(1, 0);
    EXPECT_EQ(det < 0 ? BigInt(-det) : det, g);
    EXPECT_EQ(H(1, 0), 0);
}

TEST(IntegerKernel, AnnihilatesRows) {
    IntMatrix M = IntMatrix::from_rows({{1, 2, 3}, {4, 5, 6}});
    IntMatrix K = integer_kernel(M);
    IntMatrix P = M * K;
    for (size_t i = 0; i < P.rows(); i++) {
        for (size_t j = 0; j < P.cols(); j++) {
            EXPECT_EQ(P(i, j), 0);
        }
    }
    EXPECT_GE(K.cols(), 1u);
}

TEST(FinAbGroup, CanonicalFormOfProduct) {
    FinAbGroup g = FinAbGroup::product_of_cyclic({4, 6});
    FinAbGroup c = g.canonical_form();
    EXPECT_EQ(c.factors(), (std::vector<int64_t>{2, 12}));
    EXPECT_EQ(g.order(), 24u);
    EXPECT_EQ(g.exponent(), 12);
    EXPECT_FALSE(g.is_cyclic());
    EXPECT_TRUE(FinAbGroup::product_of_cyclic({3, 5}).is_cyclic());
}

TEST(FinAbGroup, ArithmeticAndIndexing) {
    FinAbGroup g = FinAbGroup::product_of_cyclic({3, 4});
    GroupElement x = g.make({2, 3}), y = g.make({2, 2});
    EXPECT_EQ(g.add(x, y), g.make({1, 1}));
    EXPECT_EQ(g.neg(x), g.make({1, 1}));
    EXPECT_EQ(g.element_order(x), 12);
    EXPECT_EQ(g.element_order(g.make({0, 2})), 2);
    for (size_t i = 0; i < g.order(); i++) {
        EXPECT_EQ(g.index_of(g.at(i)), i);
    }
    EXPECT_EQ(g.elements().size(), 12u);
}

TEST(Subgroup, GeneratedOrder) {
    FinAbGroup g = FinAbGroup::product_of_cyclic({4, 6});
    Subgroup s = Subgroup::generated_by(g, {g.make({2, 0}), g.make({0, 3})});
    EXPECT_EQ(s.order(), 4u);
    EXPECT_TRUE(s.contains(g.make({2, 3})));
    EXPECT_FALSE(s.contains(g.make({1, 0})));
    EXPECT_EQ(s.elements().size(), 4u);
}

TEST(GroupHom, KernelImageComposition) {
    FinAbGroup z12 = FinAbGroup::cyclic(12), z4 = FinAbGroup::cyclic(4);
    GroupHom f = GroupHom::from_images(z12, z4, {z4.make({1})});
    EXPECT_EQ(f.kernel().order(), 3u);
    EXPECT_EQ(f.image().order(), 4u);
    GroupHom dbl = GroupHom::from_images(z4, z4, {z4.make({2})});
    GroupHom h = f.then(dbl);
    for (const auto &x : z12.elements()) {
        EXPECT_EQ(h.apply(x), dbl.apply(f.apply(x)));
    }
    EXPECT_FALSE(dbl.is_bijective());
    EXPECT_TRUE(GroupHom::identity(z4).is_bijective());
}

TEST(GroupHom, HomEnumerationCount) {
    // |Hom(Z/m, Z/n)| = gcd(m, n).
    for (auto [m, n] : std::vector<std::pair<int64_t, int64_t>>{{4, 6}, {5, 7}, {9, 3}, {8, 12}}) {
        EXPECT_EQ(hom_enumerate(FinAbGroup::cyclic(m), FinAbGroup::cyclic(n)).size(),
                  static_cast<size_t>(std::gcd(m, n)));
    }
}

TEST(BilinearPairing, CyclicBilinearity) {
    FinAbGroup A = FinAbGroup::cyclic(6), B = FinAbGroup::cyclic(6);
    BilinearPairing lam = BilinearPairing::cyclic(A, B, 6, {{1}});
    for (const auto &a : A.elements()) {
        for (const auto &a2 : A.elements()) {
            for (const auto &b : B.elements()) {
                EXPECT_EQ(lam.eval(A.add(a, a2), b), lam.target().add(lam.eval(a, b), lam.eval(a2, b)));
            }
        }
    }
    EXPECT_EQ(lam.eval_cyclic({2}, {5}), 4);
}

TEST(FinAbGroup, RejectsBadInput) {
    EXPECT_THROW(FinAbGroup::product_of_cyclic({0}), DomainError);
    FinAbGroup g = FinAbGroup::cyclic(5);
    EXPECT_THROW(g.make({1, 2}), DomainError);
}
