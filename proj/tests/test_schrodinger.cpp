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

#include <cmath>
#include <numbers>
#include <random>

#include "ghg/schrodinger.hpp"

using namespace ghg;

namespace {

cdouble zeta(int64_t k, int64_t n) {
    double t = 2.0 * std::numbers::pi * static_cast<double>(mod(k, n)) / static_cast<double>(n);
    return {std::cos(t), std::sin(t)};
}

CVector random_vector(size_t n, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    CVector v(static_cast<Eigen::Index>(n));
    for (auto &x : v) {
        x = cdouble(g(rng), g(rng));
    }
    return v;
}

}  // namespace

TEST(Schrodinger, BaseCaseMatchesClockAndShift) {
    // sigma(h(a, b, c)) e_y = zeta^{c + (y - a) b} e_{y - a}, read off from (h f)(x) = p(xb + c) f(x + a).
    int64_t d = 5;
    SchrodingerRep rep(RepConfig{base_case_descriptor(d), 1});
    for (int64_t a = 0; a < d; a++) {
        for (int64_t b = 0; b < d; b++) {
            for (int64_t c = 0; c < d; c += 2) {
                CMatrix M = rep.rep_matrix(rep.desc().make({a}, {b}, {c}));
                CMatrix O = CMatrix::Zero(d, d);
                for (int64_t x = 0; x < d; x++) {
                    O(x, mod(x + a, d)) = zeta(x * b + c, d);
                }
                EXPECT_LT(max_abs(M - O), 1e-12);
            }
        }
    }
}

TEST(Schrodinger, HomomorphismAndUnitarity) {
    FinAbGroup A = FinAbGroup::product_of_cyclic({2, 4});
    GhgDescriptor D = GhgDescriptor::cyclic(A, A, 4, {{2, 0}, {0, 1}});
    SchrodingerRep rep(RepConfig{D, 3});
    std::mt19937_64 rng(2);
    for (int k = 0; k < 100; k++) {
        HeisElem x = D.random_element(rng), y = D.random_element(rng);
        CMatrix lhs = rep.rep_matrix(multiply(D, x, y));
        EXPECT_LT(max_abs(lhs - rep.rep_matrix(x) * rep.rep_matrix(y)), 1e-12);
        EXPECT_LT(unitarity_residual(rep.rep_matrix(x)), 1e-12);
        CMatrix R = rep.rep_matrix(multiply(D, x, y), Side::Right);
        EXPECT_LT(max_abs(R - rep.rep_matrix(x, Side::Right) * rep.rep_matrix(y, Side::Right)), 1e-12);
    }
}

TEST(Schrodinger, SigmaApplyMatchesMatrix) {
    GhgDescriptor D = base_case_descriptor(7);
    SchrodingerRep rep(RepConfig{D, 2});
    std::mt19937_64 rng(4);
    for (int k = 0; k < 20; k++) {
        HeisElem h = D.random_element(rng);
        StateVector f(D.A(), random_vector(7, rng));
        EXPECT_LT((rep.sigma_apply(h, f).values - rep.rep_matrix(h) * f.values).cwiseAbs().maxCoeff(), 1e-12);
        StateVector l(D.B(), random_vector(7, rng));
        EXPECT_LT((rep.tau_apply(h, l).values - rep.rep_matrix(h, Side::Right) * l.values).cwiseAbs().maxCoeff(),
                  1e-12);
    }
}

TEST(Schrodinger, CharacterClosedFormMatchesTrace) {
    for (int64_t u : {0, 1, 3}) {
        FinAbGroup Z9 = FinAbGroup::cyclic(9);
        GhgDescriptor D = GhgDescriptor::cyclic(Z9, Z9, 9, {{1}});
        SchrodingerRep rep(RepConfig{D, u});
        for (const auto &h : D.elements()) {
            EXPECT_LT(std::abs(rep.character(h) - rep.rep_matrix(h).trace()), 1e-10);
            EXPECT_LT(std::abs(rep.character(h, Side::Right) - rep.rep_matrix(h, Side::Right).trace()), 1e-10);
        }
    }
}

TEST(Schrodinger, SvClassification) {
    EXPECT_TRUE(sv_classify(sample_sigma(RepConfig{base_case_descriptor(3), 1})).sv);
    EXPECT_TRUE(sv_classify(sample_sigma(RepConfig{base_case_descriptor(5), 2})).sv);
    EXPECT_FALSE(sv_classify(sample_sigma(RepConfig{base_case_descriptor(5), 0})).sv);
    SvReport r = sv_classify(sample_sigma(RepConfig{base_case_descriptor(9), 3}));
    EXPECT_FALSE(r.sv);
    EXPECT_EQ(r.dim, 9u);
}

TEST(Schrodinger, PdhfConjugateLinearInFirst) {
    FinAbGroup A = FinAbGroup::cyclic(4);
    std::mt19937_64 rng(1);
    StateVector f(A, random_vector(4, rng)), g(A, random_vector(4, rng));
    cdouble s(0.3, -1.2);
    StateVector sf(A, s * f.values);
    EXPECT_LT(std::abs(pdhf(sf, g) - std::conj(s) * pdhf(f, g)), 1e-12);
    StateVector sg(A, s * g.values);
    EXPECT_LT(std::abs(pdhf(f, sg) - s * pdhf(f, g)), 1e-12);
    EXPECT_THROW(pdhf(f, StateVector(FinAbGroup::cyclic(5), CVector::Zero(5))), DomainError);
}

TEST(Fourier, IntertwinesAndIsUnitary) {
    GhgDescriptor D = base_case_descriptor(5);
    RepConfig cfg{D, 1};
    SchrodingerRep rep(cfg);
    std::mt19937_64 rng(8);
    for (int k = 0; k < 20; k++) {
        StateVector f(D.A(), random_vector(5, rng)), g(D.A(), random_vector(5, rng));
        StateVector xf = fourier_xi(cfg, f), xg = fourier_xi(cfg, g);
        EXPECT_LT(std::abs(pdhf(xf, xg) - pdhf(f, g)), 1e-10);
        HeisElem h = D.random_element(rng);
        StateVector lhs = fourier_xi(rep, rep.sigma_apply(h, f));
        StateVector rhs = rep.tau_apply(h, xf);
        EXPECT_LT((lhs.values - rhs.values).cwiseAbs().maxCoeff(), 1e-10);
    }
    EXPECT_THROW(fourier_xi(RepConfig{D, 0}, StateVector::basis(D.A(), 0)), DomainError);
}

TEST(Tensor, FactorizedActionMatchesDirect) {
    DirectSum ds = direct_sum({base_case_descriptor(3), base_case_descriptor(3)});
    std::mt19937_64 rng(6);
    for (int k = 0; k < 20; k++) {
        std::vector<StateVector> fs{StateVector(ds.summands[0].A(), random_vector(3, rng)),
                                    StateVector(ds.summands[1].A(), random_vector(3, rng))};
        double res = 1;
        tensor_factorize(ds, 1, ds.sum.random_element(rng), fs, &res);
        EXPECT_LT(res, 1e-12);
    }
}

TEST(Phase, DistanceIgnoresGlobalPhase) {
    CMatrix M = CMatrix::Random(3, 3);
    EXPECT_LT(phase_distance(M, cdouble(0, 1) * M), 1e-12);
    EXPECT_GT(phase_distance(M, 2.0 * M), 0.1);
    CMatrix N = normalize_phase(cdouble(0.6, 0.8) * M);
    EXPECT_LT(max_abs(N - normalize_phase(M)), 1e-12);
}
