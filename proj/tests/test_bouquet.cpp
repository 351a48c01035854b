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

#include <algorithm>
#include <cmath>
#include <random>

#include "ghg/bouquet.hpp"

using namespace ghg;

namespace {

StateVector random_state(const FinAbGroup &A, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    CVector v(static_cast<Eigen::Index>(A.order()));
    for (auto &x : v) {
        x = cdouble(g(rng), g(rng));
    }
    return StateVector(A, v / v.norm());
}

// The d = 3 fiducial (0, 1, -1) / sqrt 2.
StateVector hesse() {
    CVector v(3);
    v << 0.0, 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
    return StateVector(FinAbGroup::cyclic(3), v);
}

// A d = 5 SIC fiducial.
StateVector sic5() {
    CVector v(5);
    v << cdouble(-0.19444263618811833, 0.04654685962045473), cdouble(-0.04246491694571079, 0.48370269785841774),
        cdouble(-0.24175144517106142, 0.3386689028801153), cdouble(0.7019292975223779, 0.0),
        cdouble(-0.14813300473039678, -0.19095907722320674);
    return StateVector(FinAbGroup::cyclic(5), v);
}

std::vector<double> angles_brute(const SchrodingerRep &rep, const StateVector &v) {
    FinAbGroup G = rep.desc().abar();
    std::vector<double> out;
    for (size_t i = 0; i < G.order(); i++) {
        auto [a, b] = split_abar(rep.desc(), G.at(i));
        CMatrix M = rep.rep_matrix(HeisElem{a, b, rep.desc().C().zero()});
        out.push_back(std::abs(v.values.dot(M * v.values)));
    }
    return out;
}

}  // namespace

TEST(Bouquet, HesseIsFreeAndEquiangular) {
    GhgDescriptor D = base_case_descriptor(3);
    SchrodingerRep rep(RepConfig{D, 1});
    Bouquet y = orbit_and_stabilizer(rep, make_line(hesse()));
    EXPECT_TRUE(y.is_free());
    EXPECT_EQ(y.lines.size(), 9u);
    Classification c = classify(rep, y, partition_by_order(D));
    EXPECT_TRUE(c.equiangular);
    EXPECT_NEAR(c.value, 0.5, 1e-12);
    EXPECT_TRUE(c.regular);
}

TEST(Bouquet, BasisVectorIsNotFree) {
    GhgDescriptor D = base_case_descriptor(3);
    SchrodingerRep rep(RepConfig{D, 1});
    Bouquet y = orbit_and_stabilizer(rep, make_line(StateVector::basis(D.A(), 0)));
    EXPECT_FALSE(y.is_free());
    EXPECT_EQ(y.stabilizer.size(), 3u);
    EXPECT_EQ(y.lines.size(), 3u);
    EXPECT_THROW(classify(rep, y, partition_by_order(D)), DomainError);
}

TEST(Bouquet, LinesAreInvariantUnderPhase) {
    StateVector v = random_state(FinAbGroup::cyclic(5), 4);
    StateVector w(v.domain, cdouble(-0.28, 0.96) * v.values);
    EXPECT_TRUE(same_line(make_line(v), make_line(w)));
    EXPECT_LT((make_line(v).v.values - make_line(w).v.values).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Overlap, AnglesMatchExplicitMatrices) {
    GhgDescriptor D = base_case_descriptor(5);
    SchrodingerRep rep(RepConfig{D, 1});
    StateVector v = random_state(D.A(), 2);
    OverlapTable t = overlap_table(rep, make_line(v), Section::ZeroLift);
    OverlapTable td = overlap_table(rep, make_line(v), Section::Displacement);
    std::vector<double> brute = angles_brute(rep, make_line(v).v);
    for (size_t i = 0; i < brute.size(); i++) {
        EXPECT_NEAR(t.angles[i], brute[i], 1e-12);
        EXPECT_NEAR(td.angles[i], brute[i], 1e-12);
    }
    EXPECT_EQ(t.ambiguity_order, 5);
}

TEST(Projector, ReconstructsRankOne) {
    for (int64_t d : {3, 5, 7}) {
        GhgDescriptor D = base_case_descriptor(d);
        SchrodingerRep rep(RepConfig{D, 1});
        StateVector v = random_state(D.A(), static_cast<uint64_t>(d));
        Line l = make_line(v);
        CMatrix P = projector_from_coefficients(rep, projector_decompose(rep, l));
        CMatrix O = l.v.values * l.v.values.adjoint();
        EXPECT_LT(max_abs(P - O), 1e-12);
    }
}

TEST(Upsilon, SquareIsScalar) {
    GhgDescriptor D = base_case_descriptor(5);
    SchrodingerRep rep(RepConfig{D, 2});
    Upsilon U(rep);
    ASSERT_TRUE(U.materialized());
    CMatrix M = U.matrix();
    EXPECT_LT(max_abs(M * M - 25.0 * CMatrix::Identity(25, 25)), 1e-9);
}

TEST(Clinometric, HoldsForRandomLines) {
    FinAbGroup A = FinAbGroup::product_of_cyclic({3, 9});
    std::vector<GhgDescriptor> descs{base_case_descriptor(7), base_case_descriptor(9),
                                     GhgDescriptor::cyclic(A, A, 9, {{3, 0}, {0, 1}})};
    for (const auto &D : descs) {
        SchrodingerRep rep(RepConfig{D, 1});
        for (uint64_t seed = 0; seed < 3; seed++) {
            ClinometricReport c = clinometric_check(rep, make_line(random_state(D.A(), seed)));
            EXPECT_LT(c.residual, 1e-9);
            EXPECT_NEAR(c.sum, c.expected, 1e-9);
            EXPECT_NEAR(c.expected, static_cast<double>(D.s()), 1e-12);
        }
    }
}

TEST(Classify, PerturbedFiducialIsNotEquiangular) {
    GhgDescriptor D = base_case_descriptor(5);
    SchrodingerRep rep(RepConfig{D, 1});
    StateVector v = sic5();
    Classification c0 = classify(rep, orbit_and_stabilizer(rep, make_line(v)), partition_by_order(D));
    ASSERT_TRUE(c0.equiangular);
    StateVector noise = random_state(D.A(), 11);
    StateVector w(D.A(), v.values + 1e-3 * noise.values);
    w.values /= w.values.norm();
    Bouquet y = orbit_and_stabilizer(rep, make_line(w));
    ASSERT_TRUE(y.is_free());
    Classification c = classify(rep, y, partition_by_order(D));
    EXPECT_FALSE(c.equiangular);
    EXPECT_GT(c.equiangular_spread, 3e-4);
    EXPECT_LT(c.equiangular_spread, 3e-3);
    EXPECT_NE(c.witness_a, c.witness_b);
}

TEST(Partition, SymplecticOrbitsAreOrderClasses) {
    GhgDescriptor D = base_case_descriptor(9);
    OrbitPartition a = partition_by_sp(D, enumerate_sp(D));
    OrbitPartition b = partition_by_order(D);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.size(), 2u);
    validate_partition(D, a);
}

TEST(Partition, InvalidRejected) {
    GhgDescriptor D = base_case_descriptor(3);
    EXPECT_THROW(validate_partition(D, {{1, 2, 3}}), DomainError);
    EXPECT_THROW(validate_partition(D, {{0, 1, 2, 3, 4, 5, 6, 7, 8}}), DomainError);
    EXPECT_THROW(validate_partition(D, {{1, 2, 3, 4}, {4, 5, 6, 7, 8}}), DomainError);
}

TEST(Symmetry, HesseStabilizerIsSubgroup) {
    GhgDescriptor D = base_case_descriptor(3);
    SchrodingerRep rep(RepConfig{D, 1});
    Bouquet y = orbit_and_stabilizer(rep, make_line(hesse()));
    std::vector<SpElement> sp = enumerate_sp(D);
    SymmetryReport s = symmetry_group(rep, y, sp);
    EXPECT_LT(s.invariance_residual, 1e-9);
    std::vector<SpElement> members;
    for (size_t k : s.members) {
        members.push_back(sp[k]);
    }
    // Contains the parity map x -> -x, which sends (0, 1, -1) to its negative.
    SpElement minus = sp_from_matrix(D, {{2, 0}, {0, 2}});
    EXPECT_NE(std::find(members.begin(), members.end(), minus), members.end());
    EXPECT_EQ(sp.size() % members.size(), 0u);
    for (const auto &x : members) {
        for (const auto &yy : members) {
            EXPECT_NE(std::find(members.begin(), members.end(), sp_compose(x, yy)), members.end());
        }
    }
}

TEST(ExactEigenbasis, CyclotomicPolynomials) {
    EXPECT_EQ(cyclotomic_polynomial(1), (std::vector<int64_t>{-1, 1}));
    EXPECT_EQ(cyclotomic_polynomial(9), (std::vector<int64_t>{1, 0, 0, 1, 0, 0, 1}));
    EXPECT_EQ(cyclotomic_polynomial(12), (std::vector<int64_t>{1, 0, -1, 0, 1}));
    EXPECT_EQ(cyclotomic_polynomial(15).size(), 9u);
}

TEST(ExactEigenbasis, IndicatorsAndEigenvectors) {
    for (int64_t d : {9, 15, 25}) {
        BaseCaseEigenbasis e = base_case_eigenbasis(d);
        for (int64_t j : e.divisors) {
            size_t support = static_cast<size_t>(std::count(e.w[j].begin(), e.w[j].end(), Rational(1)));
            EXPECT_EQ(support, static_cast<size_t>((d / j) * (d / j)));
        }
        for (const auto &[j, u] : e.u) {
            EXPECT_TRUE(cyclotomic_equals_scaled(exact_base_case_upsilon(d, u), u, Rational(d))) << d << " " << j;
        }
        // w_j is mapped to (d / j)^2 w_{d / j}.
        for (int64_t j : e.divisors) {
            EXPECT_TRUE(cyclotomic_equals_scaled(exact_base_case_upsilon(d, e.w[j]), e.w[d / j], Rational((d / j) * (d / j))));
        }
    }
    EXPECT_THROW(base_case_eigenbasis(4), DomainError);
}
