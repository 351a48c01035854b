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

#include "ghg/search.hpp"

using namespace ghg;

namespace {

StateVector hesse() {
    CVector v(3);
    v << 0.0, 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
    return StateVector(FinAbGroup::cyclic(3), v);
}

// Objective recomputed from explicit operator matrices.
double objective_brute(const SearchProblem &p, const CVector &v) {
    SchrodingerRep rep(p.cfg);
    const GhgDescriptor &d = p.cfg.desc;
    FinAbGroup G = d.abar();
    double F = 0;
    for (size_t k = 0; k < p.partition.size(); k++) {
        for (size_t i : p.partition[k]) {
            auto [a, b] = split_abar(d, G.at(i));
            double a2 = std::norm(v.dot(rep.rep_matrix(HeisElem{a, b, d.C().zero()}) * v));
            F += (a2 - p.targets[k]) * (a2 - p.targets[k]);
        }
    }
    return F;
}

}  // namespace

TEST(Objective, ExactSicIsZero) {
    SearchProblem p = equiangular_problem(RepConfig{base_case_descriptor(3), 1});
    EXPECT_LT(objective_and_gradient(p, hesse()).value, 1e-18);
}

TEST(Objective, MatchesExplicitMatrices) {
    SearchProblem p = equiangular_problem(RepConfig{base_case_descriptor(5), 1});
    SearchObjective obj(p);
    for (uint64_t s = 0; s < 5; s++) {
        CVector v = random_unit_vector(5, s);
        EXPECT_NEAR(obj.value(v), objective_brute(p, v), 1e-12);
        EXPECT_NEAR(obj.evaluate(v).value, obj.value(v), 1e-12);
    }
}

TEST(Objective, GradientMatchesFiniteDifferences) {
    SearchProblem p = equiangular_problem(RepConfig{base_case_descriptor(5), 1});
    SearchObjective obj(p);
    const double h = 1e-6;
    for (uint64_t s = 0; s < 5; s++) {
        CVector v = random_unit_vector(5, 100 + s);
        CVector g = obj.evaluate(v).euclidean_grad;
        double scale = g.cwiseAbs().maxCoeff();
        double worst = 0;
        for (Eigen::Index k = 0; k < 5; k++) {
            for (cdouble dir : {cdouble(1, 0), cdouble(0, 1)}) {
                CVector vp = v, vm = v;
                vp(k) += h * dir;
                vm(k) -= h * dir;
                double fd = (obj.value(vp) - obj.value(vm)) / (2 * h);
                double an = dir.real() != 0 ? g(k).real() : g(k).imag();
                worst = std::max(worst, std::abs(fd - an) / scale);
            }
        }
        EXPECT_LT(worst, 1e-5);
    }
}

TEST(Objective, ProjectedGradientIsTangent) {
    SearchProblem p = equiangular_problem(RepConfig{base_case_descriptor(7), 1});
    CVector v = random_unit_vector(7, 3);
    ObjectiveValue o = objective_and_gradient(p, StateVector(FinAbGroup::cyclic(7), v));
    EXPECT_LT(std::abs(v.dot(o.grad).real()), 1e-12);
}

TEST(Objective, PhaseAndOrbitInvariance) {
    GhgDescriptor D = base_case_descriptor(5);
    SearchProblem p = equiangular_problem(RepConfig{D, 1});
    SearchObjective obj(p);
    SchrodingerRep rep(p.cfg);
    CVector v = random_unit_vector(5, 8);
    double base = obj.value(v);
    EXPECT_NEAR(obj.value(cdouble(std::cos(0.7), std::sin(0.7)) * v), base, 1e-12);
    for (const auto &h : {D.make({1}, {0}, {0}), D.make({2}, {3}, {1})}) {
        EXPECT_NEAR(obj.value(rep.rep_matrix(h) * v), base, 1e-12);
    }
}

TEST(Problem, InfeasibleTargetsRejected) {
    GhgDescriptor D = base_case_descriptor(9);
    RepConfig cfg{D, 1};
    OrbitPartition part = partition_by_order(D);
    ASSERT_EQ(part.size(), 2u);
    EXPECT_NO_THROW(validate_problem(regular_problem(cfg, part, {0.1, 0.1})));
    // 1 + 8 t_3 + 72 t_9 = 9.
    EXPECT_NO_THROW(validate_problem(regular_problem(cfg, part, {0.19, 0.1 - 0.09 * 8 / 72})));
    EXPECT_THROW(validate_problem(regular_problem(cfg, part, {0.2, 0.1})), DomainError);
    EXPECT_THROW(validate_problem(regular_problem(cfg, part, {0.1})), DomainError);
    EXPECT_THROW(optimize_fiducial(regular_problem(cfg, part, {0.5, 0.5})), DomainError);
    EXPECT_THROW(validate_problem(equiangular_problem(RepConfig{base_case_descriptor(5), 0})), DomainError);
}

TEST(Search, DimensionThreeWithinBudget) {
    SearchProblem p = equiangular_problem(RepConfig{base_case_descriptor(3), 1});
    p.max_iters = 2000;
    p.restarts = 20;
    SearchReport r = optimize_fiducial(p);
    EXPECT_LT(r.objective, 1e-16);
    EXPECT_TRUE(r.monotone);
}

TEST(Search, DimensionsFiveAndSevenReachSic) {
    for (int64_t d : {5, 7}) {
        SearchProblem p = equiangular_problem(RepConfig{base_case_descriptor(d), 1});
        SearchReport r = optimize_fiducial(p);
        EXPECT_LT(r.max_target_deviation, 1e-7) << d;
        EXPECT_LT(r.clinometric_residual, 1e-9);
        VerifyReport v = verify_candidate(p, r.best);
        EXPECT_TRUE(v.free);
        ASSERT_TRUE(v.classification.has_value());
        EXPECT_TRUE(v.classification->equiangular);
        EXPECT_TRUE(v.meets_targets);
    }
}

TEST(Search, SeededDeterminismAcrossThreads) {
    SearchProblem p = equiangular_problem(RepConfig{base_case_descriptor(5), 1});
    p.restarts = 6;
    p.seed = 42;
    SearchReport a = optimize_fiducial(p);
    SearchReport b = optimize_fiducial(p);
    p.threads = 3;
    SearchReport c = optimize_fiducial(p);
    EXPECT_EQ(a.restart_objectives, b.restart_objectives);
    EXPECT_EQ(a.restart_objectives, c.restart_objectives);
    EXPECT_EQ(a.best.values, c.best.values);
    p.seed = 43;
    EXPECT_NE(optimize_fiducial(p).restart_objectives, a.restart_objectives);
}

TEST(Search, DescentIsMonotone) {
    SearchProblem p = equiangular_problem(RepConfig{base_case_descriptor(7), 1});
    SearchObjective obj(p);
    p.max_iters = 30;
    for (uint64_t s = 0; s < 4; s++) {
        CVector v0 = random_unit_vector(7, s);
        RestartResult r = descend(obj, v0, p);
        EXPECT_TRUE(r.monotone);
        EXPECT_LE(r.objective, obj.value(v0));
        EXPECT_NEAR(r.v.norm(), 1.0, 1e-12);
    }
}

TEST(Verify, HesseAndBasisVector) {
    GhgDescriptor D = base_case_descriptor(3);
    SearchProblem p = equiangular_problem(RepConfig{D, 1});
    VerifyReport h = verify_candidate(p, hesse());
    EXPECT_TRUE(h.free);
    ASSERT_TRUE(h.classification.has_value());
    EXPECT_TRUE(h.classification->equiangular);
    EXPECT_NEAR(h.classification->value, 0.5, 1e-12);
    VerifyReport e = verify_candidate(p, StateVector::basis(D.A(), 0));
    EXPECT_FALSE(e.free);
    EXPECT_EQ(e.stabilizer_order, 3u);
    EXPECT_FALSE(e.classification.has_value());
    EXPECT_FALSE(e.meets_targets);
}
