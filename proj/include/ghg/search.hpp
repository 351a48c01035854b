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

#ifndef GHG_SEARCH_HPP
#define GHG_SEARCH_HPP

#include <algorithm>
#include <random>
#include <thread>
#include <vector>

#include "ghg/bouquet.hpp"

namespace ghg {

enum class SearchMode { Equiangular, Regular };

/// Squared-angle targets per orbit of a partition of the non-identity elements of A + B.
struct SearchProblem {
    RepConfig cfg;
    SearchMode mode = SearchMode::Equiangular;
    OrbitPartition partition;
    std::vector<double> targets;
    size_t restarts = 20;
    size_t max_iters = 5000;
    /// A restart stops once the objective falls below this value.
    double objective_tol = 1e-30;
    double armijo = 1e-4;
    uint64_t seed = 1;
    unsigned threads = 1;
};

/// One orbit holding every non-identity element, with target 1/(s + 1).
inline SearchProblem equiangular_problem(const RepConfig &cfg) {
    SearchProblem p;
    p.cfg = cfg;
    p.mode = SearchMode::Equiangular;
    size_t n = cfg.desc.abar().order();
    std::vector<size_t> all;
    for (size_t i = 1; i < n; i++) {
        all.push_back(i);
    }
    p.partition = {all};
    p.targets = {1.0 / (static_cast<double>(cfg.desc.s()) + 1.0)};
    return p;
}

inline SearchProblem regular_problem(const RepConfig &cfg, OrbitPartition partition, std::vector<double> targets) {
    SearchProblem p;
    p.cfg = cfg;
    p.mode = SearchMode::Regular;
    p.partition = std::move(partition);
    p.targets = std::move(targets);
    return p;
}

/// Throws DomainError unless p is injective and the targets satisfy 1 + sum_O |O| t_O = |A + B| / s within 1e-12.
inline void validate_problem(const SearchProblem &p) {
    const GhgDescriptor &d = p.cfg.desc;
    require_ndc(d, "search");
    if (!p.cfg.p_injective()) {
        throw DomainError("search: p must be injective (u coprime to |C|)");
    }
    validate_partition(d, p.partition);
    if (p.targets.size() != p.partition.size()) {
        throw DomainError("search: need one target per orbit");
    }
    double sum = 1.0;
    for (size_t k = 0; k < p.targets.size(); k++) {
        if (!(p.targets[k] >= 0.0 && p.targets[k] <= 1.0)) {
            throw DomainError("search: targets must lie in [0, 1]");
        }
        sum += static_cast<double>(p.partition[k].size()) * p.targets[k];
    }
    double expected = static_cast<double>(d.abar().order()) / static_cast<double>(d.s());
    if (std::abs(sum - expected) > 1e-12) {
        throw DomainError("search: targets violate the clinometric sum (" + std::to_string(sum) + " vs " +
                          std::to_string(expected) + ")");
    }
}

struct ObjectiveValue {
    double value = 0;
    /// 2 dF/d(conj v), the gradient with respect to real and imaginary parts.
    CVector euclidean_grad;
    /// Projection onto the tangent space of the unit sphere at v.
    CVector grad;
};

/// The monomial operators sigma(h(a, b, 0)) for non-identity (a, b), with a target per element.
class SearchObjective {
  public:
    explicit SearchObjective(const SearchProblem &p) : rep_(p.cfg) {
        const GhgDescriptor &d = p.cfg.desc;
        n_ = rep_.dim();
        size_t nb = rep_.dim_right();
        size_t total = d.abar().order();
        target_.assign(total, 0.0);
        for (size_t k = 0; k < p.partition.size(); k++) {
            for (size_t i : p.partition[k]) {
                target_[i] = p.targets[k];
            }
        }
        for (size_t g = 1; g < total; g++) {
            size_t a = g / nb, b = g % nb;
            ops_.push_back(g);
            for (size_t x = 0; x < n_; x++) {
                perm_.push_back(rep_.add_a(x, a));
                phase_.push_back(rep_.p(rep_.lam(x, b)));
            }
        }
    }

    size_t dim() const { return n_; }
    const SchrodingerRep &rep() const { return rep_; }

    /// |<v, U_g v>|^2 for every element g of A + B, in enumeration order.
    std::vector<double> squared_angles(const CVector &v) const {
        std::vector<double> out(ops_.size() + 1, 0.0);
        out[0] = std::norm(v.squaredNorm());
        for (size_t k = 0; k < ops_.size(); k++) {
            out[ops_[k]] = std::norm(overlap(k, v));
        }
        return out;
    }

    double value(const CVector &v) const {
        double F = 0;
        for (size_t k = 0; k < ops_.size(); k++) {
            double e = std::norm(overlap(k, v)) - target_[ops_[k]];
            F += e * e;
        }
        return F;
    }

    ObjectiveValue evaluate(const CVector &v) const {
        ObjectiveValue out;
        out.euclidean_grad = CVector::Zero(static_cast<Eigen::Index>(n_));
        CVector Uv(static_cast<Eigen::Index>(n_)), Udv(static_cast<Eigen::Index>(n_));
        for (size_t k = 0; k < ops_.size(); k++) {
            const size_t *perm = &perm_[k * n_];
            const cdouble *ph = &phase_[k * n_];
            cdouble o = 0;
            for (size_t x = 0; x < n_; x++) {
                Uv(static_cast<Eigen::Index>(x)) = ph[x] * v(static_cast<Eigen::Index>(perm[x]));
                Udv(static_cast<Eigen::Index>(perm[x])) = std::conj(ph[x]) * v(static_cast<Eigen::Index>(x));
                o += std::conj(v(static_cast<Eigen::Index>(x))) * Uv(static_cast<Eigen::Index>(x));
            }
            double e = std::norm(o) - target_[ops_[k]];
            out.value += e * e;
            out.euclidean_grad += (4.0 * e) * (std::conj(o) * Uv + o * Udv);
        }
        cdouble vg = v.dot(out.euclidean_grad);
        out.grad = out.euclidean_grad - vg.real() * v;
        return out;
    }

  private:
    cdouble overlap(size_t k, const CVector &v) const {
        const size_t *perm = &perm_[k * n_];
        const cdouble *ph = &phase_[k * n_];
        cdouble o = 0;
        for (size_t x = 0; x < n_; x++) {
            o += std::conj(v(static_cast<Eigen::Index>(x))) * (ph[x] * v(static_cast<Eigen::Index>(perm[x])));
        }
        return o;
    }

    SchrodingerRep rep_;
    size_t n_ = 0;
    std::vector<size_t> ops_;
    std::vector<size_t> perm_;
    std::vector<cdouble> phase_;
    std::vector<double> target_;
};

inline ObjectiveValue objective_and_gradient(const SearchProblem &p, const StateVector &v) {
    return SearchObjective(p).evaluate(v.values);
}

/// splitmix64 step, used to derive per-restart seeds.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline CVector random_unit_vector(size_t n, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    CVector v(static_cast<Eigen::Index>(n));
    for (size_t i = 0; i < n; i++) {
        double re = nd(rng);
        double im = nd(rng);
        v(static_cast<Eigen::Index>(i)) = cdouble(re, im);
    }
    return v / v.norm();
}

struct RestartResult {
    CVector v;
    double objective = 0;
    size_t iterations = 0;
    /// Whether every accepted step decreased the objective.
    bool monotone = true;
};

/// Projected gradient descent on the unit sphere with Armijo backtracking and a Barzilai-Borwein trial step.
inline RestartResult descend(const SearchObjective &obj, CVector v, const SearchProblem &p) {
    RestartResult res;
    ObjectiveValue cur = obj.evaluate(v);
    double step = 1.0 / std::max(1.0, cur.grad.norm());
    CVector prev_v, prev_g;
    size_t it = 0;
    for (; it < p.max_iters; it++) {
        if (cur.value < p.objective_tol) {
            break;
        }
        double g2 = cur.grad.squaredNorm();
        if (g2 == 0.0) {
            break;
        }
        if (it > 0) {
            CVector sv = v - prev_v;
            CVector yv = cur.grad - prev_g;
            double sy = std::abs(sv.dot(yv).real());
            if (sy > 0) {
                step = sv.squaredNorm() / sy;
            }
        }
        bool accepted = false;
        CVector next;
        ObjectiveValue nv;
        for (int bt = 0; bt < 60; bt++) {
            next = v - step * cur.grad;
            next /= next.norm();
            double F = obj.value(next);
            if (F <= cur.value - p.armijo * step * g2) {
                nv = obj.evaluate(next);
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            break;
        }
        if (nv.value > cur.value) {
            res.monotone = false;
        }
        prev_v = v;
        prev_g = cur.grad;
        v = next;
        cur = nv;
    }
    res.v = v;
    res.objective = cur.value;
    res.iterations = it;
    return res;
}

struct SearchReport {
    StateVector best;
    double objective = 0;
    size_t best_restart = 0;
    size_t iterations = 0;
    std::vector<double> restart_objectives;
    std::vector<double> orbit_spreads;
    /// max |a^2 - t| over non-identity elements.
    double max_target_deviation = 0;
    double clinometric_residual = 0;
    bool monotone = true;
};

inline SearchReport optimize_fiducial(const SearchProblem &p) {
    validate_problem(p);
    SearchObjective obj(p);
    size_t n = obj.dim();
    std::vector<RestartResult> results(p.restarts);
    auto run = [&](size_t k) {
        results[k] = descend(obj, random_unit_vector(n, splitmix64(p.seed + k)), p);
    };
    unsigned threads = std::max(1u, std::min<unsigned>(p.threads, static_cast<unsigned>(p.restarts)));
    if (threads == 1) {
        for (size_t k = 0; k < p.restarts; k++) {
            run(k);
        }
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; t++) {
            pool.emplace_back([&, t]() {
                for (size_t k = t; k < p.restarts; k += threads) {
                    run(k);
                }
            });
        }
        for (auto &th : pool) {
            th.join();
        }
    }
    if (results.empty()) {
        throw DomainError("search: need at least one restart");
    }
    SearchReport rep;
    for (size_t k = 0; k < results.size(); k++) {
        rep.restart_objectives.push_back(results[k].objective);
        rep.monotone = rep.monotone && results[k].monotone;
        if (results[k].objective < results[rep.best_restart].objective) {
            rep.best_restart = k;
        }
    }
    const RestartResult &best = results[rep.best_restart];
    rep.best = make_line(StateVector(p.cfg.desc.A(), best.v)).v;
    rep.objective = best.objective;
    rep.iterations = best.iterations;
    std::vector<double> a2 = obj.squared_angles(rep.best.values);
    for (size_t k = 0; k < p.partition.size(); k++) {
        double mn = 2, mx = -1;
        for (size_t i : p.partition[k]) {
            double a = std::sqrt(a2[i]);
            mn = std::min(mn, a);
            mx = std::max(mx, a);
            rep.max_target_deviation = std::max(rep.max_target_deviation, std::abs(a2[i] - p.targets[k]));
        }
        rep.orbit_spreads.push_back(mx - mn);
    }
    rep.clinometric_residual = clinometric_check(obj.rep(), Line{rep.best}).residual;
    return rep;
}

struct VerifyReport {
    bool free = false;
    size_t stabilizer_order = 0;
    size_t orbit_size = 0;
    ClinometricReport clinometric;
    /// Present only for free bouquets with |A + B| = s^2.
    std::optional<Classification> classification;
    double max_target_deviation = 0;
    bool meets_targets = false;
    std::vector<double> angles;
};

/// Orbit, freeness, overlaps, clinometric relation and classification of the line through v.
inline VerifyReport verify_candidate(const SearchProblem &p, const StateVector &v, double tol = 1e-7) {
    SchrodingerRep rep(p.cfg);
    Line line = make_line(v);
    Bouquet y = orbit_and_stabilizer(rep, line);
    VerifyReport out;
    out.free = y.is_free();
    out.stabilizer_order = y.stabilizer.size();
    out.orbit_size = y.lines.size();
    out.clinometric = clinometric_check(rep, line);
    out.angles = overlap_table(rep, line, Section::ZeroLift).angles;
    const GhgDescriptor &d = p.cfg.desc;
    if (out.free && d.abar().order() == d.s() * d.s()) {
        out.classification = classify(rep, y, p.partition, tol);
    }
    for (size_t k = 0; k < p.partition.size() && k < p.targets.size(); k++) {
        for (size_t i : p.partition[k]) {
            out.max_target_deviation =
                std::max(out.max_target_deviation, std::abs(out.angles[i] * out.angles[i] - p.targets[k]));
        }
    }
    out.meets_targets = out.free && out.max_target_deviation < tol;
    return out;
}

}  // namespace ghg

#endif
