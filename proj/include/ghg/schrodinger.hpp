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

#ifndef GHG_SCHRODINGER_HPP
#define GHG_SCHRODINGER_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "ghg/ghg.hpp"

namespace ghg {

using cdouble = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// A complex function on a finite abelian group, indexed by the lexicographic enumeration.
struct StateVector {
    FinAbGroup domain;
    CVector values;

    StateVector() = default;
    StateVector(FinAbGroup dom, CVector v) : domain(std::move(dom)), values(std::move(v)) {
        if (static_cast<uint64_t>(values.size()) != domain.order()) {
            throw DomainError("StateVector: length does not match the domain order");
        }
    }

    static StateVector basis(const FinAbGroup &dom, size_t idx) {
        CVector v = CVector::Zero(static_cast<Eigen::Index>(dom.order()));
        v(static_cast<Eigen::Index>(idx)) = 1.0;
        return StateVector(dom, v);
    }

    double norm() const { return values.norm(); }
};

/// <f, g> = sum_x conj(f(x)) g(x).
inline cdouble pdhf(const StateVector &f, const StateVector &g) {
    if (!(f.domain == g.domain)) {
        throw DomainError("pdhf: domain mismatch");
    }
    return f.values.dot(g.values);
}

/// Maximum column deviation of M^dagger M from the identity.
inline double unitarity_residual(const CMatrix &M) {
    CMatrix E = M.adjoint() * M - CMatrix::Identity(M.cols(), M.cols());
    return E.cwiseAbs().colwise().sum().maxCoeff();
}

inline double max_abs(const CMatrix &M) { return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff(); }

/// min over unit scalars t of max|P - t Q|.
inline double phase_distance(const CMatrix &P, const CMatrix &Q) {
    cdouble ip = (Q.adjoint() * P).trace();
    cdouble t = std::abs(ip) > 0 ? ip / std::abs(ip) : cdouble(1.0);
    return max_abs(P - t * Q);
}

/// Multiplies M by the unit scalar making its first entry of modulus > tol (row-major) positive real.
inline CMatrix normalize_phase(const CMatrix &M, double tol = 1e-9) {
    for (Eigen::Index i = 0; i < M.rows(); i++) {
        for (Eigen::Index j = 0; j < M.cols(); j++) {
            if (std::abs(M(i, j)) > tol) {
                return M * (std::abs(M(i, j)) / M(i, j));
            }
        }
    }
    return M;
}

/// Representation data: descriptor plus the exponent u defining p(c) = exp(2 pi i u c / r).
struct RepConfig {
    GhgDescriptor desc;
    int64_t u = 1;

    bool p_injective() const { return std::gcd(mod(u, desc.r()), desc.r()) == 1; }
};

enum class Side { Left, Right };

/// Precomputed tables realizing sigma_p and tau_p for a RepConfig.
class SchrodingerRep {
  public:
    explicit SchrodingerRep(RepConfig cfg) : cfg_(std::move(cfg)) {
        const GhgDescriptor &d = cfg_.desc;
        if (!d.lambda().target_is_cyclic()) {
            throw DomainError("SchrodingerRep: C must be cyclic");
        }
        r_ = d.r();
        na_ = d.A().order();
        nb_ = d.B().order();
        phase_.resize(static_cast<size_t>(r_));
        for (int64_t k = 0; k < r_; k++) {
            double ang = 2.0 * std::numbers::pi * static_cast<double>(mulmod(cfg_.u, k, r_)) / static_cast<double>(r_);
            phase_[static_cast<size_t>(k)] = cdouble(std::cos(ang), std::sin(ang));
        }
        std::vector<GroupElement> as = d.A().elements();
        std::vector<GroupElement> bs = d.B().elements();
        add_a_.resize(na_ * na_);
        for (size_t x = 0; x < na_; x++) {
            for (size_t a = 0; a < na_; a++) {
                add_a_[x * na_ + a] = d.A().index_of(d.A().add(as[x], as[a]));
            }
        }
        add_b_.resize(nb_ * nb_);
        for (size_t y = 0; y < nb_; y++) {
            for (size_t b = 0; b < nb_; b++) {
                add_b_[y * nb_ + b] = d.B().index_of(d.B().add(bs[y], bs[b]));
            }
        }
        lam_.resize(na_ * nb_);
        for (size_t x = 0; x < na_; x++) {
            for (size_t y = 0; y < nb_; y++) {
                lam_[x * nb_ + y] = d.lambda().eval_cyclic(as[x].coords, bs[y].coords);
            }
        }
    }

    const RepConfig &config() const { return cfg_; }
    const GhgDescriptor &desc() const { return cfg_.desc; }
    size_t dim() const { return na_; }
    size_t dim_right() const { return nb_; }
    int64_t r() const { return r_; }

    /// p(k) for k in Z/r.
    cdouble p(int64_t k) const { return phase_[static_cast<size_t>(mod(k, r_))]; }
    /// lambda on enumeration indices, as an integer mod r.
    int64_t lam(size_t a_idx, size_t b_idx) const { return lam_[a_idx * nb_ + b_idx]; }
    size_t add_a(size_t x, size_t a) const { return add_a_[x * na_ + a]; }
    size_t add_b(size_t y, size_t b) const { return add_b_[y * nb_ + b]; }
    size_t neg_a(size_t a) const { return desc().A().index_of(desc().A().neg(desc().A().at(a))); }

    int64_t c_value(const HeisElem &h) const { return h.c.coords.empty() ? 0 : h.c.coords[0]; }

    /// (h f)(x) = p(lambda(x, b) + c) f(x + a).
    StateVector sigma_apply(const HeisElem &h, const StateVector &f) const {
        desc().require(h);
        if (!(f.domain == desc().A())) {
            throw DomainError("sigma_apply: state is not a function on A");
        }
        size_t a = desc().A().index_of(h.a);
        size_t b = desc().B().index_of(h.b);
        int64_t c = c_value(h);
        CVector out(static_cast<Eigen::Index>(na_));
        for (size_t x = 0; x < na_; x++) {
            out(static_cast<Eigen::Index>(x)) =
                p(lam(x, b) + c) * f.values(static_cast<Eigen::Index>(add_a(x, a)));
        }
        return StateVector(desc().A(), out);
    }

    /// (h l)(y) = p(c - lambda(a, y + b)) l(y + b).
    StateVector tau_apply(const HeisElem &h, const StateVector &l) const {
        desc().require(h);
        if (!(l.domain == desc().B())) {
            throw DomainError("tau_apply: state is not a function on B");
        }
        size_t a = desc().A().index_of(h.a);
        size_t b = desc().B().index_of(h.b);
        int64_t c = c_value(h);
        CVector out(static_cast<Eigen::Index>(nb_));
        for (size_t y = 0; y < nb_; y++) {
            size_t yb = add_b(y, b);
            out(static_cast<Eigen::Index>(y)) = p(c - lam(a, yb)) * l.values(static_cast<Eigen::Index>(yb));
        }
        return StateVector(desc().B(), out);
    }

    CMatrix rep_matrix(const HeisElem &h, Side side = Side::Left) const {
        desc().require(h);
        size_t a = desc().A().index_of(h.a);
        size_t b = desc().B().index_of(h.b);
        int64_t c = c_value(h);
        if (side == Side::Left) {
            CMatrix M = CMatrix::Zero(static_cast<Eigen::Index>(na_), static_cast<Eigen::Index>(na_));
            for (size_t x = 0; x < na_; x++) {
                M(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(add_a(x, a))) = p(lam(x, b) + c);
            }
            return M;
        }
        CMatrix M = CMatrix::Zero(static_cast<Eigen::Index>(nb_), static_cast<Eigen::Index>(nb_));
        for (size_t y = 0; y < nb_; y++) {
            size_t yb = add_b(y, b);
            M(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(yb)) = p(c - lam(a, yb));
        }
        return M;
    }

    /// Closed-form character: p(c)|A| if a = 0 and lambda(A, b) lies in ker p, else 0 (mirrored for tau).
    cdouble character(const HeisElem &h, Side side = Side::Left) const {
        desc().require(h);
        size_t a = desc().A().index_of(h.a);
        size_t b = desc().B().index_of(h.b);
        int64_t c = c_value(h);
        auto in_ker = [&](int64_t v) { return mulmod(mod(cfg_.u, r_), v, r_) == 0; };
        if (side == Side::Left) {
            if (!h.a.is_zero()) {
                return 0.0;
            }
            for (size_t x = 0; x < na_; x++) {
                if (!in_ker(lam(x, b))) {
                    return 0.0;
                }
            }
            return p(c) * static_cast<double>(na_);
        }
        if (!h.b.is_zero()) {
            return 0.0;
        }
        for (size_t y = 0; y < nb_; y++) {
            if (!in_ker(lam(a, y))) {
                return 0.0;
            }
        }
        return p(c) * static_cast<double>(nb_);
    }

  private:
    RepConfig cfg_;
    int64_t r_ = 1;
    size_t na_ = 1;
    size_t nb_ = 1;
    std::vector<cdouble> phase_;
    std::vector<size_t> add_a_;
    std::vector<size_t> add_b_;
    std::vector<int64_t> lam_;
};

inline StateVector sigma_apply(const RepConfig &cfg, const HeisElem &h, const StateVector &f) {
    return SchrodingerRep(cfg).sigma_apply(h, f);
}

inline StateVector tau_apply(const RepConfig &cfg, const HeisElem &h, const StateVector &l) {
    return SchrodingerRep(cfg).tau_apply(h, l);
}

inline CMatrix rep_matrix(const RepConfig &cfg, const HeisElem &h, Side side = Side::Left) {
    return SchrodingerRep(cfg).rep_matrix(h, side);
}

inline cdouble character(const RepConfig &cfg, const HeisElem &h, Side side = Side::Left) {
    return SchrodingerRep(cfg).character(h, side);
}

/// A finite representation given by its matrices on every group element.
struct SampledRep {
    std::vector<CMatrix> matrices;
    /// central[i] is true iff element i lies in the centre.
    std::vector<bool> central;
    /// One index per coset of the centre.
    std::vector<size_t> coset_reps;
};

/// Which of the five equivalent SV conditions hold.
struct SvReport {
    bool vanishing_and_square = false;
    bool irreducible_and_square = false;
    bool irreducible_and_vanishing = false;
    bool irreducible_and_independent = false;
    bool irreducible_and_basis = false;
    bool sv = false;
    uint64_t group_order = 0;
    uint64_t t = 0;
    uint64_t dim = 0;
    double sum_abs_chi2 = 0;
};

inline SvReport sv_classify(const SampledRep &rho, double tol = 1e-8) {
    SvReport rep;
    if (rho.matrices.empty() || rho.central.size() != rho.matrices.size()) {
        throw DomainError("sv_classify: need one matrix and one centrality flag per group element");
    }
    uint64_t n = rho.matrices.size();
    uint64_t nz = static_cast<uint64_t>(std::count(rho.central.begin(), rho.central.end(), true));
    if (nz == 0 || n % nz != 0) {
        throw DomainError("sv_classify: inconsistent centre");
    }
    uint64_t s = static_cast<uint64_t>(rho.matrices[0].rows());
    rep.group_order = n;
    rep.t = n / nz;
    rep.dim = s;
    if (rho.coset_reps.size() != rep.t) {
        throw DomainError("sv_classify: need one coset representative per coset of the centre");
    }
    bool vanishing = true;
    double sum = 0;
    for (size_t i = 0; i < n; i++) {
        cdouble chi = rho.matrices[i].trace();
        sum += std::norm(chi);
        if (!rho.central[i] && std::abs(chi) > tol * static_cast<double>(s)) {
            vanishing = false;
        }
    }
    rep.sum_abs_chi2 = sum;
    bool square = rep.t == s * s;
    bool irreducible = std::abs(sum - static_cast<double>(n)) < tol * static_cast<double>(n);
    Eigen::Index ss = static_cast<Eigen::Index>(s * s);
    CMatrix stack(ss, static_cast<Eigen::Index>(rep.t));
    for (size_t k = 0; k < rep.t; k++) {
        const CMatrix &M = rho.matrices.at(rho.coset_reps[k]);
        stack.col(static_cast<Eigen::Index>(k)) = Eigen::Map<const CVector>(M.data(), ss);
    }
    Eigen::ColPivHouseholderQR<CMatrix> qr(stack);
    qr.setThreshold(1e-8);
    bool independent = static_cast<uint64_t>(qr.rank()) == rep.t;
    rep.vanishing_and_square = vanishing && square;
    rep.irreducible_and_square = irreducible && square;
    rep.irreducible_and_vanishing = irreducible && vanishing;
    rep.irreducible_and_independent = irreducible && independent;
    rep.irreducible_and_basis = irreducible && independent && square;
    bool all = rep.vanishing_and_square && rep.irreducible_and_square && rep.irreducible_and_vanishing &&
               rep.irreducible_and_independent && rep.irreducible_and_basis;
    bool none = !rep.vanishing_and_square && !rep.irreducible_and_square && !rep.irreducible_and_vanishing &&
                !rep.irreducible_and_independent && !rep.irreducible_and_basis;
    if (!all && !none) {
        throw InternalError("sv_classify: the five SV conditions disagree");
    }
    rep.sv = all;
    return rep;
}

/// Samples sigma_p on every element of H; the centre is h(K_A, K_B, C).
inline SampledRep sample_sigma(const RepConfig &cfg) {
    SchrodingerRep rep(cfg);
    const GhgDescriptor &d = cfg.desc;
    CentreData cd = centre_and_derived(d);
    SampledRep out;
    std::vector<HeisElem> els = d.elements();
    for (const auto &h : els) {
        out.matrices.push_back(rep.rep_matrix(h));
        out.central.push_back(cd.K_A.contains(h.a) && cd.K_B.contains(h.b));
    }
    std::set<std::pair<GroupElement, GroupElement>> seen;
    for (size_t i = 0; i < els.size(); i++) {
        if (!els[i].c.is_zero()) {
            continue;
        }
        bool fresh = true;
        for (const auto &ka : cd.K_A.elements()) {
            for (const auto &kb : cd.K_B.elements()) {
                if (seen.count({d.A().add(els[i].a, ka), d.B().add(els[i].b, kb)})) {
                    fresh = false;
                }
            }
        }
        if (fresh) {
            seen.insert({els[i].a, els[i].b});
            out.coset_reps.push_back(i);
        }
    }
    return out;
}

/// xi_p(f)(y) = s^{-1/2} sum_x f(x) p(lambda(x, y)).
inline StateVector fourier_xi(const SchrodingerRep &rep, const StateVector &f) {
    if (!rep.config().p_injective()) {
        throw DomainError("fourier_xi: p is not injective");
    }
    if (!(f.domain == rep.desc().A())) {
        throw DomainError("fourier_xi: state is not a function on A");
    }
    size_t na = rep.dim();
    size_t nb = rep.dim_right();
    CVector out = CVector::Zero(static_cast<Eigen::Index>(nb));
    double scale = 1.0 / std::sqrt(static_cast<double>(na));
    for (size_t y = 0; y < nb; y++) {
        cdouble acc = 0;
        for (size_t x = 0; x < na; x++) {
            acc += f.values(static_cast<Eigen::Index>(x)) * rep.p(rep.lam(x, y));
        }
        out(static_cast<Eigen::Index>(y)) = acc * scale;
    }
    return StateVector(rep.desc().B(), out);
}

inline StateVector fourier_xi(const RepConfig &cfg, const StateVector &f) {
    require_ndc(cfg.desc, "fourier_xi");
    return fourier_xi(SchrodingerRep(cfg), f);
}

/// V(f_1 x ... x f_m)(a) = prod_i f_i(proj_i a).
inline StateVector tensor_expand(const DirectSum &ds, const std::vector<StateVector> &factors) {
    if (factors.size() != ds.summands.size()) {
        throw DomainError("tensor_expand: need one factor per summand");
    }
    const FinAbGroup &A = ds.sum.A();
    CVector out(static_cast<Eigen::Index>(A.order()));
    for (size_t x = 0; x < A.order(); x++) {
        GroupElement ax = A.at(x);
        cdouble v = 1.0;
        for (size_t i = 0; i < factors.size(); i++) {
            v *= factors[i].values(static_cast<Eigen::Index>(ds.summands[i].A().index_of(ds.proj_A[i].apply(ax))));
        }
        out(static_cast<Eigen::Index>(x)) = v;
    }
    return StateVector(A, out);
}

/// Applies h to the elementary tensor of `factors` through the factored action p(c) * (x) h(a_i, b_i, 0).
/// If check_residual is non-null, also stores max|result - sigma_p(h) V(v)|.
inline StateVector tensor_factorize(const DirectSum &ds, int64_t u, const HeisElem &h,
                                    const std::vector<StateVector> &factors, double *check_residual = nullptr) {
    if (factors.size() != ds.summands.size()) {
        throw DomainError("tensor_factorize: input is not an elementary tensor over the summands");
    }
    ds.sum.require(h);
    std::vector<StateVector> moved;
    for (size_t i = 0; i < factors.size(); i++) {
        const GhgDescriptor &di = ds.summands[i];
        SchrodingerRep ri(RepConfig{di, u});
        HeisElem hi{ds.proj_A[i].apply(h.a), ds.proj_B[i].apply(h.b), di.C().zero()};
        moved.push_back(ri.sigma_apply(hi, factors[i]));
    }
    StateVector out = tensor_expand(ds, moved);
    SchrodingerRep whole(RepConfig{ds.sum, u});
    out.values *= whole.p(whole.c_value(h));
    if (check_residual != nullptr) {
        StateVector direct = whole.sigma_apply(h, tensor_expand(ds, factors));
        *check_residual = (direct.values - out.values).cwiseAbs().maxCoeff();
    }
    return out;
}

}  // namespace ghg

#endif
