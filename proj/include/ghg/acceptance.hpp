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

#ifndef GHG_ACCEPTANCE_HPP
#define GHG_ACCEPTANCE_HPP

#include <chrono>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ghg/arith.hpp"
#include "ghg/search.hpp"

namespace ghg::acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

struct Options {
    /// Smaller sample counts and search budgets.
    bool quick = false;
    uint64_t seed = 20260101;
};

namespace oracle {

inline cdouble zeta(int64_t k, int64_t n) {
    double t = 2.0 * std::numbers::pi * static_cast<double>(mod(k, n)) / static_cast<double>(n);
    return cdouble(std::cos(t), std::sin(t));
}

/// Shift X e_x = e_{x+1} on C^d.
inline CMatrix shift(int64_t d) {
    CMatrix X = CMatrix::Zero(d, d);
    for (int64_t x = 0; x < d; x++) {
        X((x + 1) % d, x) = 1.0;
    }
    return X;
}

/// Clock Z e_x = zeta_d^x e_x.
inline CMatrix clock(int64_t d) {
    CMatrix Z = CMatrix::Zero(d, d);
    for (int64_t x = 0; x < d; x++) {
        Z(x, x) = zeta(x, d);
    }
    return Z;
}

inline CMatrix mpow(const CMatrix &M, int64_t k) {
    CMatrix out = CMatrix::Identity(M.rows(), M.cols());
    for (int64_t i = 0; i < k; i++) {
        out = out * M;
    }
    return out;
}

/// |{M in M_2(Z/d) : det M = 1}| by direct enumeration.
inline size_t sl2_count(int64_t d) {
    size_t n = 0;
    for (int64_t a = 0; a < d; a++) {
        for (int64_t b = 0; b < d; b++) {
            for (int64_t c = 0; c < d; c++) {
                for (int64_t e = 0; e < d; e++) {
                    n += ((a * e - b * c) % d + d) % d == 1;
                }
            }
        }
    }
    return n;
}

/// Automorphisms of the Base Case group for d = 3 fixing the centre, counted through images of the
/// generators x = h(1, 0, 0) and y = h(0, 1, 0): every element is x^a y^b z^c.
inline size_t aut0_count_base(int64_t d) {
    GhgDescriptor D = base_case_descriptor(d);
    HeisElem x = D.make({1}, {0}, {0});
    HeisElem y = D.make({0}, {1}, {0});
    HeisElem z = D.make({0}, {0}, {1});
    std::vector<HeisElem> all = D.elements();
    auto word = [&](const HeisElem &X, const HeisElem &Y, const HeisElem &h) {
        int64_t a = h.a.coords.empty() ? 0 : h.a.coords[0];
        int64_t b = h.b.coords.empty() ? 0 : h.b.coords[0];
        HeisElem xy = multiply(D, power(D, X, a), power(D, Y, b));
        HeisElem base = multiply(D, power(D, x, a), power(D, y, b));
        GroupElement c = D.C().sub(h.c, base.c);
        return multiply(D, xy, power(D, z, c.coords.empty() ? 0 : c.coords[0]));
    };
    size_t count = 0;
    for (const auto &X : all) {
        for (const auto &Y : all) {
            std::vector<HeisElem> img;
            for (const auto &h : all) {
                img.push_back(word(X, Y, h));
            }
            bool ok = true;
            std::vector<char> hit(all.size(), 0);
            for (size_t i = 0; i < all.size() && ok; i++) {
                size_t k = D.index_of(img[i]);
                ok = !hit[k];
                hit[k] = 1;
            }
            for (size_t i = 0; i < all.size() && ok; i++) {
                for (size_t j = 0; j < all.size() && ok; j++) {
                    ok = img[D.index_of(multiply(D, all[i], all[j]))] == multiply(D, img[i], img[j]);
                }
            }
            ok = ok && img[D.index_of(z)] == z;
            count += ok;
        }
    }
    return count;
}

/// |<v, X^a Z^b v>| for all (a, b) with explicit clock and shift matrices.
inline std::vector<double> base_angles(const CVector &v) {
    int64_t d = v.size();
    CMatrix X = shift(d), Z = clock(d);
    std::vector<double> out;
    for (int64_t a = 0; a < d; a++) {
        for (int64_t b = 0; b < d; b++) {
            out.push_back(std::abs(v.dot(mpow(X, a) * mpow(Z, b) * v)));
        }
    }
    return out;
}

/// Upsilon on (Z/d)^2 with kernel zeta_d^{a b' - a' b}, applied to f.
inline std::vector<double> base_upsilon_residual(int64_t d, const std::vector<double> &f, double eigenvalue) {
    std::vector<double> res;
    for (int64_t a2 = 0; a2 < d; a2++) {
        for (int64_t b2 = 0; b2 < d; b2++) {
            cdouble acc = 0;
            for (int64_t a = 0; a < d; a++) {
                for (int64_t b = 0; b < d; b++) {
                    acc += zeta(a * b2 - a2 * b, d) * f[static_cast<size_t>(a * d + b)];
                }
            }
            res.push_back(std::abs(acc - eigenvalue * f[static_cast<size_t>(a2 * d + b2)]));
        }
    }
    return res;
}

}  // namespace oracle

namespace detail {

inline std::string fmt(double x) {
    std::ostringstream ss;
    ss << std::setprecision(3) << x;
    return ss.str();
}

inline std::vector<std::pair<std::string, GhgDescriptor>> group_law_cases() {
    std::vector<std::pair<std::string, GhgDescriptor>> out;
    for (int64_t d : {3, 5, 7, 9, 15}) {
        out.emplace_back("base" + std::to_string(d), base_case_descriptor(d));
    }
    NumberField K2({-2, 0, 1});
    out.emplace_back("Q(sqrt2),(7,3+th)",
                     trace_pairing_build(K2, FracIdeal::unit(K2), FracIdeal::from_strings(K2, {"7", "3+th"})).desc);
    NumberField K5 = quadratic_field(5);
    out.emplace_back("Q(sqrt5),(3)",
                     trace_pairing_build(K5, FracIdeal::unit(K5), FracIdeal::from_strings(K5, {"3"})).desc);
    return out;
}

}  // namespace detail

inline CriterionResult group_law(const Options &o) {
    CriterionResult r{1, "group law: associativity, inverse, commutator", false, "", 0};
    size_t triples = o.quick ? 200 : 1000;
    size_t failures = 0, checked = 0;
    std::mt19937_64 rng(o.seed);
    for (const auto &[name, d] : detail::group_law_cases()) {
        for (size_t k = 0; k < triples; k++) {
            HeisElem x = d.random_element(rng), y = d.random_element(rng), z = d.random_element(rng);
            bool ok = multiply(d, multiply(d, x, y), z) == multiply(d, x, multiply(d, y, z));
            ok = ok && multiply(d, x, inverse(d, x)) == d.identity() && multiply(d, inverse(d, x), x) == d.identity();
            HeisElem comm = multiply(d, multiply(d, x, y), multiply(d, inverse(d, x), inverse(d, y)));
            GroupElement expect = d.C().sub(d.lambda().eval(x.a, y.b), d.lambda().eval(y.a, x.b));
            ok = ok && comm == d.central(expect) && commutator(d, x, y) == comm;
            failures += !ok;
            checked++;
        }
    }
    r.pass = failures == 0;
    r.detail = std::to_string(checked) + " triples over 7 groups, " + std::to_string(failures) + " failures";
    return r;
}

inline CriterionResult characters_and_sv(const Options &) {
    CriterionResult r{2, "characters and SV conditions", false, "", 0};
    double worst = 0;
    bool sv_ok = true;
    std::string sv_log;
    for (int64_t d : {3, 5}) {
        for (int64_t u : {1, 2, 0}) {
            RepConfig cfg{base_case_descriptor(d), u};
            SchrodingerRep rep(cfg);
            for (const auto &h : cfg.desc.elements()) {
                worst = std::max(worst, std::abs(rep.character(h) - rep.rep_matrix(h).trace()));
            }
        }
    }
    std::vector<std::pair<int64_t, int64_t>> cases{{3, 1}, {3, 2}, {3, 0}, {5, 1}, {5, 0}, {9, 1}, {9, 3}};
    for (auto [d, u] : cases) {
        RepConfig cfg{base_case_descriptor(d), u};
        try {
            SvReport s = sv_classify(sample_sigma(cfg));
            bool expect = cfg.p_injective();
            sv_ok = sv_ok && s.sv == expect;
            sv_log += " d" + std::to_string(d) + "u" + std::to_string(u) + (s.sv ? ":SV" : ":notSV");
        } catch (const InternalError &e) {
            sv_ok = false;
            sv_log += std::string(" ") + e.what();
        }
    }
    r.pass = worst < 1e-9 && sv_ok;
    r.detail = "max |closed form - trace| = " + detail::fmt(worst) + ";" + sv_log;
    return r;
}

inline CriterionResult fourier_duality(const Options &o) {
    CriterionResult r{3, "Fourier duality", false, "", 0};
    double inter = 0, pdhf_err = 0;
    std::mt19937_64 rng(o.seed + 3);
    std::vector<GhgDescriptor> descs;
    for (int64_t d : {3, 5, 7, 9}) {
        descs.push_back(base_case_descriptor(d));
    }
    descs.push_back(detail::group_law_cases().back().second);
    for (const auto &d : descs) {
        RepConfig cfg{d, 1};
        SchrodingerRep rep(cfg);
        Eigen::Index n = static_cast<Eigen::Index>(rep.dim());
        CMatrix Xi(n, n);
        for (Eigen::Index i = 0; i < n; i++) {
            Xi.col(i) = fourier_xi(rep, StateVector::basis(d.A(), static_cast<size_t>(i))).values;
        }
        std::vector<HeisElem> gens;
        for (size_t i = 0; i < d.A().rank(); i++) {
            gens.push_back(HeisElem{d.A().generator(i), d.B().zero(), d.C().zero()});
        }
        for (size_t j = 0; j < d.B().rank(); j++) {
            gens.push_back(HeisElem{d.A().zero(), d.B().generator(j), d.C().zero()});
        }
        gens.push_back(d.central(d.C().generator(0)));
        for (const auto &h : gens) {
            inter = std::max(inter, max_abs(Xi * rep.rep_matrix(h, Side::Left) - rep.rep_matrix(h, Side::Right) * Xi));
        }
        std::normal_distribution<double> g;
        for (int k = 0; k < 20; k++) {
            CVector f(n), h(n);
            for (Eigen::Index i = 0; i < n; i++) {
                f(i) = cdouble(g(rng), g(rng));
                h(i) = cdouble(g(rng), g(rng));
            }
            f /= f.norm();
            h /= h.norm();
            cdouble lhs = pdhf(fourier_xi(rep, StateVector(d.A(), f)), fourier_xi(rep, StateVector(d.A(), h)));
            pdhf_err = std::max(pdhf_err, std::abs(lhs - f.dot(h)));
        }
    }
    r.pass = inter < 1e-10 && pdhf_err < 1e-12;
    r.detail = "intertwining residual " + detail::fmt(inter) + ", inner-product error " + detail::fmt(pdhf_err);
    return r;
}

inline CriterionResult clinometric(const Options &o) {
    CriterionResult r{4, "clinometric relation", false, "", 0};
    size_t lines = o.quick ? 10 : 50;
    double eig = 0, sum_err = 0, lib_eig = 0;
    for (int64_t d : {3, 5, 7, 9}) {
        SchrodingerRep rep(RepConfig{base_case_descriptor(d), 1});
        for (size_t k = 0; k < lines; k++) {
            CVector v = random_unit_vector(static_cast<size_t>(d), splitmix64(o.seed + 1000 * d + k));
            std::vector<double> a = oracle::base_angles(v);
            std::vector<double> a2;
            double sum = 0;
            for (double x : a) {
                a2.push_back(x * x);
                sum += x * x;
            }
            for (double e : oracle::base_upsilon_residual(d, a2, static_cast<double>(d))) {
                eig = std::max(eig, e);
            }
            sum_err = std::max(sum_err, std::abs(sum - static_cast<double>(d)));
            ClinometricReport c = clinometric_check(rep, Line{StateVector(rep.desc().A(), v)});
            lib_eig = std::max(lib_eig, c.residual);
        }
    }
    r.pass = eig < 1e-8 && lib_eig < 1e-8 && sum_err < 1e-10;
    r.detail = std::to_string(lines) + " lines per d in {3,5,7,9}: eigen-residual " + detail::fmt(eig) +
               " (library " + detail::fmt(lib_eig) + "), sum error " + detail::fmt(sum_err);
    return r;
}

inline CriterionResult automorphisms(const Options &) {
    CriterionResult r{5, "automorphism structure d=3", false, "", 0};
    GhgDescriptor d = base_case_descriptor(3);
    std::vector<Automorphism> aut = enumerate_aut0(d);
    size_t sp = enumerate_sp(d).size();
    size_t oracle_aut = oracle::aut0_count_base(3);
    size_t oracle_sl2 = oracle::sl2_count(3);
    size_t anti_fail = 0, elementwise_fail = 0;
    std::vector<HeisElem> all = d.elements();
    for (size_t i = 0; i < aut.size(); i++) {
        for (size_t j = 0; j < aut.size(); j++) {
            Automorphism c = compose(aut[i], aut[j]);
            anti_fail += !(theta_d(c) == semidirect_mul(theta_d(aut[j]), theta_d(aut[i])));
            if (j % 37 == i % 37) {
                for (const auto &h : all) {
                    if (!(c.apply(h) == aut[i].apply(aut[j].apply(h)))) {
                        elementwise_fail++;
                        break;
                    }
                }
            }
        }
    }
    r.pass = aut.size() == 216 && oracle_aut == 216 && sp == 24 && oracle_sl2 == 24 && anti_fail == 0 &&
             elementwise_fail == 0;
    r.detail = "|Aut0| = " + std::to_string(aut.size()) + " (oracle " + std::to_string(oracle_aut) + "), |Sp| = " +
               std::to_string(sp) + " (oracle |SL2(Z/3)| = " + std::to_string(oracle_sl2) + "), anti-homomorphism failures " +
               std::to_string(anti_fail) + "/" + std::to_string(aut.size() * aut.size());
    return r;
}

inline CriterionResult arithmetic_sl2(const Options &) {
    CriterionResult r{6, "arithmetic SL2 for Q(sqrt2), frak_f over 7", false, "", 0};
    NumberField K({-2, 0, 1});
    ArithGhg g = trace_pairing_build(K, FracIdeal::unit(K), FracIdeal::from_strings(K, {"7", "3+th"}));
    ResidueRing R = residue_ring(g);
    BasisPick p = basis_pick(g, R);
    std::vector<SpElement> sp = enumerate_sp(g.desc);
    size_t det_bad = 0;
    for (const auto &s : sp) {
        det_bad += mat2_det(R, xi_sl2_map(g, p, s)) != R.one;
    }
    Sl2Report rep = sl2_criterion_check(g, R, p);
    size_t oracle = oracle::sl2_count(7);
    r.pass = sp.size() == oracle && oracle == 336 && det_bad == 0 && rep.mismatches == 0 && rep.symplectic == 336 &&
             rep.det_one == 336;
    r.detail = "|Sp| = " + std::to_string(sp.size()) + ", |SL2(F7)| = " + std::to_string(oracle) +
               ", det != 1 among Sp: " + std::to_string(det_bad) + ", criterion mismatches " +
               std::to_string(rep.mismatches) + "/" + std::to_string(rep.matrices);
    return r;
}

inline CriterionResult base_eigenbasis(const Options &) {
    CriterionResult r{7, "Base Case eigenbasis (exact)", false, "", 0};
    bool ok = true;
    std::string log;
    for (int64_t d : {9, 15}) {
        BaseCaseEigenbasis e = base_case_eigenbasis(d);
        for (int64_t j : e.divisors) {
            auto lhs = exact_base_case_upsilon(d, e.w[j]);
            int64_t q = d / j;
            bool wj = cyclotomic_equals_scaled(lhs, e.w[q], Rational(q * q));
            ok = ok && wj;
        }
        size_t nu = 0;
        for (const auto &[j, u] : e.u) {
            bool uj = cyclotomic_equals_scaled(exact_base_case_upsilon(d, u), u, Rational(d));
            ok = ok && uj;
            nu++;
        }
        log += " d=" + std::to_string(d) + ": " + std::to_string(e.divisors.size()) + " w_j, " + std::to_string(nu) +
               " u_j;";
    }
    r.pass = ok;
    r.detail = (ok ? "all identities exact;" : "identity failed;") + log;
    return r;
}

inline CriterionResult sic(const Options &o) {
    CriterionResult r{8, "SIC reproduction", false, "", 0};
    CVector hesse(3);
    hesse << 0.0, 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
    std::vector<double> a = oracle::base_angles(hesse);
    double hesse_err = 0;
    for (size_t i = 1; i < a.size(); i++) {
        hesse_err = std::max(hesse_err, std::abs(a[i] - 0.5));
    }
    SearchProblem p3 = equiangular_problem(RepConfig{base_case_descriptor(3), 1});
    VerifyReport v3 = verify_candidate(p3, StateVector(p3.cfg.desc.A(), hesse));
    bool hesse_ok = hesse_err < 1e-12 && v3.free && v3.classification && v3.classification->equiangular &&
                    std::abs(v3.classification->value - 0.5) < 1e-12;
    r.detail = "Hesse max |a - 1/2| = " + detail::fmt(hesse_err);
    bool search_ok = true;
    for (int64_t d : {5, 7}) {
        auto t0 = std::chrono::steady_clock::now();
        SearchProblem p = equiangular_problem(RepConfig{base_case_descriptor(d), 1});
        p.restarts = o.quick ? 5 : 20;
        p.max_iters = 5000;
        p.seed = o.seed;
        SearchReport s = optimize_fiducial(p);
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::vector<double> ang = oracle::base_angles(s.best.values);
        double dev = 0;
        for (size_t i = 1; i < ang.size(); i++) {
            dev = std::max(dev, std::abs(ang[i] * ang[i] - 1.0 / (static_cast<double>(d) + 1.0)));
        }
        search_ok = search_ok && dev < 1e-7 && secs < 600;
        r.detail += "; d=" + std::to_string(d) + " max |a^2 - 1/(d+1)| = " + detail::fmt(dev) + " in " + detail::fmt(secs) + " s";
    }
    r.pass = hesse_ok && search_ok;
    return r;
}

inline CriterionResult weil(const Options &o) {
    CriterionResult r{9, "Weil solver", false, "", 0};
    double diag = 0, inner = 0, proj = 0;
    size_t pairs = o.quick ? 10 : 50;
    for (int64_t dd : {3, 5}) {
        GhgDescriptor d = base_case_descriptor(dd);
        SchrodingerRep rep(RepConfig{d, 1});
        for (int64_t k = 1; k < dd; k++) {
            GroupHom alpha(d.A(), d.A(), {{k}});
            CMatrix T = weil_solve(rep, delta_diagonal(d, alpha));
            int64_t kinv = invmod(k, dd);
            CMatrix P = CMatrix::Zero(dd, dd);
            for (int64_t x = 0; x < dd; x++) {
                P(x, mod(kinv * x, dd)) = 1.0;
            }
            diag = std::max(diag, phase_distance(T, P));
        }
        for (const auto &h : d.elements()) {
            CMatrix T = weil_solve(rep, inner_automorphism(d, h));
            inner = std::max(inner, phase_distance(T, rep.rep_matrix(h)));
        }
        std::vector<Automorphism> aut = enumerate_aut0(d);
        std::mt19937_64 rng(o.seed + static_cast<uint64_t>(dd));
        std::uniform_int_distribution<size_t> pick(0, aut.size() - 1);
        for (size_t k = 0; k < pairs; k++) {
            const Automorphism &a = aut[pick(rng)];
            const Automorphism &b = aut[pick(rng)];
            CMatrix lhs = weil_solve(rep, b) * weil_solve(rep, a);
            proj = std::max(proj, phase_distance(lhs, weil_solve(rep, compose(b, a))));
        }
    }
    r.pass = diag < 1e-8 && inner < 1e-8 && proj < 1e-8;
    r.detail = "diagonal " + detail::fmt(diag) + ", inner " + detail::fmt(inner) + ", projectivity " + detail::fmt(proj) +
               " over " + std::to_string(pairs) + " pairs per d";
    return r;
}

inline CriterionResult even_base(const Options &) {
    CriterionResult r{10, "even Base Case d=4, r=8", false, "", 0};
    GhgDescriptor d = base_case_descriptor(4, 8);
    CentreData cd = centre_and_derived(d);
    SchrodingerRep rep(RepConfig{d, 1});
    double gen_err = 0;
    gen_err = std::max(gen_err, max_abs(rep.rep_matrix(d.make({-1}, {0}, {0})) - oracle::shift(4)));
    gen_err = std::max(gen_err, max_abs(rep.rep_matrix(d.make({0}, {1}, {0})) - oracle::clock(4)));
    gen_err = std::max(gen_err, max_abs(rep.rep_matrix(d.make({0}, {0}, {1})) -
                                        oracle::zeta(1, 8) * CMatrix::Identity(4, 4)));
    double unit = 0;
    size_t kernel = 0;
    for (const auto &h : d.elements()) {
        CMatrix M = rep.rep_matrix(h);
        unit = std::max(unit, max_abs(M.adjoint() * M - CMatrix::Identity(4, 4)));
        kernel += max_abs(M - CMatrix::Identity(4, 4)) < 1e-9;
    }
    r.pass = d.order() == 128 && cd.centre_order == 8 && gen_err < 1e-12 && unit < 1e-12 && kernel == 1;
    r.detail = "|H| = " + std::to_string(d.order()) + ", |Z| = " + std::to_string(cd.centre_order) +
               ", generator error " + detail::fmt(gen_err) + ", unitarity " + detail::fmt(unit) + ", kernel size " +
               std::to_string(kernel);
    return r;
}

/// Runs every criterion, catching library errors as failures, and writes one PASS/FAIL line per criterion.
inline std::vector<CriterionResult> run_all(const Options &o, std::ostream &out) {
    std::vector<std::function<CriterionResult(const Options &)>> all{
        group_law, characters_and_sv, fourier_duality, clinometric, automorphisms,
        arithmetic_sl2, base_eigenbasis, sic, weil, even_base};
    std::vector<double> budget{10, 30, 1e9, 120, 1e9, 300, 1e9, 1200, 1e9, 1e9};
    std::vector<CriterionResult> results;
    for (size_t k = 0; k < all.size(); k++) {
        auto t0 = std::chrono::steady_clock::now();
        CriterionResult r;
        try {
            r = all[k](o);
        } catch (const std::exception &e) {
            r.id = static_cast<int>(k + 1);
            r.name = "criterion " + std::to_string(k + 1);
            r.pass = false;
            r.detail = std::string("error: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (r.seconds > budget[k]) {
            r.pass = false;
            r.detail += "; over time budget of " + detail::fmt(budget[k]) + " s";
        }
        out << (r.pass ? "PASS" : "FAIL") << " [" << std::setw(2) << r.id << "] " << r.name << ": " << r.detail << " ("
            << detail::fmt(r.seconds) << " s)" << std::endl;
        results.push_back(r);
    }
    return results;
}

}  // namespace ghg::acceptance

#endif
