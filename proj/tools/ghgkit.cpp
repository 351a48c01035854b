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

#include <chrono>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "ghg/acceptance.hpp"
#include "ghg/io.hpp"

namespace {

using ghg::json;

enum ExitCode { kOk = 0, kFailure = 1, kDomain = 2, kNumerical = 3, kInternal = 4 };

struct Globals {
    std::string format = "json";
    unsigned threads = 1;
    uint64_t seed = 1;
};

/// A file as loaded by the CLI: the payload, unwrapped from {"manifest", "result"} if present.
json load_payload(const std::string &path) {
    json j = ghg::read_json_file(path);
    if (j.is_object() && j.contains("manifest") && j.contains("result")) {
        return j["result"];
    }
    return j;
}

std::string format_complex(ghg::cdouble z) {
    std::ostringstream ss;
    ss << std::setprecision(6) << std::fixed << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
    return ss.str();
}

/// Writes the wrapped result to `out` (or stdout) and the wall-time sidecar next to a file output.
void emit(const Globals &g, const ghg::RunManifest &m, const json &result, const std::string &out,
          const std::string &text, std::chrono::steady_clock::time_point t0) {
    json wrapped = m.wrap(result);
    if (!out.empty()) {
        ghg::write_text_file(out, wrapped.dump(2) + "\n");
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        json side{{"digest", wrapped["manifest"]["digest"]}, {"wall_time_seconds", secs}};
        ghg::write_text_file(out + ".manifest.json", side.dump(2) + "\n");
    }
    if (g.format == "text") {
        std::cout << text;
    } else if (out.empty()) {
        std::cout << wrapped.dump(2) << "\n";
    } else {
        std::cout << wrapped["manifest"].dump(2) << "\n";
    }
}

ghg::OrbitPartition load_partition(const ghg::GhgDescriptor &d, const std::string &mode, const std::string &file) {
    if (mode == "divisor") {
        return ghg::partition_by_order(d);
    }
    if (mode == "autgroup") {
        return ghg::partition_by_sp(d, ghg::enumerate_sp(d));
    }
    if (mode == "file") {
        if (file.empty()) {
            throw ghg::DomainError("--orbits file needs --orbits-file");
        }
        json j = load_payload(file);
        return ghg::partition_from_json(j.is_object() && j.contains("orbits") ? j["orbits"] : j);
    }
    throw ghg::DomainError("unknown orbit mode '" + mode + "'");
}

int cmd_arith_build(const Globals &g, const std::string &config, const std::string &out) {
    auto t0 = std::chrono::steady_clock::now();
    ghg::RunManifest m{"arith build", g.seed};
    m.add_input(config);
    ghg::ArithGhg a = ghg::arith_from_config(ghg::arith_config_from_json(load_payload(config)));
    ghg::NdcReport ndc = ghg::check_ndc(a.desc);
    if (!ndc.ndc) {
        throw ghg::InternalError("arith build: descriptor fails the non-degeneracy check");
    }
    json result = ghg::descriptor_to_json(a.desc);
    json info{{"f", a.f},
              {"r", a.r},
              {"norm_frak_f", a.frak_f.norm().str()},
              {"norm_different", a.different.norm().str()}};
    if (a.K.degree() > 1 || a.r == a.f) {
        ghg::ResidueRing R = ghg::residue_ring(a);
        ghg::BasisPick p = ghg::basis_pick(a, R);
        info["x"] = a.K.format(p.x);
        info["y"] = a.K.format(p.y);
        info["xbar"] = ghg::element_to_json(p.xbar);
        info["ybar"] = ghg::element_to_json(p.ybar);
    }
    result["arith"] = info;
    std::ostringstream text;
    text << "A = " << a.desc.A().str() << ", B = " << a.desc.B().str() << ", C = " << a.desc.C().str()
         << ", f = " << a.f << ", r = " << a.r << "\n";
    emit(g, m, result, out, text.str(), t0);
    return kOk;
}

int cmd_ghg_rep(const Globals &g, const std::string &desc_path, const std::string &element, const std::string &side,
                int64_t u, const std::string &out) {
    auto t0 = std::chrono::steady_clock::now();
    ghg::RunManifest m{"ghg rep", g.seed};
    m.add_input(desc_path);
    ghg::GhgDescriptor d = ghg::descriptor_from_json(load_payload(desc_path));
    ghg::HeisElem h = ghg::heis_from_string(d, element);
    if (side != "left" && side != "right") {
        throw ghg::DomainError("--side must be left or right");
    }
    ghg::SchrodingerRep rep(ghg::RepConfig{d, u});
    ghg::CMatrix M = rep.rep_matrix(h, side == "left" ? ghg::Side::Left : ghg::Side::Right);
    json result{{"element", ghg::heis_to_json(h)}, {"side", side}, {"u", u}, {"matrix", ghg::matrix_to_json(M)}};
    std::ostringstream text;
    for (Eigen::Index i = 0; i < M.rows(); i++) {
        for (Eigen::Index j = 0; j < M.cols(); j++) {
            text << (j ? "  " : "") << format_complex(M(i, j));
        }
        text << "\n";
    }
    emit(g, m, result, out, text.str(), t0);
    return kOk;
}

int cmd_aut_enumerate(const Globals &g, const std::string &desc_path, bool count_only, const std::string &out) {
    auto t0 = std::chrono::steady_clock::now();
    ghg::RunManifest m{"ghg aut enumerate", g.seed};
    m.add_input(desc_path);
    ghg::GhgDescriptor d = ghg::descriptor_from_json(load_payload(desc_path));
    std::vector<ghg::SpElement> sp = ghg::enumerate_sp(d);
    size_t n_eta = ghg::hom_enumerate(d.abar(), d.C()).size();
    json result{{"sp_order", sp.size()}, {"hom_order", n_eta}, {"aut0_order", sp.size() * n_eta}};
    if (!count_only) {
        json list = json::array();
        for (const auto &a : ghg::enumerate_aut0(d)) {
            list.push_back(ghg::automorphism_to_json(a));
        }
        result["automorphisms"] = list;
    }
    std::ostringstream text;
    text << "|Sp| = " << sp.size() << ", |Hom(A+B, C)| = " << n_eta << ", |Aut0| = " << sp.size() * n_eta << "\n";
    emit(g, m, result, out, text.str(), t0);
    return kOk;
}

ghg::StateVector load_fiducial(const ghg::GhgDescriptor &d, const std::string &path) {
    json j = load_payload(path);
    if (j.is_object() && j.contains("best")) {
        j = j["best"];
    }
    return ghg::state_from_json(d.A(), j);
}

json classification_json(const ghg::Classification &c) {
    return json{{"equiangular", c.equiangular},
                {"value", c.value},
                {"equiangular_spread", c.equiangular_spread},
                {"regular", c.regular},
                {"orbit_means", c.orbit_means},
                {"orbit_spreads", c.orbit_spreads}};
}

int cmd_bouquet_verify(const Globals &g, const std::string &desc_path, const std::string &fid_path,
                       const std::string &section, const std::string &orbits, const std::string &orbits_file,
                       int64_t u, const std::string &out) {
    auto t0 = std::chrono::steady_clock::now();
    ghg::RunManifest m{"bouquet verify", g.seed};
    m.add_input(desc_path);
    m.add_input(fid_path);
    ghg::GhgDescriptor d = ghg::descriptor_from_json(load_payload(desc_path));
    ghg::require_ndc(d, "bouquet verify");
    ghg::RepConfig cfg{d, u};
    ghg::SchrodingerRep rep(cfg);
    ghg::Line line = ghg::make_line(load_fiducial(d, fid_path));
    ghg::Section sec = section.empty() ? ghg::default_section(d)
                       : section == "D"  ? ghg::Section::Displacement
                       : section == "zero"
                           ? ghg::Section::ZeroLift
                           : throw ghg::DomainError("--section must be D or zero");
    ghg::Bouquet y = ghg::orbit_and_stabilizer(rep, line);
    ghg::OverlapTable t = ghg::overlap_table(rep, line, sec);
    ghg::ClinometricReport c = ghg::clinometric_check(rep, line);
    double tol = ghg::default_tolerance();
    std::map<std::string, int> hist;
    for (size_t i = 1; i < t.angles.size(); i++) {
        std::ostringstream key;
        key << std::setprecision(8) << std::fixed << t.angles[i];
        hist[key.str()]++;
    }
    json result{{"free", y.is_free()},
                {"stabilizer_order", y.stabilizer.size()},
                {"orbit_size", y.lines.size()},
                {"section", sec == ghg::Section::Displacement ? "D" : "zero"},
                {"angles", t.angles},
                {"angle_histogram", hist},
                {"clinometric", {{"residual", c.residual}, {"sum", c.sum}, {"expected", c.expected}}}};
    std::ostringstream text;
    text << "free: " << (y.is_free() ? "yes" : "no") << ", stabilizer order " << y.stabilizer.size()
         << ", clinometric residual " << c.residual << "\n";
    if (y.is_free() && d.abar().order() == d.s() * d.s()) {
        ghg::OrbitPartition part = load_partition(d, orbits, orbits_file);
        ghg::Classification cl = ghg::classify(rep, y, part);
        result["classification"] = classification_json(cl);
        text << "equiangular: " << (cl.equiangular ? "yes" : "no") << " (value " << cl.value << ", spread "
             << cl.equiangular_spread << "), regular: " << (cl.regular ? "yes" : "no") << "\n";
        std::vector<ghg::SpElement> cand = ghg::enumerate_sp(d);
        ghg::SymmetryReport sym = ghg::symmetry_group(rep, y, cand, g.seed);
        json gens = json::array();
        for (size_t k : sym.members) {
            gens.push_back(cand[k].matrix());
        }
        result["symmetry"] = {{"order", sym.members.size()},
                              {"elements", gens},
                              {"invariance_residual", sym.invariance_residual}};
        text << "symmetry group order " << sym.members.size() << "\n";
    } else {
        result["classification"] = nullptr;
        text << "classification refused: bouquet is not free or |A + B| != s^2\n";
    }
    emit(g, m, result, out, text.str(), t0);
    if (c.residual > 1e3 * tol || std::abs(c.sum - c.expected) > 1e3 * tol) {
        throw ghg::NumericalError("clinometric relation violated: residual " + std::to_string(c.residual));
    }
    return kOk;
}

int cmd_bouquet_search(const Globals &g, const std::string &desc_path, const std::string &mode,
                       const std::string &targets_path, size_t restarts, size_t max_iters, int64_t u,
                       const std::string &out) {
    auto t0 = std::chrono::steady_clock::now();
    ghg::RunManifest m{"bouquet search", g.seed};
    m.add_input(desc_path);
    ghg::GhgDescriptor d = ghg::descriptor_from_json(load_payload(desc_path));
    ghg::RepConfig cfg{d, u};
    ghg::SearchProblem p;
    if (mode == "equiangular") {
        p = ghg::equiangular_problem(cfg);
    } else if (mode == "regular") {
        if (targets_path.empty()) {
            throw ghg::DomainError("regular mode needs --targets");
        }
        m.add_input(targets_path);
        json t = load_payload(targets_path);
        std::string orbits = t.value("orbits_mode", std::string("file"));
        ghg::OrbitPartition part = orbits == "file" ? ghg::partition_from_json(t.at("orbits"))
                                                    : load_partition(d, orbits, "");
        p = ghg::regular_problem(cfg, part, t.at("targets").get<std::vector<double>>());
    } else {
        throw ghg::DomainError("--mode must be equiangular or regular");
    }
    p.restarts = restarts;
    p.max_iters = max_iters;
    p.seed = g.seed;
    p.threads = g.threads;
    ghg::SearchReport r = ghg::optimize_fiducial(p);
    ghg::VerifyReport v = ghg::verify_candidate(p, r.best);
    json result{{"mode", mode},
                {"restarts", restarts},
                {"max_iters", max_iters},
                {"best", ghg::vector_to_json(r.best.values)},
                {"objective", r.objective},
                {"best_restart", r.best_restart},
                {"iterations", r.iterations},
                {"restart_objectives", r.restart_objectives},
                {"orbit_spreads", r.orbit_spreads},
                {"max_target_deviation", r.max_target_deviation},
                {"clinometric_residual", r.clinometric_residual},
                {"verdict",
                 {{"free", v.free},
                  {"meets_targets", v.meets_targets},
                  {"classification", v.classification ? classification_json(*v.classification) : json(nullptr)}}}};
    std::ostringstream text;
    text << "objective " << r.objective << ", max |a^2 - t| " << r.max_target_deviation << ", meets targets: "
         << (v.meets_targets ? "yes" : "no") << "\n";
    emit(g, m, result, out, text.str(), t0);
    return kOk;
}

int cmd_selftest(bool quick) {
    ghg::acceptance::Options o;
    o.quick = quick;
    auto results = ghg::acceptance::run_all(o, std::cout);
    for (const auto &r : results) {
        if (!r.pass) {
            return kFailure;
        }
    }
    return kOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"ghgkit: generalized Heisenberg groups, Schrodinger representations and bouquets"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--threads", g.threads, "Worker threads for restarts")->check(CLI::PositiveNumber);
    app.add_option("--seed", g.seed, "Seed for all randomness");

    std::function<int()> action;

    auto *arith = app.add_subcommand("arith", "Number-field GHGs")->require_subcommand(1);
    auto *arith_build = arith->add_subcommand("build", "Build H[I, frak_f, r] from a field config");
    std::string config, out;
    arith_build->add_option("--config", config, "Field and ideal config")->required();
    arith_build->add_option("--out", out, "Descriptor output path");
    arith_build->callback([&]() { action = [&]() { return cmd_arith_build(g, config, out); }; });

    auto *ghgc = app.add_subcommand("ghg", "Group data")->require_subcommand(1);
    auto *rep = ghgc->add_subcommand("rep", "Matrix of an element under sigma_p or tau_p");
    std::string desc, element, side = "left";
    int64_t u = 1;
    rep->add_option("--desc", desc, "Descriptor")->required();
    rep->add_option("--element", element, "a,b,c coordinates")->required();
    rep->add_option("--side", side, "left (sigma) or right (tau)");
    rep->add_option("--u", u, "Character exponent");
    rep->add_option("--out", out, "Output path");
    rep->callback([&]() { action = [&]() { return cmd_ghg_rep(g, desc, element, side, u, out); }; });

    auto *aut = ghgc->add_subcommand("aut", "Automorphisms")->require_subcommand(1);
    auto *aut_enum = aut->add_subcommand("enumerate", "Enumerate automorphisms fixing the centre");
    bool count_only = false;
    aut_enum->add_option("--desc", desc, "Descriptor")->required();
    aut_enum->add_flag("--count-only", count_only, "Print only the counts");
    aut_enum->add_option("--out", out, "Output path");
    aut_enum->callback([&]() { action = [&]() { return cmd_aut_enumerate(g, desc, count_only, out); }; });

    auto *bq = app.add_subcommand("bouquet", "Bouquets of lines")->require_subcommand(1);
    auto *verify = bq->add_subcommand("verify", "Analyse the bouquet of a fiducial");
    std::string fiducial, section, orbits = "autgroup", orbits_file;
    verify->add_option("--desc", desc, "Descriptor")->required();
    verify->add_option("--fiducial", fiducial, "Fiducial state")->required();
    verify->add_option("--section", section, "Section: D or zero");
    verify->add_option("--orbits", orbits, "Orbit partition")->check(CLI::IsMember({"autgroup", "divisor", "file"}));
    verify->add_option("--orbits-file", orbits_file, "Partition file for --orbits file");
    verify->add_option("--u", u, "Character exponent");
    verify->add_option("--out", out, "Output path");
    verify->callback(
        [&]() { action = [&]() { return cmd_bouquet_verify(g, desc, fiducial, section, orbits, orbits_file, u, out); }; });

    auto *search = bq->add_subcommand("search", "Search for equiangular or regular fiducials");
    std::string mode = "equiangular", targets;
    size_t restarts = 20, max_iters = 5000;
    search->add_option("--desc", desc, "Descriptor")->required();
    search->add_option("--mode", mode, "equiangular or regular")->check(CLI::IsMember({"equiangular", "regular"}));
    search->add_option("--targets", targets, "Per-orbit targets");
    search->add_option("--restarts", restarts, "Number of restarts");
    search->add_option("--max-iters", max_iters, "Iterations per restart");
    search->add_option("--seed", g.seed, "Seed for all randomness");
    search->add_option("--u", u, "Character exponent");
    search->add_option("--out", out, "Report output path");
    search->callback([&]() {
        action = [&]() { return cmd_bouquet_search(g, desc, mode, targets, restarts, max_iters, u, out); };
    });

    auto *self = app.add_subcommand("selftest", "Run the acceptance suite");
    bool quick = false;
    self->add_flag("--quick", quick, "Reduced sample counts");
    self->callback([&]() { action = [&]() { return cmd_selftest(quick); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kDomain;
    }
    try {
        return action();
    } catch (const ghg::DomainError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDomain;
    } catch (const ghg::NumericalError &e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumerical;
    } catch (const ghg::InternalError &e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    } catch (const std::exception &e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
}
