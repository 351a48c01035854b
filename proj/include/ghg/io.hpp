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

#ifndef GHG_IO_HPP
#define GHG_IO_HPP

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include <openssl/evp.h>

#include "json.hpp"

#include "ghg/arith.hpp"
#include "ghg/search.hpp"

namespace ghg {

using json = nlohmann::json;

inline constexpr const char *kVersion = "0.1.0";

namespace detail {

template <typename T>
T json_get(const json &j, const char *key, const char *who) {
    if (!j.is_object() || !j.contains(key)) {
        throw DomainError(std::string(who) + ": missing field '" + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception &e) {
        throw DomainError(std::string(who) + ": bad field '" + key + "': " + e.what());
    }
}

}  // namespace detail

inline json group_to_json(const FinAbGroup &g) { return json{{"invariant_factors", g.factors()}}; }

inline FinAbGroup group_from_json(const json &j) {
    return FinAbGroup(detail::json_get<std::vector<int64_t>>(j, "invariant_factors", "FinAbGroup"));
}

inline json element_to_json(const GroupElement &x) { return json{{"coords", x.coords}}; }

inline GroupElement element_from_json(const FinAbGroup &g, const json &j) {
    return g.make(detail::json_get<std::vector<int64_t>>(j, "coords", "GroupElement"));
}

inline json descriptor_to_json(const GhgDescriptor &d) {
    json j;
    j["A"] = group_to_json(d.A());
    j["B"] = group_to_json(d.B());
    j["C"] = group_to_json(d.C());
    j["lambda_matrix"] = d.lambda().cyclic_matrix();
    if (d.ring()) {
        json gens = json::array();
        for (size_t k = 0; k < d.ring()->num_generators(); k++) {
            gens.push_back(json{{"on_A", d.ring()->on_A[k].matrix()}, {"on_B", d.ring()->on_B[k].matrix()}});
        }
        j["ring"] = json{{"generators", gens}};
    } else {
        j["ring"] = nullptr;
    }
    return j;
}

inline GhgDescriptor descriptor_from_json(const json &j) {
    FinAbGroup A = group_from_json(detail::json_get<json>(j, "A", "descriptor"));
    FinAbGroup B = group_from_json(detail::json_get<json>(j, "B", "descriptor"));
    FinAbGroup C = group_from_json(detail::json_get<json>(j, "C", "descriptor"));
    if (C.rank() > 1) {
        throw DomainError("descriptor: C must be cyclic");
    }
    auto V = detail::json_get<std::vector<std::vector<int64_t>>>(j, "lambda_matrix", "descriptor");
    if (V.size() != A.rank()) {
        throw DomainError("descriptor: lambda_matrix needs one row per factor of A");
    }
    std::optional<RingAction> ring;
    if (j.contains("ring") && !j["ring"].is_null()) {
        RingAction ra;
        for (const auto &g : detail::json_get<json>(j["ring"], "generators", "ring")) {
            ra.on_A.emplace_back(A, A, detail::json_get<std::vector<std::vector<int64_t>>>(g, "on_A", "ring"));
            ra.on_B.emplace_back(B, B, detail::json_get<std::vector<std::vector<int64_t>>>(g, "on_B", "ring"));
        }
        ring = ra;
    }
    return GhgDescriptor::cyclic(A, B, static_cast<int64_t>(C.order()), V, ring);
}

inline json heis_to_json(const HeisElem &h) {
    return json{{"a", element_to_json(h.a)}, {"b", element_to_json(h.b)}, {"c", element_to_json(h.c)}};
}

inline HeisElem heis_from_json(const GhgDescriptor &d, const json &j) {
    return HeisElem{element_from_json(d.A(), detail::json_get<json>(j, "a", "HeisElem")),
                    element_from_json(d.B(), detail::json_get<json>(j, "b", "HeisElem")),
                    element_from_json(d.C(), detail::json_get<json>(j, "c", "HeisElem"))};
}

/// Parses "a,b,c" with one integer per cyclic factor of A, B and C in turn.
inline HeisElem heis_from_string(const GhgDescriptor &d, const std::string &s) {
    std::vector<int64_t> v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            size_t used = 0;
            v.push_back(std::stoll(tok, &used));
            if (tok.find_first_not_of(" \t", used) != std::string::npos) {
                throw std::invalid_argument(tok);
            }
        } catch (const std::exception &) {
            throw DomainError("element: cannot read integer '" + tok + "'");
        }
    }
    size_t na = d.A().rank(), nb = d.B().rank(), nc = d.C().rank();
    if (v.size() != na + nb + nc) {
        throw DomainError("element: expected " + std::to_string(na + nb + nc) + " comma-separated integers");
    }
    auto part = [&](size_t from, size_t n) { return std::vector<int64_t>(v.begin() + from, v.begin() + from + n); };
    return d.make(part(0, na), part(na, nb), part(na + nb, nc));
}

inline json complex_to_json(cdouble z) { return json::array({z.real(), z.imag()}); }

inline json vector_to_json(const CVector &v) {
    json re = json::array(), im = json::array();
    for (Eigen::Index i = 0; i < v.size(); i++) {
        re.push_back(v(i).real());
        im.push_back(v(i).imag());
    }
    return json{{"re", re}, {"im", im}};
}

inline StateVector state_from_json(const FinAbGroup &dom, const json &j) {
    auto re = detail::json_get<std::vector<double>>(j, "re", "StateVector");
    auto im = j.contains("im") ? detail::json_get<std::vector<double>>(j, "im", "StateVector")
                               : std::vector<double>(re.size(), 0.0);
    if (re.size() != im.size() || re.size() != dom.order()) {
        throw DomainError("StateVector: expected " + std::to_string(dom.order()) + " real and imaginary parts");
    }
    CVector v(static_cast<Eigen::Index>(re.size()));
    for (size_t i = 0; i < re.size(); i++) {
        v(static_cast<Eigen::Index>(i)) = cdouble(re[i], im[i]);
    }
    return StateVector(dom, v);
}

inline json matrix_to_json(const CMatrix &M) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < M.rows(); i++) {
        json row = json::array();
        for (Eigen::Index j = 0; j < M.cols(); j++) {
            row.push_back(complex_to_json(M(i, j)));
        }
        rows.push_back(row);
    }
    return rows;
}

inline json automorphism_to_json(const Automorphism &a) {
    return json{{"eta_matrix", a.eta.matrix()}, {"sp_matrix", a.sp.matrix()}};
}

inline Automorphism automorphism_from_json(const GhgDescriptor &d, const json &j) {
    GroupHom eta(d.abar(), d.C(), detail::json_get<std::vector<std::vector<int64_t>>>(j, "eta_matrix", "automorphism"));
    SpElement sp = sp_from_matrix(d, detail::json_get<std::vector<std::vector<int64_t>>>(j, "sp_matrix", "automorphism"));
    return auto_from_pair(d, eta, sp);
}

inline ArithConfig arith_config_from_json(const json &j) {
    ArithConfig c;
    c.min_poly = detail::json_get<std::vector<int64_t>>(j, "min_poly", "arith config");
    c.I = detail::json_get<std::vector<std::string>>(j, "I", "arith config");
    c.frak_f = detail::json_get<std::vector<std::string>>(j, "frak_f", "arith config");
    if (j.contains("r") && !j["r"].is_null()) {
        c.r = detail::json_get<int64_t>(j, "r", "arith config");
    }
    return c;
}

inline json partition_to_json(const OrbitPartition &p) { return json(p); }

inline OrbitPartition partition_from_json(const json &j) {
    try {
        return j.get<OrbitPartition>();
    } catch (const json::exception &e) {
        throw DomainError(std::string("orbit partition: ") + e.what());
    }
}

inline json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw DomainError("cannot open " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error &e) {
        throw DomainError("malformed JSON in " + path + ": " + e.what());
    }
}

inline std::string read_file_bytes(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DomainError("cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DomainError("cannot write " + path);
    }
    out << text;
}

inline std::string sha256_hex(const std::string &data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw InternalError("sha256: digest failed");
    }
    std::ostringstream ss;
    for (unsigned int i = 0; i < len; i++) {
        ss << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    }
    return ss.str();
}

/// Provenance block over the deterministic parts of a run; wall time is kept out of it.
struct RunManifest {
    std::string command;
    uint64_t seed = 0;
    json input_digests = json::object();

    void add_input(const std::string &path) { input_digests[path] = sha256_hex(read_file_bytes(path)); }

    /// {"manifest": {..., "digest"}, "result": result}, with the digest over the manifest fields and result.
    json wrap(const json &result) const {
        json m{{"command", command}, {"version", kVersion}, {"seed", seed}, {"input_digests", input_digests}};
        json body{{"manifest", m}, {"result", result}};
        m["digest"] = sha256_hex(body.dump());
        return json{{"manifest", m}, {"result", result}};
    }
};

}  // namespace ghg

#endif
