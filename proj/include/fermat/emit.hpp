#ifndef FERMAT_EMIT_HPP
#define FERMAT_EMIT_HPP

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fermat/fermatlib.hpp"
#include "fermat/serialize.hpp"

namespace fermat {

struct UnknownLabel : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct EmitRequest {
    std::string label;
    unsigned n = 1;
    std::uint64_t p = 0;  // 0 means Q
    unsigned m = 1;
    std::optional<Rational> t;
};

// Labels that depend on n and may be built over Q or F_q.
inline const std::vector<std::string>& emit_family_labels() {
    static const std::vector<std::string> l = {"F",  "AB",   "phi", "qoppa", "h", "g",         "PQ",  "Y", "Z", "Y_char2",
                                               "Z_char2", "H_pm", "W", "D_divisor", "irr", "alpha", "beta"};
    return l;
}

// Labels defined over Q only.
inline const std::vector<std::string>& emit_rational_labels() {
    static const std::vector<std::string> l = {"DNM",      "grassmann",         "surface_phi", "chi",     "cr",
                                               "cr_inv",   "gamma",             "phi_inv",     "phi_inv_displayed",
                                               "chi_inv",  "chi_inv_displayed"};
    return l;
}

// Surface maps over F_{2^m}.
inline const std::vector<std::string>& emit_char2_labels() {
    static const std::vector<std::string> l = {"alpha_c2", "beta_c2", "cr_c2", "cr_inv_c2", "alpha_inv_c2"};
    return l;
}

inline std::vector<std::string> emit_labels() {
    std::vector<std::string> all;
    for (const auto* v : {&emit_family_labels(), &emit_rational_labels(), &emit_char2_labels()}) all.insert(all.end(), v->begin(), v->end());
    for (const auto& l : detail::secdeg_text()) all.push_back(std::string("secdeg/") + l.label);
    all.push_back("secdeg/S_t");
    return all;
}

namespace detail {

inline bool contains(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

template <class K>
json emit_family(const std::string& label, const FermatContext<K>& c) {
    auto map = [](const RationalMap<K>& m) { return json{{"kind", "map"}, {"object", to_json(m)}}; };
    auto ideal = [](const Ideal<K>& I) { return json{{"kind", "ideal"}, {"object", to_json(I)}}; };
    auto poly = [](const MPoly<K>& f) { return json{{"kind", "poly"}, {"object", to_json(f)}}; };
    auto pair = [](const char* a, const MPoly<K>& f, const char* b, const MPoly<K>& g) {
        return json{{"kind", "polys"}, {"object", {{a, to_json(f)}, {b, to_json(g)}}}};
    };
    if (label == "F") return poly(fermat_cubic(c));
    if (label == "AB") {
        auto ab = build_AB(c);
        return pair("A", ab.first, "B", ab.second);
    }
    if (label == "PQ") {
        auto pq = build_char2_PQ(c);
        return pair("P", pq.first, "Q", pq.second);
    }
    if (label == "phi") return map(build_phi(c));
    if (label == "qoppa") return map(build_qoppa(c));
    if (label == "h") return map(build_h(c));
    if (label == "g") return map(build_char2_g(c));
    if (label == "Y") return ideal(ideal_Y(c));
    if (label == "Z") return ideal(ideal_Z(c));
    if (label == "Y_char2") return ideal(ideal_Y_char2(c));
    if (label == "Z_char2") return ideal(ideal_Z_char2(c));
    if (label == "H_pm") return ideal(ideal_H_pm(c));
    if (label == "W") return ideal(ideal_W(c));
    if (label == "D_divisor") return poly(D_divisor(c));
    if (label == "irr") return poly(irr_hypersurface(c));
    if (label == "alpha") return map(build_cremona(c).alpha);
    if (label == "beta") return map(build_cremona(c).beta);
    throw UnknownLabel(label);
}

}  // namespace detail

// Canonical JSON envelope {label, n, field, kind, object}; kind is map, ideal, poly or polys.
inline json emit_object(const EmitRequest& r) {
    auto known = emit_labels();
    if (!detail::contains(known, r.label)) {
        std::string list;
        for (const auto& l : known) list += (list.empty() ? "" : ", ") + l;
        throw UnknownLabel("unknown label '" + r.label + "'; known labels: " + list);
    }
    bool family = detail::contains(emit_family_labels(), r.label);
    bool char2 = detail::contains(emit_char2_labels(), r.label);
    bool char2_family = r.label == "g" || r.label == "PQ" || r.label == "Y_char2" || r.label == "Z_char2";
    std::uint64_t p = r.p;
    if (p == 0 && (char2 || char2_family)) p = 2;
    if (!family && !char2 && p != 0) throw std::invalid_argument(r.label + " is defined over Q only");
    if (char2 && p != 2) throw std::invalid_argument(r.label + " requires p = 2");
    if (r.n < 1 || r.n > 8) throw std::invalid_argument("n must be in 1..8");

    json out;
    if (family) {
        if (p == 0) {
            out = detail::emit_family(r.label, ctx_q(r.n));
            out["field"] = "QQ";
        } else {
            const auto& f = fq_make(p, r.m);
            out = detail::emit_family(r.label, ctx_fq(r.n, f));
            out["field"] = f.tag();
        }
    } else if (char2) {
        const auto& f = fq_make(2, r.m);
        auto s = build_surface_maps_char2(f);
        const auto& m = r.label == "alpha_c2" ? s.alpha : r.label == "beta_c2" ? s.beta : r.label == "cr_c2" ? s.cr
                        : r.label == "cr_inv_c2" ? s.cr_inv : s.alpha_inv;
        out = {{"kind", "map"}, {"object", to_json(m)}, {"field", f.tag()}};
    } else if (r.label.rfind("secdeg/", 0) == 0) {
        auto d = build_secdeg_data(r.t);
        const auto& l = d.get(r.label.substr(7));
        json polys = json::array();
        for (const auto& f : l.polys) polys.push_back(to_json(f));
        out = {{"kind", "polys"}, {"object", {{"vars", l.vars}, {"polys", polys}}}, {"field", "QQ"}};
        out["t"] = r.t ? json(r.t->str()) : json("symbolic");
    } else if (r.label == "DNM") {
        auto d = build_DNM(r.n);
        out = {{"kind", "polys"}, {"object", {{"D", to_json(d.D)}, {"N", to_json(d.N)}, {"M", to_json(d.M)}}}, {"field", "QQ"}};
    } else if (r.label == "grassmann") {
        out = {{"kind", "map"}, {"object", to_json(build_grassmann_param(r.n))}, {"field", "QQ"}};
    } else {
        auto s = build_surface_maps();
        const RationalMap<Rational>* m = r.label == "surface_phi" ? &s.phi : r.label == "chi" ? &s.chi : r.label == "cr" ? &s.cr
                                       : r.label == "cr_inv" ? &s.cr_inv : r.label == "gamma" ? &s.gamma
                                       : r.label == "phi_inv" ? &s.phi_inv : r.label == "phi_inv_displayed" ? &s.phi_inv_displayed
                                       : r.label == "chi_inv" ? &s.chi_inv : &s.chi_inv_displayed;
        out = {{"kind", "map"}, {"object", to_json(*m)}, {"field", "QQ"}};
    }
    json env = {{"label", r.label}, {"n", r.n}, {"field", out["field"]}, {"kind", out["kind"]}};
    if (out.contains("t")) env["t"] = out["t"];
    env["object"] = out["object"];
    return env;
}

}  // namespace fermat

#endif
