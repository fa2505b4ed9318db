#ifndef FERMAT_SERIALIZE_HPP
#define FERMAT_SERIALIZE_HPP

#include <json.hpp>

#include "fermat/projgeo.hpp"

namespace fermat {

using json = nlohmann::ordered_json;

inline Rational parse_scalar(const Rational&, const std::string& s) { return Rational::parse(s); }
inline QuadExt parse_scalar(const QuadExt&, const std::string& s) { return QuadExt::parse(s); }
inline FqElem parse_scalar(const FqElem& one, const std::string& s) { return FqElem::parse(one.field(), s); }

template <class K>
json to_json(const MPoly<K>& f) {
    json terms = json::array();
    for (const auto& t : f.terms()) {
        json e = json::array();
        for (std::size_t v = 0; v < f.nvars(); ++v) e.push_back(t.m[v]);
        terms.push_back({{"exps", e}, {"coeff", t.c.str()}});
    }
    return {{"vars", f.nvars()}, {"field", f.one().field_tag()}, {"terms", terms}};
}

// one fixes the coefficient field (and, for F_q, the descriptor).
template <class K>
MPoly<K> poly_from_json(const json& j, const K& one) {
    if (j.at("field").get<std::string>() != one.field_tag()) throw std::invalid_argument("poly_from_json: field mismatch");
    std::size_t n = j.at("vars").get<std::size_t>();
    std::vector<typename MPoly<K>::Term> terms;
    for (const auto& t : j.at("terms")) {
        const auto& e = t.at("exps");
        if (e.size() != n) throw std::invalid_argument("poly_from_json: exponent length");
        Mono m;
        for (std::size_t v = 0; v < n; ++v) m.set(v, e[v].get<unsigned>());
        terms.push_back({m, parse_scalar(one, t.at("coeff").get<std::string>())});
    }
    return MPoly<K>::from_terms(n, one, std::move(terms));
}

template <class K>
json to_json(const RationalMap<K>& m) {
    json comps = json::array();
    for (const auto& f : m.comps) comps.push_back(to_json(f));
    return {{"source_dim", m.src_dim}, {"target_dim", m.tgt_dim}, {"degree", m.degree()}, {"components", comps}};
}

template <class K>
RationalMap<K> map_from_json(const json& j, const K& one) {
    std::vector<MPoly<K>> comps;
    for (const auto& c : j.at("components")) comps.push_back(poly_from_json(c, one));
    RationalMap<K> m(std::move(comps));
    if (m.src_dim != j.at("source_dim").get<std::size_t>() || m.tgt_dim != j.at("target_dim").get<std::size_t>())
        throw std::invalid_argument("map_from_json: dimension mismatch");
    return m;
}

template <class K>
json to_json(const Ideal<K>& I) {
    json gens = json::array();
    for (const auto& f : I.gens) gens.push_back(to_json(f));
    return {{"vars", I.nvars}, {"generators", gens}};
}

template <class K>
Ideal<K> ideal_from_json(const json& j, const K& one) {
    std::vector<MPoly<K>> gens;
    for (const auto& g : j.at("generators")) gens.push_back(poly_from_json(g, one));
    return Ideal<K>(j.at("vars").get<std::size_t>(), std::move(gens));
}

inline json to_json(const IntPoint& p) {
    json a = json::array();
    for (const auto& x : p) a.push_back(x.get_str());
    return a;
}

}  // namespace fermat

#endif
