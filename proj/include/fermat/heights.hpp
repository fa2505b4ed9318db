#ifndef FERMAT_HEIGHTS_HPP
#define FERMAT_HEIGHTS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "fermat/projgeo.hpp"
#include "fermat/serialize.hpp"

namespace fermat {

// Calls fn on every reduced point of P^dim with height <= B: first nonzero entry positive, gcd 1.
// Order is lexicographic on the entries, each running from -B to B.
template <class Fn>
void for_each_primitive_point(std::size_t dim, std::uint64_t B, Fn&& fn) {
    if (B < 1) throw std::invalid_argument("for_each_primitive_point: B must be >= 1");
    long b = static_cast<long>(B);
    std::vector<long> x(dim + 1, -b);
    IntPoint p(dim + 1);
    for (;;) {
        std::size_t lead = 0;
        while (lead <= dim && x[lead] == 0) ++lead;
        if (lead <= dim && x[lead] > 0) {
            mpz_class g = 0;
            for (long v : x) g = gcd(g, mpz_class(v));
            if (g == 1) {
                for (std::size_t i = 0; i <= dim; ++i) p[i] = x[i];
                fn(static_cast<const IntPoint&>(p));
            }
        }
        std::size_t i = dim + 1;
        while (i > 0) {
            --i;
            if (x[i] < b) {
                ++x[i];
                break;
            }
            x[i] = -b;
            if (i == 0) return;
        }
    }
}

inline std::vector<IntPoint> enumerate_primitive_points(std::size_t dim, std::uint64_t B) {
    std::vector<IntPoint> out;
    for_each_primitive_point(dim, B, [&](const IntPoint& p) { out.push_back(p); });
    return out;
}

// Largest b with b^d <= B.
inline std::uint64_t integer_root(std::uint64_t B, unsigned d) {
    if (d == 0) throw std::invalid_argument("integer_root: d = 0");
    std::uint64_t b = static_cast<std::uint64_t>(std::pow(static_cast<long double>(B), 1.0L / d));
    auto fits = [&](std::uint64_t c) {
        mpz_class v;
        mpz_ui_pow_ui(v.get_mpz_t(), c, d);
        return v <= mpz_class(std::to_string(B));
    };
    while (b > 0 && !fits(b)) --b;
    while (fits(b + 1)) ++b;
    return b;
}

// ht_{-K}(p) = (sum q_i^2)^{(N+1-d)/2} for a degree-d hypersurface in P^N.
inline double anticanonical_height(const IntPoint& q, unsigned degree = 3) {
    mpz_class s = 0;
    for (const auto& x : q) s += x * x;
    double e = (static_cast<double>(q.size()) - degree) / 2.0;
    return std::pow(s.get_d(), e);
}

// C with height(Φ(x)) <= C·height(x)^d: after clearing the common denominator L of all coefficients,
// the largest sum of absolute coefficients of a component.
inline mpz_class coefficient_bound(const RationalMap<Rational>& m) {
    mpz_class L = 1;
    for (const auto& f : m.comps)
        for (const auto& t : f.terms()) L = lcm(L, t.c.den());
    mpz_class C = 0;
    for (const auto& f : m.comps) {
        mpz_class s = 0;
        for (const auto& t : f.terms()) s += abs(t.c.num()) * (L / t.c.den());
        C = std::max(C, s);
    }
    return C;
}

struct HeightRow {
    std::uint64_t B = 0;
    std::uint64_t source_bound = 0;
    std::uint64_t count = 0;
    double max_anticanonical_height = 0;
};

struct HeightScan {
    std::string label;
    std::vector<HeightRow> rows;
    std::optional<double> exponent;
    std::optional<double> residual;
    std::uint64_t indeterminate = 0;
};

struct PowerFit {
    double slope = 0, intercept = 0, residual = 0;
};

// Least-squares line through (log x, log y); residual is the RMS deviation in log y.
inline PowerFit fit_power_law(const std::vector<std::pair<double, double>>& data) {
    if (data.size() < 3) throw std::invalid_argument("fit_power_law: need at least 3 points");
    double n = static_cast<double>(data.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : data) {
        if (!(x > 0) || !(y > 0)) throw std::invalid_argument("fit_power_law: values must be positive");
        double lx = std::log(x), ly = std::log(y);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    double den = n * sxx - sx * sx;
    if (std::fabs(den) < 1e-12 * std::max(1.0, n * sxx)) throw std::invalid_argument("fit_power_law: degenerate abscissae");
    PowerFit f;
    f.slope = (n * sxy - sx * sy) / den;
    f.intercept = (sy - f.slope * sx) / n;
    double r = 0;
    for (auto [x, y] : data) {
        double e = std::log(y) - (f.intercept + f.slope * std::log(x));
        r += e * e;
    }
    f.residual = std::sqrt(r / n);
    return f;
}

inline double fit_exponent(const HeightScan& scan) {
    std::vector<std::pair<double, double>> d;
    for (const auto& r : scan.rows) {
        if (r.count == 0) throw std::invalid_argument("fit_exponent: zero count at B = " + std::to_string(r.B));
        d.push_back({static_cast<double>(r.B), static_cast<double>(r.count)});
    }
    return fit_power_law(d).slope;
}

struct ScanOptions {
    unsigned threads = 0;
};

// Pushes every source point of height <= floor(B^{1/d}) through Φ and counts distinct reduced images on {F = 0}.
inline HeightScan scan_image_counts(const std::string& label, const RationalMap<Rational>& phi, const MPoly<Rational>& F,
                                    const std::vector<std::uint64_t>& Bs, const ScanOptions& opt = {}) {
    if (Bs.empty()) throw std::invalid_argument("scan_image_counts: empty B list");
    for (std::size_t i = 1; i < Bs.size(); ++i)
        if (Bs[i] <= Bs[i - 1]) throw std::invalid_argument("scan_image_counts: B list must be increasing");
    if (F.nvars() != phi.tgt_dim + 1) throw std::invalid_argument("scan_image_counts: F arity mismatch");
    unsigned d = static_cast<unsigned>(phi.degree());
    std::uint64_t bmax = integer_root(Bs.back(), d);
    std::vector<IntPoint> src;
    if (bmax >= 1) src = enumerate_primitive_points(phi.src_dim, bmax);

    // image -> smallest source height reaching it
    using Hit = std::pair<IntPoint, std::uint64_t>;
    unsigned nt = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
    nt = static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(nt, src.size() / 256 + 1)));
    std::vector<std::vector<Hit>> hits(nt);
    std::vector<std::uint64_t> misses(nt, 0);
    std::vector<std::string> errors(nt);
    auto work = [&](unsigned k) {
        try {
            for (std::size_t i = k; i < src.size(); i += nt) {
                auto img = map_eval_reduced(phi, src[i]);
                if (!img) {
                    ++misses[k];
                    continue;
                }
                if (!F.eval(to_rational(*img)).is_zero())
                    throw std::logic_error("scan_image_counts: image off the hypersurface for " + label);
                hits[k].push_back({std::move(*img), height(src[i]).get_ui()});
            }
        } catch (const std::exception& e) {
            errors[k] = e.what();
        }
    };
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < nt; ++k) pool.emplace_back(work, k);
    work(0);
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (!e.empty()) throw std::logic_error(e);

    std::map<IntPoint, std::uint64_t> first;
    for (auto& part : hits)
        for (auto& [img, h] : part) {
            auto [it, fresh] = first.emplace(img, h);
            if (!fresh) it->second = std::min(it->second, h);
        }
    mpz_class C = coefficient_bound(phi);
    HeightScan scan;
    scan.label = label;
    for (auto m : misses) scan.indeterminate += m;
    for (std::uint64_t B : Bs) {
        HeightRow row{B, integer_root(B, d), 0, 0};
        mpz_class cap = C * mpz_class(std::to_string(B));
        for (const auto& [img, h] : first) {
            if (h > row.source_bound || height(img) > cap) continue;
            ++row.count;
            row.max_anticanonical_height = std::max(row.max_anticanonical_height, anticanonical_height(img));
        }
        scan.rows.push_back(row);
    }
    std::vector<std::pair<double, double>> data;
    for (const auto& r : scan.rows)
        if (r.count > 0) data.push_back({static_cast<double>(r.B), static_cast<double>(r.count)});
    if (data.size() >= 3) {
        auto f = fit_power_law(data);
        scan.exponent = f.slope;
        scan.residual = f.residual;
    }
    return scan;
}

// Fraction of sampled pairs of distinct source points (height <= bound) with distinct images.
inline double injectivity_rate(const RationalMap<Rational>& phi, std::uint64_t bound, std::size_t pairs, std::uint64_t seed) {
    auto src = enumerate_primitive_points(phi.src_dim, bound);
    std::vector<std::pair<IntPoint, IntPoint>> defined;
    for (const auto& p : src)
        if (auto img = map_eval_reduced(phi, p)) defined.push_back({p, *img});
    if (defined.size() < 2) throw std::invalid_argument("injectivity_rate: fewer than two defined source points");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, defined.size() - 1);
    std::size_t distinct = 0;
    for (std::size_t k = 0; k < pairs; ++k) {
        std::size_t i = pick(rng), j = pick(rng);
        while (j == i) j = pick(rng);
        distinct += defined[i].second != defined[j].second;
    }
    return static_cast<double>(distinct) / static_cast<double>(pairs);
}

// ♯X^2_B(Q): reduced points of x0^3+x1^3+x2^3+x3^3 = 0 with height <= B; x3 is solved as an exact cube root.
inline std::uint64_t count_fermat_surface_points(std::uint64_t B) {
    long b = static_cast<long>(B);
    std::uint64_t count = 0;
    auto icbrt = [](long long s) -> std::optional<long long> {
        long long a = s < 0 ? -s : s;
        long long r = static_cast<long long>(std::llround(std::cbrt(static_cast<long double>(a))));
        for (long long c = std::max(0LL, r - 1); c <= r + 1; ++c)
            if (c * c * c == a) return s < 0 ? -c : c;
        return std::nullopt;
    };
    for (long x0 = -b; x0 <= b; ++x0)
        for (long x1 = -b; x1 <= b; ++x1)
            for (long x2 = -b; x2 <= b; ++x2) {
                long long s = 1LL * x0 * x0 * x0 + 1LL * x1 * x1 * x1 + 1LL * x2 * x2 * x2;
                auto r = icbrt(s);
                if (!r) continue;
                long long x3 = -*r;
                if (x3 > b || x3 < -b) continue;
                long long v[4] = {x0, x1, x2, x3};
                int lead = 0;
                while (lead < 4 && v[lead] == 0) ++lead;
                if (lead == 4 || v[lead] < 0) continue;
                long long g = 0;
                for (long long c : v) g = std::gcd(g, c < 0 ? -c : c);
                count += g == 1;
            }
    return count;
}

inline void write_height_csv(std::ostream& os, const HeightScan& s) {
    os << "B,source_bound,count\n";
    for (const auto& r : s.rows) os << r.B << ',' << r.source_bound << ',' << r.count << '\n';
}

inline json to_json(const HeightScan& s) {
    json rows = json::array();
    for (const auto& r : s.rows)
        rows.push_back({{"B", r.B}, {"source_bound", r.source_bound}, {"count", r.count},
                        {"max_anticanonical_height", r.max_anticanonical_height}});
    json j = {{"label", s.label}, {"rows", rows}, {"indeterminate", s.indeterminate}};
    j["exponent"] = s.exponent ? json(*s.exponent) : json(nullptr);
    j["residual"] = s.residual ? json(*s.residual) : json(nullptr);
    return j;
}

}  // namespace fermat

#endif
