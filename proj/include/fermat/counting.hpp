#ifndef FERMAT_COUNTING_HPP
#define FERMAT_COUNTING_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "fermat/fermatlib.hpp"

namespace fermat {

struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultBudget = 100000000ULL;

// FERMAT_BUDGET overrides the default cap on enumerated points.
inline std::uint64_t enumeration_budget() {
    if (const char* s = std::getenv("FERMAT_BUDGET")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(s, &end, 10);
        if (end != s && *end == '\0' && v > 0) return v;
    }
    return kDefaultBudget;
}

// |P^N(F_q)|, saturating at UINT64_MAX.
inline std::uint64_t projective_space_size(std::size_t N, std::uint64_t q) {
    std::uint64_t total = 0, pw = 1;
    for (std::size_t i = 0; i <= N; ++i) {
        if (total > UINT64_MAX - pw) return UINT64_MAX;
        total += pw;
        if (i < N && pw > UINT64_MAX / q) return UINT64_MAX;
        pw *= q;
    }
    return total;
}

// F_q arithmetic on element codes: plain residues for prime fields, lookup tables otherwise.
class FqTable {
public:
    static constexpr std::uint64_t kMaxTableOrder = 1024;

    explicit FqTable(const FieldDescriptor& f) : f_(&f), q_(static_cast<std::uint32_t>(f.q)), prime_(f.m == 1) {
        if (prime_) {
            if (f.q > (1ULL << 31)) throw std::invalid_argument("FqTable: prime too large");
            return;
        }
        if (f.q > kMaxTableOrder) throw std::invalid_argument("FqTable: extension field order above " + std::to_string(kMaxTableOrder));
        add_.resize(std::size_t(q_) * q_);
        mul_.resize(std::size_t(q_) * q_);
        for (std::uint32_t a = 0; a < q_; ++a)
            for (std::uint32_t b = 0; b < q_; ++b) {
                FqElem x(f, a), y(f, b);
                add_[std::size_t(a) * q_ + b] = static_cast<std::uint16_t>((x + y).code());
                mul_[std::size_t(a) * q_ + b] = static_cast<std::uint16_t>((x * y).code());
            }
    }
    std::uint32_t q() const { return q_; }
    const FieldDescriptor& field() const { return *f_; }
    std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
        if (prime_) {
            std::uint32_t s = a + b;
            return s >= q_ ? s - q_ : s;
        }
        return add_[std::size_t(a) * q_ + b];
    }
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
        if (prime_) return static_cast<std::uint32_t>(std::uint64_t(a) * b % q_);
        return mul_[std::size_t(a) * q_ + b];
    }

private:
    const FieldDescriptor* f_;
    std::uint32_t q_;
    bool prime_;
    std::vector<std::uint16_t> add_, mul_;
};

// Generators flattened to (coefficient code, exponent vector) lists.
class CompiledIdeal {
public:
    CompiledIdeal(const Ideal<FqElem>& I, const FqTable& T) : nvars_(I.nvars), T_(&T) {
        for (const auto& g : I.gens) {
            Gen cg;
            for (const auto& t : g.terms()) {
                if (&t.c.field() != &T.field()) throw std::invalid_argument("CompiledIdeal: field mismatch");
                Term ct{static_cast<std::uint32_t>(t.c.code()), {}};
                for (std::size_t v = 0; v < nvars_; ++v) {
                    if (t.m[v] == 0) continue;
                    ct.factors.push_back({static_cast<std::uint16_t>(v), static_cast<std::uint16_t>(t.m[v])});
                    maxdeg_ = std::max<unsigned>(maxdeg_, t.m[v]);
                }
                cg.push_back(std::move(ct));
            }
            gens_.push_back(std::move(cg));
        }
    }
    std::size_t nvars() const { return nvars_; }
    unsigned max_degree() const { return maxdeg_; }

    // pw[v * (maxdeg+1) + e] = x_v^e; stops at the first non-vanishing generator.
    bool vanishes(const std::vector<std::uint32_t>& pw) const {
        const FqTable& T = *T_;
        std::size_t stride = maxdeg_ + 1;
        for (const auto& g : gens_) {
            std::uint32_t acc = 0;
            for (const auto& t : g) {
                std::uint32_t m = t.coeff;
                for (const auto& [v, e] : t.factors) {
                    m = T.mul(m, pw[std::size_t(v) * stride + e]);
                    if (m == 0) break;
                }
                acc = T.add(acc, m);
            }
            if (acc != 0) return false;
        }
        return true;
    }

private:
    struct Term {
        std::uint32_t coeff;
        std::vector<std::pair<std::uint16_t, std::uint16_t>> factors;
    };
    using Gen = std::vector<Term>;
    std::size_t nvars_;
    const FqTable* T_;
    unsigned maxdeg_ = 1;
    std::vector<Gen> gens_;
};

struct CountOptions {
    std::uint64_t budget = 0;  // 0 means enumeration_budget()
    unsigned threads = 0;      // 0 means hardware concurrency
};

namespace detail {

// Visits every point of P^N(F_q) in chart i (x_j = 0 for j < i, x_i = 1) whose coordinate x_{i+1} is fixed to
// `first` (when i < N); calls fn(point codes) and counts how many satisfy the ideal.
template <class Fn>
std::uint64_t scan_slice(const CompiledIdeal& C, const FqTable& T, std::size_t chart, std::uint32_t first, Fn&& on_point) {
    std::size_t n = C.nvars(), stride = C.max_degree() + 1;
    std::uint32_t q = T.q();
    std::vector<std::uint32_t> x(n, 0), pw(n * stride, 0);
    auto set = [&](std::size_t v, std::uint32_t val) {
        x[v] = val;
        std::uint32_t p = 1;
        pw[v * stride] = 1;
        for (std::size_t e = 1; e < stride; ++e) pw[v * stride + e] = p = T.mul(p, val);
    };
    for (std::size_t v = 0; v < n; ++v) set(v, 0);
    set(chart, 1);
    std::size_t lo = chart + 1;
    if (lo < n) {
        set(lo, first);
        ++lo;
    }
    std::uint64_t count = 0;
    for (;;) {
        if (C.vanishes(pw)) {
            ++count;
            on_point(x);
        }
        std::size_t v = n;
        while (v > lo) {
            --v;
            if (x[v] + 1 < q) {
                set(v, x[v] + 1);
                break;
            }
            set(v, 0);
            if (v == lo) {
                v = n + 1;
                break;
            }
        }
        if (v == n || v == n + 1 || lo >= n) break;
    }
    return count;
}

inline Ideal<FqElem> reduce_ideal(const Ideal<Rational>& I, const FieldDescriptor& f) {
    std::vector<MPoly<FqElem>> gens;
    for (const auto& g : I.gens) {
        if (g.is_zero()) continue;
        try {
            gens.push_back(to_fq(integer_content_normalize(g), f));
        } catch (const std::domain_error&) {
            throw std::domain_error("reduce_ideal: coefficient denominator divisible by " + std::to_string(f.p));
        }
    }
    return Ideal<FqElem>(I.nvars, std::move(gens));
}

}  // namespace detail

// Exact number of F_q-points of the projective scheme cut out by I; each point is visited once via affine charts.
inline std::uint64_t count_projective_points(const Ideal<FqElem>& I, const FieldDescriptor& f, const CountOptions& opt = {}) {
    if (I.nvars == 0) throw std::invalid_argument("count_projective_points: no variables");
    std::size_t N = I.nvars - 1;
    std::uint64_t budget = opt.budget ? opt.budget : enumeration_budget();
    std::uint64_t size = projective_space_size(N, f.q);
    if (size > budget)
        throw BudgetExceeded("enumeration of P^" + std::to_string(N) + "(F_" + std::to_string(f.q) + ") needs " +
                             (size == UINT64_MAX ? std::string("> 2^64") : std::to_string(size)) +
                             " points, budget " + std::to_string(budget));
    FqTable T(f);
    CompiledIdeal C(I, T);
    std::vector<std::pair<std::size_t, std::uint32_t>> slices;
    for (std::size_t i = 0; i <= N; ++i) {
        if (i == N) {
            slices.push_back({i, 0});
            continue;
        }
        for (std::uint32_t a = 0; a < T.q(); ++a) slices.push_back({i, a});
    }
    unsigned nt = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
    nt = static_cast<unsigned>(std::min<std::size_t>(nt, slices.size()));
    if (size < 20000) nt = 1;
    std::atomic<std::size_t> next{0};
    std::atomic<std::uint64_t> total{0};
    auto worker = [&] {
        std::uint64_t local = 0;
        for (std::size_t k; (k = next.fetch_add(1)) < slices.size();)
            local += detail::scan_slice(C, T, slices[k].first, slices[k].second, [](const auto&) {});
        total += local;
    };
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < nt; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    return total;
}

inline std::uint64_t count_projective_points(const Ideal<Rational>& I, const FieldDescriptor& f, const CountOptions& opt = {}) {
    return count_projective_points(detail::reduce_ideal(I, f), f, opt);
}

// Points of the scheme, first nonzero coordinate 1, in chart order.
inline std::vector<std::vector<FqElem>> enumerate_projective_points(const Ideal<FqElem>& I, const FieldDescriptor& f,
                                                                    const CountOptions& opt = {}) {
    std::size_t N = I.nvars - 1;
    std::uint64_t budget = opt.budget ? opt.budget : enumeration_budget();
    if (projective_space_size(N, f.q) > budget) throw BudgetExceeded("enumerate_projective_points: budget exceeded");
    FqTable T(f);
    CompiledIdeal C(I, T);
    std::vector<std::vector<FqElem>> out;
    auto keep = [&](const std::vector<std::uint32_t>& x) {
        std::vector<FqElem> p;
        p.reserve(x.size());
        for (auto c : x) p.emplace_back(f, c);
        out.push_back(std::move(p));
    };
    for (std::size_t i = 0; i <= N; ++i) {
        if (i == N) {
            detail::scan_slice(C, T, i, 0, keep);
            continue;
        }
        for (std::uint32_t a = 0; a < T.q(); ++a) detail::scan_slice(C, T, i, a, keep);
    }
    return out;
}

inline std::vector<std::vector<FqElem>> enumerate_projective_points(const Ideal<Rational>& I, const FieldDescriptor& f,
                                                                    const CountOptions& opt = {}) {
    return enumerate_projective_points(detail::reduce_ideal(I, f), f, opt);
}

enum class Formula { none, fermat_AO, ptsff, FF_Y, K3FF, W_section };

inline std::string formula_name(Formula f) {
    switch (f) {
        case Formula::fermat_AO: return "fermat_AO";
        case Formula::ptsff: return "ptsff";
        case Formula::FF_Y: return "FF_Y";
        case Formula::K3FF: return "K3FF";
        case Formula::W_section: return "W_section";
        default: return "none";
    }
}

inline Formula formula_from_name(const std::string& s) {
    for (Formula f : {Formula::none, Formula::fermat_AO, Formula::ptsff, Formula::FF_Y, Formula::K3FF, Formula::W_section})
        if (formula_name(f) == s) return f;
    throw std::invalid_argument("unknown formula " + s);
}

struct ExpectedCount {
    std::optional<std::uint64_t> value;
    std::string reason;
};

namespace detail {

inline std::uint64_t ipow(std::uint64_t b, unsigned e) {
    std::uint64_t r = 1;
    while (e--) {
        if (r > UINT64_MAX / b) throw std::overflow_error("ipow overflow");
        r *= b;
    }
    return r;
}

inline std::uint64_t pn_count(unsigned N, std::uint64_t q) { return (ipow(q, N + 1) - 1) / (q - 1); }

}  // namespace detail

// Closed-form counts; nullopt with a reason outside the hypotheses of the cited statement.
inline ExpectedCount expected_count(Formula f, unsigned n, std::uint64_t p, unsigned m) {
    if (!is_prime(p) || m == 0) return {std::nullopt, "p must be prime and m >= 1"};
    std::uint64_t q = detail::ipow(p, m);
    auto ptsff = [&]() -> std::uint64_t {
        bool seven = p == 3 ? false : p == 2 ? m % 2 == 0 : (m % 2 == 0 || p % 6 == 1);
        return seven ? q * q + 7 * q + 1 : q * q + q + 1;
    };
    switch (f) {
        case Formula::ptsff: return {ptsff(), ""};
        case Formula::fermat_AO:
            if (n == 0) return {std::nullopt, "n >= 1 required"};
            if (n == 1) return {ptsff(), ""};
            if (q % 3 == 1) return {std::nullopt, "q = 1 mod 3 needs a Jacobi sum term"};
            return {detail::pn_count(2 * n, q), ""};
        case Formula::FF_Y:
            if (n < 2 || q % 3 != 2) return {std::nullopt, "requires n >= 2 and q = 2 mod 3"};
            return {detail::pn_count(2 * n - 2, q), ""};
        case Formula::W_section:
            if (n < 2 || q % 3 != 2) return {std::nullopt, "requires n >= 2 and q = 2 mod 3"};
            return {detail::pn_count(2 * n - 3, q), ""};
        case Formula::K3FF:
            if (q % 3 != 2) return {std::nullopt, "requires q = 2 mod 3"};
            return {q * q + 1, ""};
        default: return {std::nullopt, "no closed form"};
    }
}

// Schemes: fermat (X^{2n}), Y, W, Z, H (H_±), K0.
inline Ideal<FqElem> scheme_ideal(const std::string& scheme, unsigned n, const FieldDescriptor& f) {
    auto c = ctx_fq(n, f);
    detail::require_n(c);
    if (scheme == "fermat") {
        auto R = c.ring(c.amb_vars());
        MPoly<FqElem> F = R.zero();
        for (std::size_t i = 0; i < c.amb_vars(); ++i) F += R.var(i).pow(3);
        return Ideal<FqElem>(c.amb_vars(), {F});
    }
    if (scheme == "Y") return f.p == 2 ? ideal_Y_char2(c) : ideal_Y(c);
    if (scheme == "W") return ideal_W(c);
    if (scheme == "Z") return f.p == 2 ? ideal_Z_char2(c) : ideal_Z(c);
    if (scheme == "H") return ideal_H_pm(c);
    if (scheme == "K0") return detail::reduce_ideal(build_secdeg_data().ideal("K0"), f);
    throw std::invalid_argument("unknown scheme " + scheme + " (known: fermat, Y, W, Z, H, K0)");
}

inline Formula default_formula(const std::string& scheme, unsigned n) {
    if (scheme == "fermat") return n == 1 ? Formula::ptsff : Formula::fermat_AO;
    if (scheme == "Y") return Formula::FF_Y;
    if (scheme == "W") return Formula::W_section;
    if (scheme == "K0") return Formula::K3FF;
    return Formula::none;
}

struct CountRequest {
    std::string scheme;
    unsigned n = 1;
    std::uint64_t p = 2;
    unsigned m = 1;
    std::optional<Formula> formula = std::nullopt;
};

struct CountReport {
    std::string scheme;
    unsigned n = 1;
    std::uint64_t q = 0;
    std::optional<std::uint64_t> observed;
    std::optional<std::uint64_t> expected;
    Formula formula = Formula::none;
    bool match = false;
    double seconds = 0;
    std::string error;
    bool budget_error = false;

    std::string status() const {
        if (!error.empty()) return "error";
        if (!expected) return "unchecked";
        return match ? "match" : "mismatch";
    }
};

inline CountReport run_count(const CountRequest& r, const CountOptions& opt = {}) {
    CountReport rep;
    rep.scheme = r.scheme;
    rep.n = r.n;
    rep.formula = r.formula.value_or(default_formula(r.scheme, r.n));
    auto t0 = std::chrono::steady_clock::now();
    try {
        const auto& f = fq_make(r.p, r.m);
        rep.q = f.q;
        rep.expected = expected_count(rep.formula, r.n, r.p, r.m).value;
        rep.observed = count_projective_points(scheme_ideal(r.scheme, r.n, f), f, opt);
        rep.match = rep.expected && *rep.expected == *rep.observed;
    } catch (const BudgetExceeded& e) {
        rep.error = e.what();
        rep.budget_error = true;
    } catch (const std::exception& e) {
        rep.error = e.what();
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

// One report per request, in request order; failures are recorded and the suite continues.
inline std::vector<CountReport> run_count_suite(const std::vector<CountRequest>& reqs, const CountOptions& opt = {}) {
    std::vector<CountReport> out;
    out.reserve(reqs.size());
    for (const auto& r : reqs) out.push_back(run_count(r, opt));
    return out;
}

inline void write_count_csv(std::ostream& os, const std::vector<CountReport>& reps) {
    os << "scheme,q,observed,expected,match,seconds\n";
    for (const auto& r : reps) {
        std::string label = r.scheme == "K0" ? "K0" : r.scheme + "_n" + std::to_string(r.n);
        char secs[32];
        std::snprintf(secs, sizeof secs, "%.3f", r.seconds);
        os << label << ',' << r.q << ',' << (r.observed ? std::to_string(*r.observed) : "") << ','
           << (r.expected ? std::to_string(*r.expected) : "") << ',' << r.status() << ',' << secs << '\n';
    }
}

}  // namespace fermat

#endif
