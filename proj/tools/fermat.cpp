#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fermat/counting.hpp"
#include "fermat/emit.hpp"
#include "fermat/heights.hpp"
#include "fermat/verify.hpp"

using namespace fermat;

namespace {

constexpr int kOk = 0, kCheckFailed = 1, kUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Writes to --out when given, stdout otherwise.
void emit_text(const std::string& out, const std::string& text) {
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw UsageError("cannot open " + out);
    f << text;
}

std::vector<std::uint64_t> parse_b_list(const std::string& s) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            unsigned long long v = std::stoull(item, &used);
            if (used != item.size() || v == 0) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw UsageError("bad B value '" + item + "'");
        }
    }
    if (out.empty()) throw UsageError("empty B list");
    return out;
}

struct VerifyArgs {
    unsigned n = 2;
    std::string suite, format = "text";
    std::uint64_t seed = 0;
    std::size_t samples = 200;
};

int cmd_verify(const VerifyArgs& a) {
    if (a.n < 1 || a.n > kMaxN) throw UsageError("--n must be in 1.." + std::to_string(kMaxN));
    if ((a.suite == "linsys" || a.suite == "singular-locus") && a.n > kMaxSymbolicN)
        throw UsageError(a.suite + " is symbolic and capped at n = " + std::to_string(kMaxSymbolicN));
    VerifyOptions opt{a.seed, a.samples};
    Report r = run_suite(a.suite, a.n, opt);
    bool ok = all_pass(r);
    if (a.format == "json") {
        json checks = json::array();
        for (const auto& c : r)
            checks.push_back({{"name", c.name}, {"status", c.pass ? "pass" : "fail"}, {"detail", c.detail}, {"seconds", c.seconds}});
        json j = {{"suite", a.suite}, {"n", a.n}, {"seed", a.seed}, {"samples", a.samples}, {"checks", checks}, {"pass", ok}};
        std::cout << j.dump(2) << '\n';
    } else {
        for (const auto& c : r) {
            std::printf("%s  %s", c.pass ? "PASS" : "FAIL", c.name.c_str());
            if (!c.detail.empty()) std::printf("  (%s)", c.detail.c_str());
            std::printf("  %.3fs\n", c.seconds);
        }
        std::printf("%s: %s (n=%u, seed=%llu)\n", a.suite.c_str(), ok ? "pass" : "FAIL", a.n,
                    static_cast<unsigned long long>(a.seed));
    }
    return ok ? kOk : kCheckFailed;
}

struct CountArgs {
    std::string scheme, formula, out, format = "csv";
    unsigned n = 1, m = 1, threads = 0;
    std::uint64_t p = 0;
};

int cmd_count(const CountArgs& a) {
    if (a.n < 1 || a.n > kMaxN) throw UsageError("--n must be in 1..8");
    CountRequest req{a.scheme, a.n, a.p, a.m, std::nullopt};
    if (!a.formula.empty()) {
        try {
            req.formula = formula_from_name(a.formula);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    auto rep = run_count(req, {0, a.threads});
    if (!rep.error.empty()) {
        std::cerr << "error: " << rep.error << '\n';
        return kUsage;
    }
    std::ostringstream os;
    if (a.format == "json") {
        json j = {{"scheme", rep.scheme}, {"n", rep.n}, {"q", rep.q}, {"observed", *rep.observed},
                  {"expected", rep.expected ? json(*rep.expected) : json(nullptr)}, {"formula", formula_name(rep.formula)},
                  {"status", rep.status()}, {"seconds", rep.seconds}};
        os << j.dump(2) << '\n';
    } else {
        write_count_csv(os, {rep});
    }
    emit_text(a.out, os.str());
    return rep.status() == "mismatch" ? kCheckFailed : kOk;
}

struct EmitArgs {
    std::string label, out, t;
    unsigned n = 1, m = 1;
    std::uint64_t p = 0;
};

int cmd_emit(const EmitArgs& a) {
    EmitRequest r{a.label, a.n, a.p, a.m, std::nullopt};
    if (!a.t.empty()) {
        try {
            r.t = Rational::parse(a.t);
        } catch (const std::exception&) {
            throw UsageError("bad --t value '" + a.t + "'");
        }
    }
    json j;
    try {
        j = emit_object(r);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    } catch (const std::domain_error& e) {
        throw UsageError(e.what());
    }
    emit_text(a.out, j.dump(2) + "\n");
    return kOk;
}

struct HeightsArgs {
    std::string map = "chi", blist, format = "csv", out;
    unsigned n = 1, threads = 0;
    bool direct = false;
    std::uint64_t seed = 0;
};

int cmd_heights(const HeightsArgs& a) {
    if (a.direct) {
        auto Bs = parse_b_list(a.blist.empty() ? "8,27,64" : a.blist);
        std::ostringstream os;
        os << "B,count\n";
        bool ok = true;
        for (auto B : Bs) {
            auto c = count_fermat_surface_points(B);
            ok = ok && c >= B;
            os << B << ',' << c << '\n';
        }
        emit_text(a.out, os.str());
        return ok ? kOk : kCheckFailed;
    }
    RationalMap<Rational> phi;
    MPoly<Rational> F;
    std::string default_b;
    if (a.map == "chi" || a.map == "surface_phi") {
        auto s = build_surface_maps();
        phi = a.map == "chi" ? s.chi : s.phi;
        F = fermat_cubic(ctx_q(1));
        default_b = "1,8,27,64,125,216,343,512,729";
    } else if (a.map == "phi") {
        if (a.n < 1 || a.n > 3) throw UsageError("--map phi supports n in 1..3");
        auto c = ctx_q(a.n);
        phi = build_phi(c);
        F = fermat_cubic(c);
        default_b = a.n == 1 ? "1,16,81,256,625,1296" : "1,16,81,256";
    } else {
        throw UsageError("unknown map '" + a.map + "' (known: chi, surface_phi, phi)");
    }
    auto Bs = parse_b_list(a.blist.empty() ? default_b : a.blist);
    for (std::size_t i = 1; i < Bs.size(); ++i)
        if (Bs[i] <= Bs[i - 1]) throw UsageError("B list must be increasing");
    HeightScan scan;
    try {
        scan = scan_image_counts(a.map, phi, F, Bs, {a.threads});
    } catch (const std::logic_error& e) {
        if (dynamic_cast<const std::invalid_argument*>(&e)) throw UsageError(e.what());
        std::cerr << "consistency failure: " << e.what() << '\n';
        return kCheckFailed;
    }
    std::ostringstream os;
    if (a.format == "json") {
        json j = to_json(scan);
        j["seed"] = a.seed;
        if (a.map == "chi") j["injectivity_rate"] = injectivity_rate(phi, 4, 2000, a.seed);
        os << j.dump(2) << '\n';
    } else {
        write_height_csv(os, scan);
    }
    emit_text(a.out, os.str());
    return kOk;
}

int cmd_dim_linsys(unsigned n, const std::string& format) {
    if (n < 1 || n > kMaxSymbolicN) throw UsageError("--n must be in 1.." + std::to_string(kMaxSymbolicN));
    auto d = quartic_system_dimension(n);
    bool ok = d == 2 * n + 2;
    if (format == "json")
        std::cout << json{{"n", n}, {"dimension", d}, {"expected", 2 * n + 2}, {"match", ok}}.dump(2) << '\n';
    else
        std::printf("n=%u dimension=%zu expected=%u %s\n", n, d, 2 * n + 2, ok ? "match" : "mismatch");
    return ok ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Birational parametrizations of Fermat cubic hypersurfaces: verification, counting, emission"};
    app.require_subcommand(1);

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Run a verification suite");
    verify->add_option("--n", va.n, "Half-dimension n of X^{2n}")->capture_default_str();
    verify->add_option("--suite", va.suite, "Suite")->required()->check(CLI::IsMember(suite_names()));
    verify->add_option("--seed", va.seed, "Seed for sampled checks")->capture_default_str();
    verify->add_option("--samples", va.samples, "Points for sampled checks")->capture_default_str();
    verify->add_option("--format", va.format, "text or json")->check(CLI::IsMember({"text", "json"}))->capture_default_str();

    CountArgs ca;
    auto* count = app.add_subcommand("count", "Count F_q-points of a scheme and compare with the closed form");
    count->add_option("--scheme", ca.scheme, "fermat, Y, W, Z, H or K0")->required();
    count->add_option("--n", ca.n, "Half-dimension n")->capture_default_str();
    count->add_option("--p", ca.p, "Characteristic")->required();
    count->add_option("--m", ca.m, "Degree of F_q over F_p")->capture_default_str();
    count->add_option("--formula", ca.formula, "Override the expected-count formula");
    count->add_option("--threads", ca.threads, "Worker threads, 0 for all cores");
    count->add_option("--format", ca.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    count->add_option("--out", ca.out, "Output file");

    EmitArgs ea;
    auto* emit = app.add_subcommand("emit", "Emit a map, ideal or polynomial family as JSON");
    emit->add_option("--label", ea.label, "Object label")->required();
    emit->add_option("--n", ea.n, "Half-dimension n")->capture_default_str();
    emit->add_option("--p", ea.p, "Characteristic, 0 for Q")->capture_default_str();
    emit->add_option("--m", ea.m, "Degree of F_q over F_p")->capture_default_str();
    emit->add_option("--t", ea.t, "Rational value of t for secdeg lists");
    emit->add_option("--out", ea.out, "Output file");

    HeightsArgs ha;
    auto* heights = app.add_subcommand("heights", "Count image points of bounded height");
    heights->add_option("--map", ha.map, "chi, surface_phi or phi")->capture_default_str();
    heights->add_option("--n", ha.n, "Half-dimension n for --map phi")->capture_default_str();
    heights->add_option("--B", ha.blist, "Comma-separated increasing height bounds");
    heights->add_flag("--direct", ha.direct, "Count X^2 points of height <= B directly");
    heights->add_option("--threads", ha.threads, "Worker threads, 0 for all cores");
    heights->add_option("--seed", ha.seed, "Seed for the injectivity spot-check")->capture_default_str();
    heights->add_option("--format", ha.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    heights->add_option("--out", ha.out, "Output file");

    unsigned dn = 1;
    std::string dformat = "text";
    auto* dim = app.add_subcommand("dim-linsys", "Dimension of the quartic system singular along Z+-");
    dim->add_option("--n", dn, "Half-dimension n")->capture_default_str();
    dim->add_option("--format", dformat, "text or json")->check(CLI::IsMember({"text", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*verify) return cmd_verify(va);
        if (*count) return cmd_count(ca);
        if (*emit) return cmd_emit(ea);
        if (*heights) return cmd_heights(ha);
        if (*dim) return cmd_dim_linsys(dn, dformat);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kCheckFailed;
    }
    return kUsage;
}
