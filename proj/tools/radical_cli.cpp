#include <CLI11.hpp>

#include <ctime>
#include <fstream>
#include <iostream>
#include <random>

#include "radical/io.hpp"

using namespace radical;

namespace {

struct RunSpec {
    std::string command;
    std::string type = "so";
    std::size_t n = 1, r = 1;
    std::string backend = "exact";
    std::uint64_t seed = 42;
    std::size_t samples = 1000000;
    std::size_t count = 100;
    double tol = 1e-6;
    std::string mode = "plain";
    bool two_sheet = false;
    std::string out, in, csv;
};

ordered_json runspec_json(const RunSpec& s) {
    ordered_json j;
    j["command"] = s.command;
    j["type"] = s.type;
    j["n"] = s.n;
    j["r"] = s.r;
    j["backend"] = s.backend;
    j["seed"] = s.seed;
    j["samples"] = s.samples;
    j["count"] = s.count;
    j["tol"] = json_real(s.tol);
    j["mode"] = s.mode;
    j["two_sheet"] = s.two_sheet;
    j["out"] = s.out;
    j["in"] = s.in;
    j["csv"] = s.csv;
    return j;
}

GroupConfig make_config(const RunSpec& s) {
    if (s.type != "so" && s.type != "sp")
        throw std::invalid_argument("type must be so or sp");
    return {s.type == "so" ? +1 : -1, s.n, s.r};
}

Rat rnd_rat(std::mt19937_64& rng, int lo, int hi) {
    std::uniform_int_distribution<int> num(lo, hi), den(1, 4);
    return rat(num(rng), den(rng));
}

template <typename T>
TorusPoint<T> rnd_regular_torus(std::mt19937_64& rng, const SpaceFrame<T>& f) {
    std::uniform_int_distribution<int> num(2, 9), sgn(0, 1);
    for (int attempt = 0; attempt < 500; ++attempt) {
        std::vector<T> t;
        bool unit = false;
        for (std::size_t i = 0; i < f.n(); ++i) {
            Rat q = rnd_rat(rng, 2, 9);
            if (abs(q) == 1) unit = true;  // the t = -1 class needs its own treatment
            if (f.epsilon() == +1 && sgn(rng)) q = -q;
            if constexpr (scalar_traits<T>::is_exact)
                t.push_back(q);
            else
                t.push_back(q.get_d());
        }
        if (unit) continue;
        TorusPoint<T> p{t};
        if (torus_regularity(f, p).regular) return p;
    }
    throw std::runtime_error("could not sample a regular torus point");
}

LeviElement<double> rnd_levi_real(std::mt19937_64& rng, const SpaceFrame<double>& f) {
    std::uniform_real_distribution<double> u(-0.4, 0.4);
    Mat<double> g;
    do {
        g = Mat<double>::identity(f.dim_W());
        for (std::size_t i = 0; i < g.rows(); ++i)
            for (std::size_t j = 0; j < g.cols(); ++j) g(i, j) += u(rng);
    } while (std::fabs(det(g)) < 1e-3);
    // Cayley transform of a Lie(H) element is an isometry of X.
    Mat<double> s(f.dim_X(), f.dim_X());
    for (const auto& b : h_basis(f)) s = s + b * u(rng);
    Mat<double> id = Mat<double>::identity(f.dim_X());
    Mat<double> h = inverse(id - s) * (id + s);
    return {g, h};
}

// ---------------------------------------------------------------------------

std::pair<ordered_json, bool> run_identities(const GroupConfig& cfg, std::uint64_t seed,
                                             std::size_t count) {
    SpaceFrame<Rat> f(cfg);
    auto kit = XiKit<Rat>::standard(f);
    std::mt19937_64 rng(seed);
    std::size_t failures = 0;
    Mat<Rat> id_W = Mat<Rat>::identity(f.dim_W());
    for (std::size_t i = 0; i < count; ++i) {
        auto p = rnd_regular_torus(rng, f);
        Mat<Rat> gm = torus_embed(f, p);
        auto n = kit.n_S(gm);
        bool ok = norm(f, n) == gm;
        Mat<Rat> hG = kit.h_G(gm);
        ok = ok && (id_W + hG + kit.tau(hG) == Mat<Rat>(f.dim_W(), f.dim_W()));
        ok = ok && (hG * kit.theta(hG) == -kit.Xi(inverse(gm)));
        ok = ok && (n.eta + f.star_eta(n.eta) + n.xi * f.star_xi(n.xi) ==
                    Mat<Rat>(f.dim_W(), f.dim_W()));
        if (!ok) ++failures;
    }
    ordered_json j;
    j["points"] = count;
    j["failures"] = failures;
    return {j, failures == 0};
}

std::pair<ordered_json, bool> run_exactness(const GroupConfig& cfg) {
    SpaceFrame<Rat> f(cfg);
    auto kit = XiKit<Rat>::standard(f);
    auto rep = exact_sequence_report(f, kit);
    ordered_json j;
    j["dim_m"] = rep.dim_m;
    j["dim_h"] = rep.dim_h;
    j["dim_s"] = rep.dim_s;
    j["dim_zhs"] = rep.dim_zhs;
    j["dim_n"] = rep.dim_n;
    j["sequences"] = {rep.seq1, rep.seq2, rep.seq3, rep.seq4};
    j["h_decomposition"] = rep.h_decomposition;
    j["dim_identity"] = rep.dim_identity;
    return {j, rep.ok()};
}

std::pair<ordered_json, bool> run_jacobian(const GroupConfig& cfg, std::uint64_t seed,
                                           std::size_t count, double tol) {
    SpaceFrame<double> f(cfg);
    auto kit = XiKit<double>::standard(f);
    auto cb = calibrated_bases(f, kit);
    RootDatum rd(cfg);
    std::mt19937_64 rng(seed);
    ordered_json reports = ordered_json::array();
    bool pass = true;
    std::vector<int> signs;
    for (std::size_t i = 0; i < count; ++i) {
        auto p = rnd_regular_torus(rng, f);
        auto m = rnd_levi_real(rng, f);
        auto rep = jacobian_verify(f, kit, cb, rd, m, p);
        pass = pass && rep.ok(tol, 1e-9);
        signs.push_back(rep.sign_analytic);
        reports.push_back(jacobian_report_json(rep));
    }
    ordered_json j;
    j["reports"] = reports;
    j["calibration_signs"] = signs;
    return {j, pass};
}

std::pair<ordered_json, bool> run_fibers(const GroupConfig& cfg, std::uint64_t seed,
                                         std::size_t count) {
    SpaceFrame<Rat> f(cfg);
    auto kit = XiKit<Rat>::standard(f);
    std::mt19937_64 rng(seed);
    std::size_t failures = 0;
    std::size_t order = weyl_group(f).size();
    for (std::size_t i = 0; i < count; ++i) {
        auto p = rnd_regular_torus(rng, f);
        auto m = LeviElement<Rat>::identity(f);
        auto fib = fiber(f, kit, m, p);
        bool ok = fib.size() == order;
        auto target = sha(f, kit, m, p);
        for (const auto& [mm, pp] : fib) {
            auto img = sha(f, kit, mm, pp);
            ok = ok && img.xi == target.xi && img.eta == target.eta;
        }
        if (!ok) ++failures;
    }
    ordered_json j;
    j["points"] = count;
    j["weyl_order"] = order;
    j["failures"] = failures;
    return {j, failures == 0};
}

std::pair<ordered_json, bool> run_decompose(const GroupConfig& cfg, const std::string& in) {
    if (in.empty()) throw std::invalid_argument("decompose needs --in <file.json>");
    std::ifstream is(in);
    if (!is) throw std::invalid_argument("cannot open " + in);
    ordered_json doc = ordered_json::parse(is);
    SpaceFrame<double> f(cfg);
    auto kit = XiKit<double>::standard(f);
    UnipotentElement<double> n{parse_matrix_json(doc.at("xi")),
                               parse_matrix_json(doc.at("eta"))};
    auto dec = decompose(f, kit, n);
    auto img = sha(f, kit, dec.m, dec.gamma);
    double residual = std::max((img.xi - n.xi).max_abs(), (img.eta - n.eta).max_abs());
    ordered_json j;
    j["class"] = torus_class_name(dec.cls);
    j["m_g"] = matrix_json(dec.m.g);
    j["m_h"] = matrix_json(dec.m.h);
    if (dec.cls == TorusClass::split) {
        ordered_json t = ordered_json::array();
        for (double v : dec.torus.t) t.push_back(json_real(v));
        j["t"] = t;
    } else {
        j["angle"] = json_real(dec.angle);
    }
    j["residual"] = json_real(residual);
    return {j, residual <= 1e-6};
}

std::pair<ordered_json, bool> run_integrate(const GroupConfig& cfg, const RunSpec& spec) {
    SpaceFrame<double> f(cfg);
    auto kit = XiKit<double>::standard(f);
    auto cb = calibrated_bases(f, kit);
    RootDatum rd(cfg);
    auto mhat = LeviElement<double>::identity(f);
    std::vector<double> t;
    for (std::size_t i = 0; i < f.n(); ++i) t.push_back(2.0 + (double)i);
    TorusPoint<double> ghat{t};

    VerifyOptions opt;
    opt.samples = spec.samples;
    opt.seed = spec.seed;
    opt.rel_tol = spec.tol > 0 ? std::max(spec.tol, 1e-12) : 0.02;
    opt.mode = spec.mode == "ad_invariant" ? MeasureMode::ad_invariant : MeasureMode::plain;
    opt.two_sheet = spec.two_sheet;
    if (spec.mode != "plain" && spec.mode != "ad_invariant")
        throw std::invalid_argument("mode must be plain or ad_invariant");

    if (!spec.csv.empty()) {
        std::vector<ConvergenceRow> rows;
        for (std::size_t s : {spec.samples / 16, spec.samples / 4, spec.samples}) {
            if (s == 0) continue;
            VerifyOptions o = opt;
            o.samples = s;
            auto r = verify_theorem(f, kit, cb, rd, mhat, ghat, o);
            rows.push_back({s, r.lhs, r.rhs, r.gap(), r.rhs_stderr});
        }
        std::ofstream os(spec.csv);
        write_convergence_csv(os, rows);
    }
    auto rep = verify_theorem(f, kit, cb, rd, mhat, ghat, opt);
    return {integration_report_json(rep), rep.pass};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"verification suites for the parabolic norm correspondence"};
    app.require_subcommand(1);
    RunSpec spec;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--type", spec.type, "group family: so or sp");
        sub->add_option("--n", spec.n, "Witt index of W (dim W = 2n)");
        sub->add_option("--r", spec.r, "anisotropic rank of X (dim X = r + 2n)");
        sub->add_option("--backend", spec.backend, "exact or real");
        sub->add_option("--seed", spec.seed, "random seed");
        sub->add_option("--samples", spec.samples, "Monte-Carlo sample count");
        sub->add_option("--count", spec.count, "batch size for sampled suites");
        sub->add_option("--tol", spec.tol, "tolerance");
        sub->add_option("--out", spec.out, "write the JSON report here");
        return sub;
    };

    add_common(app.add_subcommand("identities", "exact section identities"));
    add_common(app.add_subcommand("exactness", "exact sequences and dimension identity"));
    add_common(app.add_subcommand("jacobian", "batch Jacobian verification"));
    add_common(app.add_subcommand("fibers", "Weyl orbit fiber checks"));
    auto* dec = add_common(app.add_subcommand("decompose", "invert the decomposition map"));
    dec->add_option("--in", spec.in, "JSON file with xi and eta matrices");
    auto* integ = add_common(app.add_subcommand("integrate", "integration formula check"));
    integ->add_option("--mode", spec.mode, "plain or ad_invariant");
    integ->add_flag("--two-sheet", spec.two_sheet, "sum both Weyl sheets weighted by 1/2");
    integ->add_option("--csv", spec.csv, "write a convergence CSV here");
    add_common(app.add_subcommand("all", "every suite in sequence"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    spec.command = app.get_subcommands().front()->get_name();

    ordered_json report;
    report["version"] = RADICAL_VERSION;
    report["timestamp"] = (std::uint64_t)std::time(nullptr);
    report["run_spec"] = runspec_json(spec);

    GroupConfig cfg;
    try {
        cfg = make_config(spec);
        SpaceFrame<double> probe(cfg);  // validates the configuration
        (void)probe;
        if (spec.backend != "exact" && spec.backend != "real")
            throw std::invalid_argument("backend must be exact or real");
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return 2;
    }
    report["config"] = config_json(cfg);

    bool pass = true;
    ordered_json results;
    try {
        auto record = [&](const char* name, std::pair<ordered_json, bool> r) {
            results[name] = r.first;
            results[name]["pass"] = r.second;
            pass = pass && r.second;
        };
        if (spec.command == "identities") {
            record("identities", run_identities(cfg, spec.seed, spec.count));
        } else if (spec.command == "exactness") {
            record("exactness", run_exactness(cfg));
        } else if (spec.command == "jacobian") {
            record("jacobian", run_jacobian(cfg, spec.seed, std::min(spec.count, (std::size_t)100),
                                            spec.tol));
        } else if (spec.command == "fibers") {
            record("fibers", run_fibers(cfg, spec.seed, std::min(spec.count, (std::size_t)100)));
        } else if (spec.command == "decompose") {
            record("decompose", run_decompose(cfg, spec.in));
        } else if (spec.command == "integrate") {
            record("integrate", run_integrate(cfg, spec));
        } else if (spec.command == "all") {
            record("identities", run_identities(cfg, spec.seed, spec.count));
            record("exactness", run_exactness(cfg));
            record("fibers", run_fibers(cfg, spec.seed, 20));
            record("jacobian", run_jacobian(cfg, spec.seed, 10, spec.tol));
            RunSpec sub = spec;
            sub.samples = std::min<std::size_t>(spec.samples, 1000000);
            record("integrate", run_integrate(cfg, sub));
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        results["error"] = e.what();
        pass = false;
    }
    report["results"] = results;
    report["pass"] = pass;

    std::string text = report.dump(2);
    std::cout << text << "\n";
    if (!spec.out.empty()) {
        std::ofstream os(spec.out);
        os << text << "\n";
    }
    return pass ? 0 : 1;
}
