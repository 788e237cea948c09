// Command-line front end: local analysis, procyclicity certificates,
// suitable twists, and rational approximation of p-adic Kummer points.

#include <CLI11.hpp>

#include "kummer/literals.hpp"

#include <atomic>
#include <fstream>
#include <functional>
#include <iostream>
#include <thread>

using namespace kummer;

namespace {

constexpr int EXIT_OK = 0;
constexpr int EXIT_BAD_INPUT = 2;
constexpr int EXIT_UNSUPPORTED_REDUCTION = 3;
constexpr int EXIT_APPROX_FAILURE = 4;
constexpr int EXIT_VERIFY_FAILURE = 5;

struct RunConfig {
    std::string command;
    Rational a = 1, b = 0;
    long long p = 11;
    int prec = Qp::default_precision;
    int k = 3;
    long long seed = -1;
    bool json = false;
    int jobs = 1;
    bool all_classes = false;
    int count = 3;
    std::string target;
    std::string file;
};

Json config_json(const RunConfig& cfg) {
    return Json{{"command", cfg.command}, {"a", to_string(cfg.a)}, {"b", to_string(cfg.b)},
                {"p", cfg.p},             {"prec", cfg.prec},      {"k", cfg.k},
                {"seed", cfg.seed},       {"jobs", cfg.jobs}};
}

void apply_kv(RunConfig& cfg, const std::string& tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos)
        throw domain_error("expected key=value token, got '" + tok + "'");
    std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
    if (key == "a") cfg.a = parse_rational(val);
    else if (key == "b") cfg.b = parse_rational(val);
    else if (key == "p") cfg.p = std::stoll(val);
    else if (key == "k") cfg.k = std::stoi(val);
    else if (key == "prec") cfg.prec = std::stoi(val);
    else if (key == "seed") cfg.seed = std::stoll(val);
    else if (key == "count") cfg.count = std::stoi(val);
    else throw domain_error("unknown key '" + key + "'");
}

void emit(const RunConfig& cfg, const Json& payload, const std::string& text) {
    if (cfg.json) {
        Json out = payload;
        out["config"] = config_json(cfg);
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << text;
    }
}

// Deterministic worker pool: results land in input order.
template <class F>
std::vector<Json> parallel_map(int jobs, int n, F f) {
    std::vector<Json> out(static_cast<size_t>(n));
    std::atomic<int> next{0};
    auto work = [&] {
        for (int i; (i = next.fetch_add(1)) < n;) out[static_cast<size_t>(i)] = f(i);
    };
    std::vector<std::thread> pool;
    for (int j = 1; j < std::max(1, jobs); ++j) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    return out;
}

int cmd_analyze(const RunConfig& cfg) {
    Curve<Rational> E = curve_q(cfg.a, cfg.b);
    Json out;
    std::string text;
    ReductionData rd = analyze_reduction(E, cfg.p);
    out["reduction"] = reduction_to_json(rd);
    text += "reduction at " + std::to_string(cfg.p) + ": " + to_string(rd.kind) +
            ", kodaira " + to_string(rd.kodaira, rd.kodaira_n) + ", m=" +
            std::to_string(rd.component_order) + "\n";

    auto analyze_class = [&](const SquareClass& cls) {
        Curve<Rational> tw = twist_short_model(E, cls.representative);
        GroupStructure gs = qp_group_structure(tw, cfg.p, cfg.prec, true);
        Json j = structure_to_json(gs);
        j["class"] = cls.class_index;
        j["representative"] = to_string(cls.representative);
        return j;
    };

    if (cfg.all_classes) {
        auto reps = square_class_reps(cfg.p);
        auto results = parallel_map(cfg.jobs, static_cast<int>(reps.size()),
                                    [&](int i) { return analyze_class(reps[i]); });
        out["classes"] = results;
        for (const auto& r : results)
            text += "class " + r.at("representative").get<std::string>() + ": procyclic=" +
                    r.at("procyclic").dump() + " Q=" + r.at("Q").get<std::string>() + "\n";
    } else {
        GroupStructure gs = qp_group_structure(E, cfg.p, cfg.prec, true);
        out["structure"] = structure_to_json(gs);
        text += "E(Q_p): procyclic=" + to_string(gs.procyclic) + ", Q=" +
                gs.quotient_order.str() + ", M=" + gs.finite_part.str() + "\n";
    }
    emit(cfg, out, text);
    return EXIT_OK;
}

int cmd_generator(const RunConfig& cfg) {
    GroupStructure gs = qp_group_structure(curve_q(cfg.a, cfg.b), cfg.p, cfg.prec, true);
    if (!gs.generator) {
        std::cerr << "no generator: procyclic=" << to_string(gs.procyclic) << "\n";
        return EXIT_UNSUPPORTED_REDUCTION;
    }
    emit(cfg, structure_to_json(gs),
         "generator " + to_literal(gs.generator->generator) + "\nQ = " +
             gs.generator->quotient_order.str() + ", v(log(QG)) = " +
             std::to_string(gs.generator->log_valuation_QG) + "\n");
    return EXIT_OK;
}

int cmd_suitable(const RunConfig& cfg) {
    Curve<Rational> E = curve_q(cfg.a, cfg.b);
    auto reps = square_class_reps(cfg.p);
    auto results = parallel_map(cfg.jobs, static_cast<int>(reps.size()), [&](int i) {
        Json e;
        e["class"] = reps[i].class_index;
        e["representative"] = to_string(reps[i].representative);
        try {
            e["certificate"] = certificate_to_json(
                construct_suitable_c(E, cfg.p, reps[i], cfg.k, cfg.prec));
        } catch (const error& err) {
            e["failure"] = err.what();
        }
        return e;
    });
    bool all_ok = true;
    std::string text;
    for (const auto& r : results) {
        bool ok = r.contains("certificate");
        all_ok = all_ok && ok;
        text += "class " + r.at("representative").get<std::string>() + ": " +
                (ok ? "c = " + r.at("certificate").at("c").get<std::string>()
                    : "FAIL " + r.at("failure").get<std::string>()) +
                "\n";
    }
    Json out;
    out["p"] = cfg.p;
    out["all_classes"] = all_ok;
    out["classes"] = results;
    emit(cfg, out, text);
    return all_ok ? EXIT_OK : EXIT_APPROX_FAILURE;
}

int cmd_search(const RunConfig& cfg) {
    auto curves = search_procyclic_curves(cfg.p, cfg.count, cfg.prec);
    std::string text;
    for (const auto& w : curves)
        text += "a=" + to_string(w.a) + " b=" + to_string(w.b) + "  [" + w.family +
                ", j=" + to_string(w.j_invariant) + "]\n";
    emit(cfg, search_to_json(curves), text);
    return EXIT_OK;
}

int cmd_sample(const RunConfig& cfg) {
    Curve<Qp> Eqp = curve_qp(cfg.a, cfg.b, cfg.p, cfg.prec);
    KummerPointY P = sample_y_point(Eqp, static_cast<unsigned long long>(std::max<long long>(cfg.seed, 0)));
    Json out;
    out["target"] = {P.xi.to_string(), P.eta.to_string(), P.zeta.to_string()};
    emit(cfg, out,
         "(" + P.xi.to_string() + ", " + P.eta.to_string() + ", " + P.zeta.to_string() + ")\n");
    return EXIT_OK;
}

KummerPointY parse_target(const RunConfig& cfg, const Curve<Qp>& Eqp, long long& seed_out) {
    seed_out = -1;
    if (cfg.target.rfind("seed:", 0) == 0) {
        seed_out = std::stoll(cfg.target.substr(5));
        return sample_y_point(Eqp, static_cast<unsigned long long>(seed_out));
    }
    std::string s = cfg.target;
    if (s.size() < 2 || s.front() != '(' || s.back() != ')')
        throw domain_error("target must be 'seed:<n>' or '(xi, eta, zeta)'");
    s = s.substr(1, s.size() - 2);
    std::vector<std::string> parts;
    size_t pos = 0;
    while (parts.size() < 2) {
        size_t cut = s.find(',', pos);
        if (cut == std::string::npos) throw domain_error("target needs three coordinates");
        parts.push_back(s.substr(pos, cut - pos));
        pos = cut + 1;
    }
    parts.push_back(s.substr(pos));
    return on_surface(Eqp, parse_padic(parts[0], Eqp.one.prime(), Eqp.one.rel_precision()),
                      parse_padic(parts[1], Eqp.one.prime(), Eqp.one.rel_precision()),
                      parse_padic(parts[2], Eqp.one.prime(), Eqp.one.rel_precision()));
}

int cmd_approximate(const RunConfig& cfg) {
    Curve<Rational> E = curve_q(cfg.a, cfg.b);
    Curve<Qp> Eqp = curve_qp(cfg.a, cfg.b, cfg.p, cfg.prec);
    long long seed = -1;
    KummerPointY target = parse_target(cfg, Eqp, seed);
    try {
        ApproximationResult res = approximate(E, cfg.p, target, cfg.k, cfg.prec);
        res.seed = seed;
        Json out = approximation_to_json(res, E, target);
        emit(cfg, out,
             "c = " + to_string(res.c) + "\nG = (" + to_string(res.gen_x) + ", " +
                 to_string(res.gen_y) + ")\nn1 = " + res.n1.str() + ", n2 = " + res.n2.str() +
                 "\nachieved exponent " + std::to_string(res.achieved_exponent) + " (target " +
                 std::to_string(cfg.k) + ")\n");
        return res.achieved_exponent >= cfg.k ? EXIT_OK : EXIT_APPROX_FAILURE;
    } catch (const error& e) {
        std::cerr << "approximation failed: " << e.what() << "\n";
        return EXIT_APPROX_FAILURE;
    }
}

int cmd_verify(const RunConfig& cfg) {
    std::ifstream in(cfg.file);
    if (!in) {
        std::cerr << "cannot open " << cfg.file << "\n";
        return EXIT_BAD_INPUT;
    }
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return EXIT_BAD_INPUT;
    }
    StoredApproximation sa = approximation_from_json(j);
    Curve<Rational> E = curve_q(sa.a, sa.b);
    Curve<Qp> Eqp = curve_qp(sa.a, sa.b, sa.prime, Qp::default_precision);
    KummerPointY target = sa.seed >= 0
        ? sample_y_point(Eqp, static_cast<unsigned long long>(sa.seed))
        : on_surface(Eqp, parse_padic(sa.target_xi), parse_padic(sa.target_eta),
                     parse_padic(sa.target_zeta));
    VerifyOutcome out = verify_approximation(E, sa.prime, target, sa.c, sa.gen_x, sa.gen_y,
                                             sa.n1, sa.n2, sa.k);
    Json rep{{"ok", out.ok},
             {"recomputed_exponent", out.recomputed_exponent},
             {"failure", out.failure}};
    emit(cfg, rep,
         out.ok ? "verified: exponent " + std::to_string(out.recomputed_exponent) + "\n"
                : "verification FAILED: " + out.failure + "\n");
    return out.ok ? EXIT_OK : EXIT_VERIFY_FAILURE;
}

int cmd_cm_demo(const RunConfig& cfg) {
    CmReport rep = cm_driver(cfg.p, cfg.prec);
    std::string text;
    for (const auto& c : rep.checks)
        text += std::string(c.passed ? "[PASS] " : "[FAIL] ") + c.name + " -- " + c.detail + "\n";
    emit(cfg, cm_report_to_json(rep), text);
    return rep.all_passed ? EXIT_OK : EXIT_APPROX_FAILURE;
}

int cmd_selftest(const RunConfig& cfg) {
    int failures = 0;
    auto check = [&](const std::string& name, bool ok) {
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << "\n";
        if (!ok) ++failures;
    };
    Qp a = Qp::from_rational(22, 7, 11, 12);
    check("p-adic arithmetic round trip", ((a * a.inv()) - Qp::from_integer(1, 11)).is_zero());
    check("sqrt(2) in Q_7 branch", Qp::from_integer(2, 7).sqrt().unit() % 7 == 3);
    Curve<Rational> E = curve_q(1, 0);
    check("count mod 11", count_points_mod_p(E, 11) == 12);
    GroupStructure gs = qp_group_structure(E, 11, cfg.prec, true);
    check("y^2=x^3+x procyclic at 11", gs.procyclic == Verdict::Yes && gs.finite_part == 12);
    LocalCurve L = make_local(E, 11, cfg.prec);
    FiniteQuotient fq = finite_quotient(L);
    ClosureReport cr = closure_covers(L, fq, *gs.generator, 5, 2);
    check("closure sampling", cr.covered);
    return failures == 0 ? EXIT_OK : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"p-adic density toolkit for Kummer surfaces of E x E"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::vector<std::string> extras;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--p", cfg.p, "prime");
        sub->add_option("--prec", cfg.prec, "working precision (digits)");
        sub->add_option("--k", cfg.k, "target exponent");
        sub->add_option("--seed", cfg.seed, "seed");
        sub->add_flag("--json", cfg.json, "emit JSON");
        sub->add_option("--jobs", cfg.jobs, "parallel workers");
        sub->add_option("args", extras, "key=value arguments (a=, b=, p=, k=, prec=, seed=, count=)");
    };

    CLI::App* analyze = app.add_subcommand("analyze", "reduction + group structure");
    analyze->add_flag("--all-classes", cfg.all_classes, "analyze every twist class");
    add_common(analyze);
    CLI::App* generator = app.add_subcommand("generator", "certified topological generator");
    add_common(generator);
    CLI::App* suitable = app.add_subcommand("suitable", "suitable twists for all classes");
    add_common(suitable);
    CLI::App* search = app.add_subcommand("search", "curves with procyclic twists at p");
    add_common(search);
    CLI::App* approx = app.add_subcommand("approximate", "rational point near a target");
    approx->add_option("--target", cfg.target, "'seed:<n>' or '(xi, eta, zeta)'");
    add_common(approx);
    CLI::App* sample = app.add_subcommand("sample", "seeded point of Y(Q_p)");
    add_common(sample);
    CLI::App* verify = app.add_subcommand("verify", "recompute a stored certificate");
    verify->add_option("file", cfg.file, "certificate JSON path")->required();
    add_common(verify);
    CLI::App* selftest = app.add_subcommand("selftest", "quick smoke checks");
    add_common(selftest);
    CLI::App* cmdemo = app.add_subcommand("cm-demo", "CM-curve driver at p = 3 mod 4");
    add_common(cmdemo);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : EXIT_BAD_INPUT;
    }

    try {
        for (const auto& tok : extras) {
            if (tok.rfind("seed:", 0) == 0) cfg.target = tok;  // approximate shorthand
            else apply_kv(cfg, tok);
        }
        CLI::App* sub = app.get_subcommands().front();
        cfg.command = sub->get_name();
        if (cfg.command == "analyze") return cmd_analyze(cfg);
        if (cfg.command == "generator") return cmd_generator(cfg);
        if (cfg.command == "suitable") return cmd_suitable(cfg);
        if (cfg.command == "search") return cmd_search(cfg);
        if (cfg.command == "approximate") return cmd_approximate(cfg);
        if (cfg.command == "sample") return cmd_sample(cfg);
        if (cfg.command == "verify") return cmd_verify(cfg);
        if (cfg.command == "selftest") return cmd_selftest(cfg);
        if (cfg.command == "cm-demo") return cmd_cm_demo(cfg);
        return EXIT_BAD_INPUT;
    } catch (const reduction_error& e) {
        std::cerr << "unsupported reduction: " << e.what() << "\n";
        return EXIT_UNSUPPORTED_REDUCTION;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_BAD_INPUT;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_BAD_INPUT;
    }
}
