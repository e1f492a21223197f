// qgroup: run check suites or one-shot computations on a grid quiver.
#include "qgroup/parse.hpp"
#include "qgroup/suites.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace qgroup;

namespace {

struct Flags {
    std::string config_path, grid, presentation, euler, serre, interval_order, out, expr;
    std::vector<std::string> suites, elements;
    std::optional<int> depth, order;
    std::optional<long> fuel;
    std::optional<std::uint64_t> seed;
    bool json = false;
};

RunConfig load(const Flags& f) {
    RunConfig c;
    if (!f.config_path.empty()) {
        std::ifstream in(f.config_path);
        if (!in) throw ConfigError("cannot read config " + f.config_path);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("config JSON: ") + e.what());
        }
        c = RunConfig::from_json(j);
    }
    if (!f.grid.empty()) c.grid = f.grid;
    if (!f.presentation.empty()) c.presentation = parse_presentation(f.presentation);
    if (!f.euler.empty()) c.euler = parse_euler_variant(f.euler);
    if (!f.serre.empty()) c.serre = parse_serre_variant(f.serre);
    if (!f.interval_order.empty()) c.interval_order = parse_interval_order(f.interval_order);
    if (!f.suites.empty()) c.suites = f.suites;
    if (!f.elements.empty()) c.elements = f.elements;
    if (f.depth) c.depth = *f.depth;
    if (f.order) c.order = *f.order;
    if (f.fuel) c.fuel = *f.fuel;
    if (f.seed) c.seed = *f.seed;
    if (!f.out.empty()) c.out = f.out;
    return c;
}

void emit(const std::string& text, const nlohmann::json& j, bool json) {
    std::cout << text << "\n";
    if (json) std::cout << j.dump(2) << "\n";
}

int run_suites(const Flags& f) {
    RunConfig c = load(f);
    const Report r = run(c);  // throws before any check on a bad config
    const std::string doc = r.json().dump(2) + "\n";
    if (c.out.empty()) {
        std::cout << doc;
    } else {
        std::ofstream o(c.out);
        if (!o) throw ConfigError("cannot write " + c.out);
        o << doc;
    }
    std::cerr << r.passed << " passed, " << r.failed << " failed, " << r.skipped << " skipped\n";
    return r.ok() ? 0 : 1;
}

// One-shot commands share the parse-and-embed step.
int one_shot(const std::string& cmd, const Flags& f) {
    RunConfig c = load(f);
    if (f.expr.empty()) throw ConfigError("--expr is required for " + cmd);
    const QuiverPtr qp = c.quiver();
    const Quiver& q = *qp;
    const Presentation p = c.presentation;
    const EngineOptions opt{c.fuel, false, c.order, true};
    nlohmann::json j = {{"command", cmd}, {"presentation", name(p)}, {"input", f.expr}};

    if (cmd == "membership") {
        MembershipReport r;
        if (is_polynomial(p)) {
            PolyEngine e(qp, opt);
            r = membership(Hopf<QFrac>(e), evaluate(e, p, parse_poly(f.expr, q, p)), c.depth, f.expr);
        } else if (is_formal(p)) {
            if (c.order <= c.depth) throw ConfigError("h-adic membership needs order > depth");
            FormalEngine e(qp, opt);
            r = membership(Hopf<SeriesH>(e), evaluate(e, p, parse_formal(f.expr, q, p, c.order)), c.depth, f.expr);
        } else {
            throw ConfigError("membership needs a quantum presentation");
        }
        std::cout << r.json().dump(2) << "\n";
        return r.pass ? 0 : 1;
    }

    auto finish = [&](const std::string& text) {
        j["result"] = text;
        emit(text, j, f.json);
        return 0;
    };

    if (is_polynomial(p)) {
        PolyEngine e(qp, opt);
        const Hopf<QFrac> h(e);
        const auto x = evaluate(e, p, parse_poly(f.expr, q, p));
        if (cmd == "normalform") return finish(basis_text(q, p, to_basis(e, p, x)));
        if (cmd == "coproduct") return finish(e.tensor_text(h.coproduct(x)));
        if (cmd == "antipode") return finish(basis_text(q, p, to_basis(e, p, h.antipode(x))));
        if (cmd == "limit") {
            if (p == Presentation::Uq) {
                ClassicalEngine ce(qp, opt);
                return finish(ce.expr_text(limit_uq(e, ce, x)));
            }
            return finish(comm_text(q, limit_uqtilde(e, x)));
        }
    } else if (is_formal(p)) {
        FormalEngine e(qp, opt);
        const Hopf<SeriesH> h(e);
        const auto x = evaluate(e, p, parse_formal(f.expr, q, p, c.order));
        if (cmd == "normalform") return finish(basis_text(q, p, to_basis(e, p, x)));
        if (cmd == "coproduct") return finish(e.tensor_text(h.coproduct(x)));
        if (cmd == "antipode") return finish(basis_text(q, p, to_basis(e, p, h.antipode(x))));
        if (cmd == "limit") {
            if (p != Presentation::UhTildeTrunc) throw ConfigError("limit is defined for Uq, UqTilde and UhTildeTrunc");
            LieBialgebra L(qp);
            const Cotangent ct = cotangent_uhtilde(e, x);
            return finish(ct.constant.get_str() + " + " + L.text(ct.linear) + " mod I^2");
        }
    } else {
        ClassicalEngine e(qp, opt);
        const Hopf<Rational> h(e);
        const auto x = evaluate(e, p, parse_classical(f.expr, q));
        if (cmd == "normalform") return finish(e.expr_text(x));
        if (cmd == "coproduct") return finish(e.tensor_text(h.coproduct(x)));
        if (cmd == "antipode") return finish(e.expr_text(h.antipode(x)));
        if (cmd == "limit") return finish(e.expr_text(x));
    }
    throw ConfigError("unknown command " + cmd);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum groups of a grid quiver: check suites and one-shot computations"};
    app.fallthrough();
    app.require_subcommand(0, 1);
    Flags f;
    app.add_option("--config", f.config_path, "JSON run configuration");
    app.add_option("--grid", f.grid, "breakpoints, e.g. \"0,1,2\" or a JSON array");
    app.add_option("--presentation", f.presentation, "Uq, UqTilde, UhTrunc, UhTildeTrunc or ClassicalU");
    app.add_option("--suite", f.suites, "suite to run (repeatable)");
    app.add_option("--element", f.elements, "extra membership element (repeatable)");
    app.add_option("--depth", f.depth, "delta_n depth");
    app.add_option("--order", f.order, "formal truncation order");
    app.add_option("--fuel", f.fuel, "rewrite steps per term");
    app.add_option("--seed", f.seed, "sampling seed");
    app.add_option("--euler", f.euler, "Euler form variant");
    app.add_option("--serre", f.serre, "Serre pair variant");
    app.add_option("--interval-order", f.interval_order, "lex or colex");
    app.add_option("--out", f.out, "report path (default stdout)");
    app.add_option("--expr", f.expr, "expression for one-shot commands");
    app.add_flag("--json", f.json, "also print JSON for one-shot commands");

    std::string command = "run";
    app.add_subcommand("run", "run the selected suites and write the JSON report");
    for (const char* c : {"normalform", "coproduct", "antipode", "membership", "limit"})
        app.add_subcommand(c, std::string("one-shot ") + c + " of --expr");
    app.add_subcommand("suites", "list the suite names");

    CLI11_PARSE(app, argc, argv);
    if (!app.get_subcommands().empty()) command = app.get_subcommands().front()->get_name();
    try {
        if (command == "suites") {
            for (const auto& s : suite_names()) std::cout << s << "\n";
            return 0;
        }
        if (command == "run") return run_suites(f);
        return one_shot(command, f);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
