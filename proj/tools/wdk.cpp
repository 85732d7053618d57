#include "commands.hpp"
#include "demos.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <iostream>

using namespace wdk;
using namespace wdk::cli;

int main(int argc, char** argv) {
    CLI::App app{"Cotangent and congruence lengths for the A_S ring family, with descent certificates"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string backend;
    std::string format = "json";
    std::uint64_t seed = 1;
    app.add_option("--backend", backend, "rational:p or poly:q (default: the file's, then $WDK_BACKEND)");
    app.add_option("--out", format, "json, csv, or text (descent only)");
    auto* seed_opt = app.add_option("--seed", seed, "seed for descent witnesses and fuzz trials");

    Selection sel;
    std::string file;
    std::string sigma;
    std::string point;
    int s = 0;

    auto file_command = [&](const std::string& name, const std::string& help, bool with_s) {
        auto* c = app.add_subcommand(name, help);
        c->add_option("file", file, "instance file, or demo:NAME")->required();
        c->add_option("--sigma", sigma, "subset S as a sorted list, e.g. [1,2] (default: [demo] sigma, then T)");
        c->add_option("--point", point, "named point (default: [demo] point, then all points)");
        if (with_s) c->add_option("--s", s, "index removed from S (default: [demo] s)");
        return c;
    };
    auto* cot = file_command("cotangent", "cotangent module of A_S: SNF oracle next to the closed form", false);
    auto* cot_b = file_command("cotangent-b", "cotangent module of B = A_S / (prod x_i) at points of Z°_{S-s}", true);
    auto* psi = file_command("psi", "congruence length Psi(M_S) from the recursion and base_psi", false);
    auto* defect = file_command("defect", "Wiles defect ledger, with the nonnegativity check when depth is declared",
                                false);
    auto* descent = app.add_subcommand("descent", "descent certificate for the rank function in [mu]");
    descent->add_option("file", file, "instance file, or demo:NAME")->required();

    FuzzOptions fz;
    bool corrupt = false;
    auto* fuzz = app.add_subcommand("fuzz", "randomized closed-form vs oracle properties");
    fuzz->add_option("--n-max", fz.n_max, "largest n")->capture_default_str();
    fuzz->add_option("--g-max", fz.g_max, "largest g")->capture_default_str();
    fuzz->add_option("--ord-max", fz.ord_max, "largest coordinate order")->capture_default_str();
    fuzz->add_option("--trials", fz.trials, "number of trials")->capture_default_str();
    fuzz->add_flag("--corrupt-oracle", corrupt, "harness self-test: skew the SNF side")->group("");

    std::string demo_name;
    bool list = false;
    bool show = false;
    auto* demo = app.add_subcommand("demo", "run the [demo] command of a shipped demo or an instance file");
    demo->add_option("name", demo_name, "demo name or instance file path");
    demo->add_flag("--list", list, "list shipped demos");
    demo->add_flag("--show", show, "print the demo file instead of running it");
    demo->add_option("--sigma", sigma, "override [demo] sigma");
    demo->add_option("--point", point, "override [demo] point");
    demo->add_option("--s", s, "override [demo] s");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    return guarded(
        [&]() -> int {
            const auto fmt = parse_format(format);
            Backends backends;
            if (!backend.empty()) backends.flag = Dvr::parse(backend);
            const char* env = std::getenv("WDK_BACKEND");
            if (env && *env) backends.fallback = Dvr::parse(env);
            if (!sigma.empty()) sel.sigma = sigma;
            if (!point.empty()) sel.point = point;
            if (s != 0) sel.s = s;
            if (seed_opt->count() > 0) sel.seed = seed;

            if (*fuzz) {
                fz.seed = seed;
                fz.ring = backends.flag ? *backends.flag : backends.fallback.value_or(Dvr());
                fz.corrupt_oracle = corrupt;
                return cmd_fuzz(fz, fmt, std::cout);
            }
            if (*demo) {
                if (list) {
                    for (const auto& d : demos()) std::cout << d.name << "\n";
                    return kOk;
                }
                if (demo_name.empty()) throw ParseError("demo needs a name (see --list)");
                const bool shipped = find_demo(demo_name).has_value();
                if (show) {
                    if (!shipped) throw ParseError("no demo named '" + demo_name + "'");
                    std::cout << *find_demo(demo_name);
                    return kOk;
                }
                const auto f = load_instance(shipped ? "demo:" + demo_name : demo_name, backends);
                return cmd_demo(f, sel, fmt, std::cout, std::cerr);
            }
            const auto f = load_instance(file, backends);
            if (*cot) return cmd_cotangent(f, sel, fmt, std::cout);
            if (*cot_b) return cmd_cotangent_b(f, sel, fmt, std::cout);
            if (*psi) return cmd_psi(f, sel, fmt, std::cout);
            if (*defect) return cmd_defect(f, sel, fmt, std::cout);
            if (*descent) return cmd_descent(f, sel, fmt, std::cout, std::cerr);
            return kUsage;
        },
        std::cerr);
}
