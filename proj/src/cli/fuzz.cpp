#include "fuzz.hpp"

#include "wdk/congruence.hpp"
#include "wdk/cotangent.hpp"
#include "wdk/error.hpp"
#include "wdk/random.hpp"

#include <cstdio>
#include <sstream>

namespace wdk::cli {

namespace {

void mix(FuzzCheck& c, std::uint64_t x) {
    for (int i = 0; i < 8; ++i) {
        c.checksum ^= (x >> (8 * i)) & 0xffu;
        c.checksum *= 0x100000001b3ull;
    }
}

void mix(FuzzCheck& c, const SnfResult& s) {
    mix(c, s.free_rank);
    mix(c, s.divisor_valuations.size());
    for (auto d : s.divisor_valuations) mix(c, d);
}

std::string hex(std::uint64_t x) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(x));
    return buf;
}

SigmaSet random_subset_of(SigmaSet of, Rng& rng) {
    SigmaSet out;
    for (int i : of.indices())
        if (rng.chance(1, 2)) out = out.with(i);
    return out;
}

OPoint redraw_units(const Instance& inst, const OPoint& v, Rng& rng) {
    OPoint u = v;
    for (auto* xs : {&u.a, &u.b, &u.c})
        for (auto& x : *xs)
            if (!x.is_zero()) x = inst.ring.element(ord(x).value(), inst.ring.unit_from_code(rng.next()));
    return u;
}

std::string lengths(std::uint64_t closed, std::uint64_t oracle) {
    return "closed form " + std::to_string(closed) + ", SNF oracle " + std::to_string(oracle);
}

} // namespace

std::uint64_t FuzzResult::failures() const {
    std::uint64_t f = 0;
    for (const auto& c : checks) f += c.failures;
    return f;
}

FuzzResult run_fuzz(const FuzzOptions& opts) {
    if (opts.n_max < 1 || opts.n_max > 8) throw PreconditionError("--n-max must be in 1..8");
    if (opts.g_max < 0 || opts.g_max > 8) throw PreconditionError("--g-max must be in 0..8");
    if (opts.ord_max < 1 || opts.ord_max > 60) throw PreconditionError("--ord-max must be in 1..60");
    if (opts.trials < 1) throw PreconditionError("--trials must be >= 1");

    FuzzResult r;
    r.options = opts;
    r.checks = {{"cotangent_A_closed_vs_snf"}, {"unit_invariance"}, {"backend_invariance"},
                {"psi_two_path"},              {"free_summand"},    {"cotangent_B_closed_vs_snf"}};
    auto& c_a = r.checks[0];
    auto& c_unit = r.checks[1];
    auto& c_backend = r.checks[2];
    auto& c_psi = r.checks[3];
    auto& c_free = r.checks[4];
    auto& c_b = r.checks[5];
    const OrdRange ords{1, opts.ord_max};

    for (std::uint64_t trial = 0; trial < opts.trials; ++trial) {
        Rng rng(opts.seed, trial);
        const int n = static_cast<int>(rng.uniform(1, static_cast<std::uint64_t>(opts.n_max)));
        const int g = static_cast<int>(rng.uniform(0, static_cast<std::uint64_t>(opts.g_max)));
        const Instance inst(n, g, opts.ring);
        const auto sigma = random_subset_of(inst.full(), rng);
        const auto comp = random_subset_of(sigma, rng);
        const auto point_seed = rng.next();
        const auto v = random_point(inst, comp, ords, point_seed);

        auto fail = [&](FuzzCheck& c, const std::string& detail, const OPoint& at, SigmaSet sg,
                        std::optional<int> s, const std::string& command, const FamilySpec* fam = nullptr) {
            ++c.failures;
            if (r.counterexample) return;
            Counterexample ce;
            ce.check = c.name;
            ce.trial = trial;
            ce.detail = detail;
            ce.instance.inst = inst;
            ce.instance.points = {{"counterexample", at}};
            ce.instance.demo.command = command;
            ce.instance.demo.sigma = sg;
            ce.instance.demo.point = "counterexample";
            ce.instance.demo.s = s;
            if (fam) {
                ce.instance.mu = fam->mu;
                ce.instance.base = fam->base;
                ce.instance.depth = fam->depth_declared;
                ce.instance.gorenstein = fam->gorenstein_declared;
            }
            r.counterexample = std::move(ce);
        };

        // closed form against the SNF of the presentation
        const auto snf_a = snf(cotangent_presentation_A(inst, sigma, v));
        const auto closed = cotangent_length_closed(inst, sigma, v);
        const auto oracle = torsion_length(snf_a) + (opts.corrupt_oracle ? 1 : 0);
        ++c_a.trials;
        mix(c_a, closed);
        mix(c_a, snf_a);
        if (closed != oracle) fail(c_a, lengths(closed, oracle), v, sigma, std::nullopt, "cotangent");

        // same valuations, fresh units
        const auto u = redraw_units(inst, v, rng);
        const auto snf_u = snf(cotangent_presentation_A(inst, sigma, u));
        ++c_unit.trials;
        mix(c_unit, snf_u);
        if (!(snf_u == snf_a)) fail(c_unit, "SNF changed under a unit change", u, sigma, std::nullopt, "cotangent");

        // same draws over the other backend
        const Instance twin(n, g, opts.ring.other());
        const auto w = random_point(twin, comp, ords, point_seed);
        const auto snf_w = snf(cotangent_presentation_A(twin, sigma, w));
        ++c_backend.trials;
        mix(c_backend, snf_w);
        if (!(snf_w == snf_a))
            fail(c_backend, "SNF differs on " + twin.ring.to_string(), v, sigma, std::nullopt, "cotangent");

        // Psi recursion against Phi for the rank-one canonical family
        const FamilySpec canon{inst, RankFunction::constant(n, 1), BasePsi::canonical(), true, true};
        const auto psi = psi_length(canon, sigma, v);
        ++c_psi.trials;
        mix(c_psi, psi);
        if (psi != closed)
            fail(c_psi, "Psi " + std::to_string(psi) + " vs Phi " + std::to_string(closed), v, sigma, std::nullopt,
                 "psi", &canon);

        // minimal stratum: Psi = mu_empty * Phi
        std::vector<std::uint64_t> mu(std::size_t{1} << n);
        for (auto& m : mu) m = rng.uniform(0, 4);
        const FamilySpec mz{inst, RankFunction(n, mu), BasePsi::minimal_zero(), true, true};
        const auto v0 = random_point(inst, SigmaSet{}, ords, rng.next());
        const auto led = wiles_defect(mz, sigma, v0);
        ++c_free.trials;
        mix(c_free, led.psi_length);
        mix(c_free, led.phi_length);
        if (!free_summand_criterion(mz, sigma, v0))
            fail(c_free,
                 "Psi " + std::to_string(led.psi_length) + " != mu_empty * Phi = " + std::to_string(mu[0]) + " * " +
                     std::to_string(led.phi_length),
                 v0, sigma, std::nullopt, "defect", &mz);

        // quotient B, hitting the saturation boundary ord(b_s) = S about a third of the time
        const auto sigma_b = sigma.empty() ? SigmaSet{}.with(static_cast<int>(rng.uniform(1, n))) : sigma;
        const auto idx = sigma_b.indices();
        const int s = idx[rng.uniform(0, idx.size() - 1)];
        auto vb = random_point(inst, sigma_b.without(s), ords, rng.next());
        std::uint64_t sum = 0;
        for (int i : sigma_b.without(s).indices()) sum += ord(vb.a_at(i)).value();
        const auto saturate = rng.chance(1, 3);
        const auto unit_code = rng.next();
        if (saturate && sum >= 1) vb.b[static_cast<std::size_t>(s - 1)] = inst.ring.element(sum, inst.ring.unit_from_code(unit_code));
        const auto snf_b = snf(cotangent_presentation_B(inst, sigma_b, s, vb));
        const auto closed_b = cotangent_length_B(inst, sigma_b, s, vb);
        ++c_b.trials;
        mix(c_b, closed_b);
        mix(c_b, snf_b);
        if (closed_b != torsion_length(snf_b))
            fail(c_b, lengths(closed_b, torsion_length(snf_b)), vb, sigma_b, s, "cotangent-b");
    }
    return r;
}

Json fuzz_json(const FuzzResult& r) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "fuzz";
    const auto& o = r.options;
    j["parameters"] = {{"n_max", o.n_max}, {"g_max", o.g_max}, {"ord_max", o.ord_max}, {"trials", o.trials}, {"seed", o.seed}};
    Json checks = Json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"name", c.name}, {"trials", c.trials}, {"failures", c.failures}, {"checksum", hex(c.checksum)}});
    j["checks"] = checks;
    j["failures"] = r.failures();
    if (r.counterexample) {
        const auto& ce = *r.counterexample;
        j["counterexample"] = {{"check", ce.check},
                               {"trial", ce.trial},
                               {"detail", ce.detail},
                               {"instance_toml", to_toml(ce.instance)},
                               {"replay", "save instance_toml to FILE, then: wdk demo FILE"}};
    } else {
        j["counterexample"] = nullptr;
    }
    return j;
}

std::string fuzz_csv(const FuzzResult& r) {
    std::string out = csv_row({"check", "trials", "failures", "checksum"});
    for (const auto& c : r.checks)
        out += csv_row({c.name, std::to_string(c.trials), std::to_string(c.failures), hex(c.checksum)});
    return out;
}

} // namespace wdk::cli
