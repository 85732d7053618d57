#include "doctest.h"

#include "support.hpp"
#include "wdk/cotangent.hpp"
#include "wdk/error.hpp"
#include "wdk/freeness.hpp"

#include <set>

using namespace wdk;
using wdk::testing::point;

namespace {

FamilySpec family(const Instance& inst, RankFunction mu, BasePsi base = BasePsi::canonical()) {
    return FamilySpec{inst, std::move(mu), std::move(base), true, true};
}

// n = 2 with mu_empty = 1 and a single jump mu_[2] = 2
FamilySpec jump_family(const Dvr& ring = Dvr()) {
    return family(Instance(2, 0, ring), RankFunction(2, {1, 1, 2, 1}));
}

std::uint64_t sum_ord_a(const OPoint& v, SigmaSet over) {
    std::uint64_t s = 0;
    for (int i : over.indices()) s += ord(v.a_at(i)).value();
    return s;
}

} // namespace

TEST_CASE("verdict names round-trip") {
    for (auto v : {Verdict::forced_equal, Verdict::contradiction_witnessed, Verdict::inconclusive})
        CHECK(verdict_from_string(to_string(v)) == v);
    CHECK_THROWS_AS(verdict_from_string("MAYBE"), ParseError);
}

TEST_CASE("witness examples") {
    Instance two(2, 1, Dvr());
    const auto v = find_witness(two, SigmaSet{1, 2}, 1, {{2, 2}}, 0);
    CHECK(ord(v.b_at(1)) == Valuation(5));
    CHECK(ord(v.a_at(2)) == Valuation(2));
    CHECK(classify(two, v) == Stratum::interior(SigmaSet{2}));

    CHECK(ord(find_witness(two, SigmaSet{2}, 2, {}, 3).b_at(2)) == Valuation(1));

    Instance three(3, 0, Dvr(Backend::polynomial, 7));
    CHECK(ord(find_witness(three, SigmaSet{1, 2, 3}, 3, {{1, 1}, {2, 1}}, 1).b_at(3)) == Valuation(5));

    CHECK_THROWS_AS(find_witness(two, SigmaSet{1, 2}, 1, {{2, 0}}, 0), PreconditionError);
    CHECK_THROWS_AS(find_witness(two, SigmaSet{1, 2}, 1, {}, 0), PreconditionError);
    CHECK_THROWS_AS(find_witness(two, SigmaSet{2}, 1, {}, 0), PreconditionError);
}

TEST_CASE("step examples") {
    for (const auto& ring : {Dvr(), Dvr(Backend::polynomial, 3)}) {
        const auto fam = jump_family(ring);
        const auto& inst = fam.inst;

        const auto sep = evaluate_step(fam, SigmaSet{1, 2}, 1, point(inst, {0, 2}, {5, 0}));
        CHECK(sep.multiplier == 1);
        CHECK(sep.lower_bound == 5);
        CHECK(sep.phi_B == 4);
        CHECK(sep.upper_bound == 4);
        CHECK(sep.unit_jump_separated);
        CHECK(sep.chain_consistent);
        CHECK(sep.verdict == Verdict::forced_equal);

        const auto weak = evaluate_step(fam, SigmaSet{1, 2}, 1, point(inst, {0, 2}, {2, 0}));
        CHECK(weak.lower_bound == 2);
        CHECK(weak.upper_bound == 4);
        CHECK(weak.verdict == Verdict::inconclusive);

        // same numbers read as data rather than as an induction step
        CHECK(evaluate_step(fam, SigmaSet{1, 2}, 1, point(inst, {0, 2}, {5, 0}), StepMode::diagnostic).verdict ==
              Verdict::contradiction_witnessed);
        CHECK(evaluate_step(fam, SigmaSet{1, 2}, 1, point(inst, {0, 2}, {5, 0}), StepMode::induction, false)
                  .verdict == Verdict::inconclusive);

        CHECK_THROWS_AS(evaluate_step(fam, SigmaSet{1, 2}, 1, point(inst, {2, 0}, {0, 5})), StratumError);
    }
}

TEST_CASE("step with zero multiplier is forced") {
    Instance inst(3, 1, Dvr());
    const auto fam = family(inst, RankFunction::constant(3, 1));
    const auto st = evaluate_step(fam, inst.full(), 2, find_witness(inst, inst.full(), 2, {{1, 1}, {3, 2}}, 5));
    CHECK(st.multiplier == 0);
    CHECK(st.lower_bound == 0);
    CHECK(st.upper_bound == 0);
    CHECK(st.verdict == Verdict::forced_equal);
}

TEST_CASE("inconsistent declared data is a witnessed contradiction") {
    Instance two(2, 0, Dvr());
    // base at [2] inflated past mu * Phi: the defect of M_[2] goes negative
    auto fam = family(two, RankFunction::constant(2, 1), BasePsi::table({{0, 0}, {2, 10}}));
    const auto st = evaluate_step(fam, SigmaSet{1, 2}, 1, point(two, {0, 2}, {5, 0}));
    CHECK_FALSE(st.chain_consistent);
    CHECK(st.defect_M_sigma_prime < 0);
    CHECK(st.verdict == Verdict::contradiction_witnessed);
}

TEST_CASE("undeclared hypotheses are rejected") {
    auto fam = jump_family();
    fam.gorenstein_declared = false;
    CHECK_THROWS_AS(evaluate_step(fam, SigmaSet{1, 2}, 1, point(fam.inst, {0, 2}, {5, 0})), PreconditionError);
    CHECK_THROWS_AS(run_descent(fam, 1), PreconditionError);
}

TEST_CASE("constant rank functions give all-forced certificates") {
    for (std::uint64_t mu : {1, 2}) {
        Instance inst(3, 1, Dvr());
        const auto fam = family(inst, RankFunction::constant(3, mu));
        const auto cert = run_descent(fam, 1);
        CHECK(cert.all_forced());
        CHECK(cert.steps.size() == 7);
        CHECK(cert.conclusion.size() == 8);
        for (const auto& [bits, value] : cert.conclusion) CHECK(value == mu);
        CHECK(verify_certificate(fam, cert).pass);
    }
}

TEST_CASE("hypothesis gates") {
    Instance two(2, 0, Dvr());
    auto bad_top = family(two, RankFunction(2, {1, 1, 1, 2}));
    CHECK_THROWS_WITH_AS(run_descent(bad_top, 1), doctest::Contains("mu_T <= mu_empty"), PreconditionError);
    CHECK_THROWS_AS(run_descent(bad_top, 1, {{}, true, std::nullopt, {}}), PreconditionError);

    auto below = family(two, RankFunction(2, {2, 1, 2, 2}));
    CHECK_THROWS_WITH_AS(run_descent(below, 1), doctest::Contains("free-summand"), PreconditionError);

    CHECK_THROWS_AS(run_descent(family(two, RankFunction::constant(2, 1)), 1, {{1, 1}, false, std::nullopt, {}}),
                    PreconditionError);
}

TEST_CASE("interior jumps are refuted and certified") {
    Instance inst(3, 0, Dvr(Backend::polynomial, 5));
    // mu_empty = mu_T = 1, intermediate strata above
    const auto fam = family(inst, RankFunction(3, {1, 2, 3, 1, 2, 4, 2, 1}));
    const auto cert = run_descent(fam, 11);
    CHECK(cert.all_forced());
    for (const auto& [bits, value] : cert.conclusion) CHECK(value == 1);
    int separated = 0;
    for (const auto& st : cert.steps) {
        if (st.multiplier > 0) {
            CHECK(st.lower_bound > st.upper_bound);
            ++separated;
        }
    }
    CHECK(separated == 5);
    CHECK(verify_certificate(fam, cert).pass);
}

TEST_CASE("certificate structure") {
    Instance inst(3, 1, Dvr());
    const auto fam = family(inst, RankFunction(3, {2, 3, 2, 2, 4, 2, 3, 2}));
    const auto cert = run_descent(fam, 4, {{3, 1, 2}, false, std::nullopt, {}});
    // each step's parent is T or an earlier step's S'
    std::set<std::uint32_t> seen{inst.full().bits()};
    for (const auto& st : cert.steps) {
        CHECK(seen.contains(st.sigma.bits()));
        CHECK(st.sigma_prime == st.sigma.without(st.s));
        seen.insert(st.sigma_prime.bits());
        // bound formula identity
        const auto sum = sum_ord_a(st.witness, st.sigma_prime);
        CHECK(st.upper_bound == st.multiplier * static_cast<std::int64_t>(sum + std::min(st.ord_b_s, sum)));
        CHECK(st.lower_bound == st.multiplier * static_cast<std::int64_t>(st.ord_b_s));
        CHECK(st.ord_b_s == 2 * sum + 1);
        CHECK(st.assumed.size() == 4);
    }
    CHECK(seen.size() == 8);
    const auto text = render_certificate(cert);
    CHECK(text.find("removal order: 3 1 2") != std::string::npos);
    CHECK(text.find("verdict FORCED_EQUAL") != std::string::npos);
}

TEST_CASE("tampered certificates fail verification") {
    Instance inst(2, 1, Dvr());
    const auto fam = family(inst, RankFunction(2, {1, 2, 1, 1}));
    const auto cert = run_descent(fam, 9);
    REQUIRE(verify_certificate(fam, cert).pass);

    auto t1 = cert;
    t1.steps[0].lower_bound += 1;
    CHECK_FALSE(verify_certificate(fam, t1).pass);

    auto t2 = cert;
    t2.steps.pop_back();
    CHECK_FALSE(verify_certificate(fam, t2).pass);

    auto t3 = cert;
    t3.conclusion[0] = 7;
    CHECK_FALSE(verify_certificate(fam, t3).pass);

    auto t4 = cert;
    t4.steps[0].verdict = Verdict::inconclusive;
    CHECK(verify_certificate(fam, t4).diagnostic.find("verdict") != std::string::npos);

    auto t5 = cert;
    std::swap(t5.steps.front(), t5.steps.back());
    CHECK_FALSE(verify_certificate(fam, t5).pass);

    CHECK_FALSE(verify_certificate(family(inst, RankFunction(2, {1, 1, 1, 1})), cert).pass);
}

TEST_CASE("witness adequacy (exhaustive small sweep)") {
    // every (S, s) with |S| <= n <= 3 and every prescribed ord_a with entries <= 6
    for (int n = 1; n <= 3; ++n) {
        Instance inst(n, 0, Dvr());
        for (const auto sigma : inst.subsets()) {
            for (int s : sigma.indices()) {
                const auto sp = sigma.without(s);
                if (sp.empty()) continue; // a jump needs mu_S' to differ from mu_empty
                const auto idx = sp.indices();
                std::vector<std::uint64_t> ords(idx.size(), 1);
                while (true) {
                    std::map<int, std::uint64_t> ord_a;
                    for (std::size_t k = 0; k < idx.size(); ++k) ord_a[idx[k]] = ords[k];
                    const auto v = find_witness(inst, sigma, s, ord_a, ords.empty() ? 0 : ords[0]);
                    std::vector<std::uint64_t> mu(std::size_t{1} << n, 1);
                    mu[sp.bits()] = 2;
                    const auto st = evaluate_step(family(inst, RankFunction(n, mu)), sigma, s, v);
                    CHECK(st.lower_bound > st.upper_bound);
                    CHECK(st.verdict == Verdict::forced_equal);
                    std::size_t k = 0;
                    while (k < ords.size() && ords[k] == 6) ords[k++] = 1;
                    if (k == ords.size()) break;
                    ++ords[k];
                }
            }
        }
    }
}

TEST_CASE("determinism and removal-order independence") {
    Instance inst(3, 2, Dvr(Backend::polynomial, 5));
    const auto fam = family(inst, RankFunction(3, {1, 1, 2, 3, 1, 2, 1, 1}));
    CHECK(render_certificate(run_descent(fam, 77)) == render_certificate(run_descent(fam, 77)));
    const std::vector<std::vector<int>> orders{{1, 2, 3}, {1, 3, 2}, {2, 1, 3}, {2, 3, 1}, {3, 1, 2}, {3, 2, 1}};
    for (const auto& order : orders) {
        const auto cert = run_descent(fam, 77, {order, false, std::nullopt, {}});
        CHECK(cert.all_forced());
        CHECK(cert.conclusion == run_descent(fam, 77).conclusion);
        CHECK(verify_certificate(fam, cert).pass);
    }
}

TEST_CASE("a non-separating witness stops the descent") {
    const auto fam = jump_family();
    DescentOptions opts;
    // ord(b_s) = 1 never beats Phi(B) >= 1 once S' is nonempty
    opts.witness_factory = [](const Instance& inst, SigmaSet sigma, int s, std::uint64_t) {
        std::vector<int> a(inst.n, 0), b(inst.n, 0);
        for (int i = 1; i <= inst.n; ++i) {
            if (sigma.without(s).contains(i)) a[i - 1] = 1;
            else b[i - 1] = 1;
        }
        return point(inst, a, b);
    };
    try {
        run_descent(fam, 1, opts);
        FAIL("expected DescentError");
    } catch (const DescentError& e) {
        CHECK(std::string(e.what()).find("INCONCLUSIVE") != std::string::npos);
        CHECK_FALSE(e.certificate().all_forced());
        CHECK(e.certificate().conclusion.size() < 4);
        CHECK(verify_certificate(fam, e.certificate()).pass);
    }
}

TEST_CASE("diagnostic run on a hypothesis-violating family") {
    Instance two(2, 0, Dvr());
    const auto fam = family(two, RankFunction(2, {1, 1, 2, 2}));
    DescentOptions opts;
    opts.witness_ord_a = 2;
    const auto cert = diagnose_descent(fam, 1, opts);
    CHECK_FALSE(cert.hypotheses_hold);
    CHECK_FALSE(cert.all_forced());
    const auto& first = cert.steps[1];
    CHECK(cert.steps[0].sigma_prime == SigmaSet{1});
    CHECK(cert.steps[0].verdict == Verdict::forced_equal);
    CHECK(first.sigma_prime == SigmaSet{2});
    CHECK(first.lower_bound == 5);
    CHECK(first.upper_bound == 4);
    CHECK(first.verdict == Verdict::contradiction_witnessed);
    CHECK(verify_certificate(fam, cert).pass);
}
