#include "wdk/freeness.hpp"

#include "wdk/cotangent.hpp"
#include "wdk/random.hpp"

#include <algorithm>
#include <iomanip>
#include <set>
#include <sstream>

namespace wdk {

namespace {

constexpr const char* kAssumeSummand =
    "Psi(M_S') >= mu_empty * Psi(A_S'): M_S' has a free summand of rank mu_empty (Gorenstein ring, MCM module)";
constexpr const char* kAssumeFactor = "W_S is an MCM module over B: induction hypothesis mu_S <= mu_empty";
constexpr const char* kAssumeInvariance = "Psi^B(W_S) = Psi(W_S): invariance of domain (depth W_S >= c)";
constexpr const char* kAssumeNonneg =
    "(mu_S' - mu_empty) * Phi(B) >= Psi^B(W_S): Wiles defect of W_S over B is >= 0 (depth >= c+1)";

std::int64_t as_signed(std::uint64_t x) { return static_cast<std::int64_t>(x); }

std::vector<int> resolve_order(const Instance& inst, const std::vector<int>& requested) {
    std::vector<int> order = requested;
    if (order.empty())
        for (int i = 1; i <= inst.n; ++i) order.push_back(i);
    auto sorted = order;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != inst.full().indices())
        throw PreconditionError("removal order must be a permutation of " + inst.full().to_string());
    return order;
}

void require_declared(const FamilySpec& fam) {
    if (!fam.depth_declared || !fam.gorenstein_declared)
        throw PreconditionError("the freeness criterion needs the family to declare both the depth and the "
                                "Gorenstein/maximal Cohen-Macaulay hypotheses");
}

DescentCertificate build(const FamilySpec& fam, std::uint64_t seed, const DescentOptions& opts, StepMode mode,
                         bool hypotheses_hold) {
    const auto& inst = fam.inst;
    const auto order = resolve_order(inst, opts.removal_order);
    const auto full = inst.full();
    const auto mu0 = fam.mu(SigmaSet{});

    DescentCertificate cert;
    cert.n = inst.n;
    cert.mu_empty = mu0;
    cert.seed = seed;
    cert.removal_order = order;
    cert.mode = mode;
    cert.hypotheses_hold = hypotheses_hold;

    std::set<std::uint32_t> established;
    if (mode == StepMode::induction && fam.mu(full) <= mu0) {
        established.insert(full.bits());
        if (fam.mu(full) == mu0) cert.conclusion[full.bits()] = mu0;
    }

    auto proper = inst.subsets();
    proper.erase(std::remove(proper.begin(), proper.end(), full), proper.end());
    std::stable_sort(proper.begin(), proper.end(), [](SigmaSet x, SigmaSet y) { return x.size() > y.size(); });

    for (const auto sp : proper) {
        // the index of T \ S' removed last in `order` names the parent
        int s = 0;
        for (int i : order)
            if (!sp.contains(i)) s = i;
        const auto sigma = sp.with(s);

        Rng rng(seed, sp.bits() + 1);
        std::map<int, std::uint64_t> ord_a;
        for (int i : sp.indices()) ord_a[i] = opts.witness_ord_a ? *opts.witness_ord_a : rng.uniform(1, 3);
        const auto point_seed = rng.next();
        const auto v = opts.witness_factory ? opts.witness_factory(inst, sigma, s, point_seed)
                                            : find_witness(inst, sigma, s, ord_a, point_seed);

        auto step = evaluate_step(fam, sigma, s, v, mode, established.contains(sigma.bits()));
        if (mode == StepMode::induction && step.verdict == Verdict::forced_equal) {
            established.insert(sp.bits());
            cert.conclusion[sp.bits()] = mu0;
        }
        cert.steps.push_back(std::move(step));
    }
    return cert;
}

} // namespace

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::forced_equal: return "FORCED_EQUAL";
    case Verdict::contradiction_witnessed: return "CONTRADICTION_WITNESSED";
    case Verdict::inconclusive: return "INCONCLUSIVE";
    }
    return "INCONCLUSIVE";
}

Verdict verdict_from_string(const std::string& s) {
    if (s == "FORCED_EQUAL") return Verdict::forced_equal;
    if (s == "CONTRADICTION_WITNESSED") return Verdict::contradiction_witnessed;
    if (s == "INCONCLUSIVE") return Verdict::inconclusive;
    throw ParseError("unknown verdict '" + s + "'");
}

bool DescentCertificate::all_forced() const {
    if (!hypotheses_hold || mode != StepMode::induction) return false;
    for (const auto& st : steps)
        if (st.verdict != Verdict::forced_equal) return false;
    return conclusion.size() == (std::size_t{1} << n);
}

OPoint find_witness(const Instance& inst, SigmaSet sigma, int s, const std::map<int, std::uint64_t>& ord_a,
                    std::uint64_t seed) {
    inst.check_sigma(sigma);
    if (!sigma.contains(s)) throw PreconditionError("s = " + std::to_string(s) + " is not in " + sigma.to_string());
    const auto sp = sigma.without(s);
    std::uint64_t sum = 0;
    for (int i : sp.indices()) {
        auto it = ord_a.find(i);
        if (it == ord_a.end()) throw PreconditionError("no prescribed ord(a_" + std::to_string(i) + ")");
        if (it->second < 1) throw PreconditionError("prescribed ord(a_" + std::to_string(i) + ") must be >= 1");
        sum += it->second;
    }
    for (const auto& [i, k] : ord_a)
        if (!sp.contains(i))
            throw PreconditionError("ord(a_" + std::to_string(i) + ") prescribed outside " + sp.to_string());

    Rng rng(seed);
    const auto& ring = inst.ring;
    auto unit = [&] { return ring.unit_from_code(rng.next()); };
    OPoint v;
    for (int i = 1; i <= inst.n; ++i) {
        if (sp.contains(i)) {
            v.a.push_back(ring.element(ord_a.at(i), unit()));
            v.b.push_back(ring.zero());
        } else {
            v.a.push_back(ring.zero());
            const auto k = i == s ? 2 * sum + 1 : rng.uniform(1, 3);
            v.b.push_back(ring.element(k, unit()));
        }
    }
    for (int k = 0; k < inst.g; ++k) {
        if (rng.chance(1, 4)) v.c.push_back(ring.zero());
        else v.c.push_back(ring.element(rng.uniform(1, 3), unit()));
    }
    return v;
}

DescentStep evaluate_step(const FamilySpec& fam, SigmaSet sigma, int s, const OPoint& v, StepMode mode,
                          bool parent_established) {
    require_declared(fam);
    const auto& inst = fam.inst;
    inst.check_sigma(sigma);
    if (!sigma.contains(s)) throw PreconditionError("s = " + std::to_string(s) + " is not in " + sigma.to_string());
    const auto sp = sigma.without(s);
    const auto st = classify(inst, v);
    if (!st.is_interior() || st.component() != sp)
        throw StratumError("witness is " + st.to_string() + ", expected a point of Z°_" + sp.to_string());

    DescentStep step;
    step.sigma = sigma;
    step.s = s;
    step.sigma_prime = sp;
    step.witness = v;
    step.parent_established = parent_established;

    const auto mu0 = fam.mu(SigmaSet{});
    const auto mup = fam.mu(sp);
    step.multiplier = as_signed(mup) - as_signed(mu0);
    step.ord_b_s = v.b_at(s).ord().value();
    step.phi_B = cotangent_length_B(inst, sigma, s, v);
    step.lower_bound = step.multiplier * as_signed(step.ord_b_s);
    step.upper_bound = step.multiplier * as_signed(step.phi_B);

    step.psi_M_sigma = psi_length(fam, sigma, v);
    step.psi_M_sigma_prime = psi_length(fam, sp, v);
    step.phi_A_sigma = cotangent_length_closed(inst, sigma, v);
    step.phi_A_sigma_prime = cotangent_length_closed(inst, sp, v);
    step.psi_W_sigma = as_signed(step.psi_M_sigma) - as_signed(mu0 * step.phi_A_sigma);
    step.defect_M_sigma = as_signed(mup * step.phi_A_sigma) - as_signed(step.psi_M_sigma);
    step.defect_M_sigma_prime = as_signed(mup * step.phi_A_sigma_prime) - as_signed(step.psi_M_sigma_prime);

    step.unit_jump_separated = step.ord_b_s > step.phi_B;
    step.chain_consistent =
        step.psi_W_sigma >= step.lower_bound && step.defect_M_sigma >= 0 && step.defect_M_sigma_prime >= 0;

    step.assumed = {kAssumeSummand, kAssumeFactor, kAssumeInvariance, kAssumeNonneg};
    step.verified = {
        "Psi(M_S) = Psi(M_S') + mu_S' * ord(b_s): " + std::to_string(step.psi_M_sigma) + " = " +
            std::to_string(step.psi_M_sigma_prime) + " + " + std::to_string(mup) + "*" + std::to_string(step.ord_b_s),
        "Phi(A_S) - Phi(A_S') = ord(b_s): " + std::to_string(step.phi_A_sigma) + " - " +
            std::to_string(step.phi_A_sigma_prime) + " = " + std::to_string(step.ord_b_s),
        "Psi(W_S) >= (mu_S' - mu_empty) * ord(b_s): " + std::to_string(step.psi_W_sigma) +
            (step.psi_W_sigma >= step.lower_bound ? " >= " : " < ") + std::to_string(step.lower_bound),
        "Phi(B) = S + min(ord(b_s), S) with S = sum ord(a_i): " + std::to_string(step.phi_B),
    };
    if (step.psi_M_sigma != step.psi_M_sigma_prime + mup * step.ord_b_s ||
        step.phi_A_sigma != step.phi_A_sigma_prime + step.ord_b_s)
        throw OracleMismatch("recursion identities failed at step " + sigma.to_string() + " -> " + sp.to_string());

    auto separated = step.lower_bound > step.upper_bound;
    if (!step.chain_consistent) {
        step.verdict = Verdict::contradiction_witnessed;
        step.note = "declared base_psi data breaks the chain: defect(M_S) = " + std::to_string(step.defect_M_sigma) +
                    ", defect(M_S') = " + std::to_string(step.defect_M_sigma_prime) +
                    ", Psi(W_S) = " + std::to_string(step.psi_W_sigma);
    } else if (step.multiplier < 0) {
        step.verdict = Verdict::inconclusive;
        step.note = "declared mu_S' < mu_empty contradicts the free-summand bound mu_S' >= mu_empty";
    } else if (mode == StepMode::induction && !parent_established) {
        step.verdict = Verdict::inconclusive;
        step.note = "parent " + sigma.to_string() + " not established, induction hypothesis unavailable";
    } else if (step.multiplier == 0) {
        step.verdict = Verdict::forced_equal;
        step.note = "zero multiplier: declared mu_S' = mu_empty, both bounds vanish";
    } else if (separated) {
        step.verified.push_back("lower > upper: " + std::to_string(step.lower_bound) + " > " +
                                std::to_string(step.upper_bound));
        if (mode == StepMode::induction) {
            step.verdict = Verdict::forced_equal;
            step.note = "declared mu_S' = " + std::to_string(mup) + " refuted; mu_S' = mu_empty = " +
                        std::to_string(mu0) + " forced";
        } else {
            step.verdict = Verdict::contradiction_witnessed;
            step.note = "declared mu_S' = " + std::to_string(mup) + " > mu_empty = " + std::to_string(mu0) +
                        " would make the defect of W_S over B negative";
        }
    } else {
        step.verdict = Verdict::inconclusive;
        step.note = "witness does not separate the bounds: " + std::to_string(step.lower_bound) +
                    " <= " + std::to_string(step.upper_bound);
    }
    return step;
}

DescentCertificate run_descent(const FamilySpec& fam, std::uint64_t seed, const DescentOptions& opts) {
    require_declared(fam);
    const auto full = fam.inst.full();
    const auto mu0 = fam.mu(SigmaSet{});
    if (fam.mu(full) > mu0)
        throw PreconditionError("hypothesis mu_T <= mu_empty fails: mu_T = " + std::to_string(fam.mu(full)) +
                                " > mu_empty = " + std::to_string(mu0));
    if (!opts.override_rank_gate)
        for (const auto sg : fam.inst.subsets())
            if (fam.mu(sg) < mu0)
                throw PreconditionError("mu_" + sg.to_string() + " = " + std::to_string(fam.mu(sg)) +
                                        " < mu_empty = " + std::to_string(mu0) +
                                        " contradicts the free-summand bound mu_S >= mu_empty");
    auto cert = build(fam, seed, opts, StepMode::induction, true);
    if (!cert.all_forced()) {
        std::string which;
        for (const auto& st : cert.steps)
            if (st.verdict != Verdict::forced_equal) {
                which = st.sigma.to_string() + " -> " + st.sigma_prime.to_string() + ": " + to_string(st.verdict) +
                        " (" + st.note + ")";
                break;
            }
        throw DescentError("descent not forced at step " + which, std::move(cert));
    }
    return cert;
}

DescentCertificate diagnose_descent(const FamilySpec& fam, std::uint64_t seed, const DescentOptions& opts) {
    require_declared(fam);
    const auto mu0 = fam.mu(SigmaSet{});
    bool hold = fam.mu(fam.inst.full()) <= mu0;
    for (const auto sg : fam.inst.subsets()) hold = hold && fam.mu(sg) >= mu0;
    return build(fam, seed, opts, StepMode::diagnostic, hold);
}

AssertionResult verify_certificate(const FamilySpec& fam, const DescentCertificate& cert) {
    const auto& inst = fam.inst;
    auto fail = [](const std::string& why) { return AssertionResult{false, why}; };
    if (cert.n != inst.n) return fail("certificate is for n = " + std::to_string(cert.n));
    if (cert.mu_empty != fam.mu(SigmaSet{})) return fail("mu_empty differs from the family");
    const auto full = inst.full();
    const auto mu0 = cert.mu_empty;

    std::set<std::uint32_t> seen{full.bits()};
    std::set<std::uint32_t> established;
    std::map<std::uint32_t, std::uint64_t> conclusion;
    if (cert.mode == StepMode::induction && fam.mu(full) <= mu0) {
        established.insert(full.bits());
        if (fam.mu(full) == mu0) conclusion[full.bits()] = mu0;
    }
    for (std::size_t k = 0; k < cert.steps.size(); ++k) {
        const auto& st = cert.steps[k];
        const auto tag = "step " + std::to_string(k + 1) + " (" + st.sigma.to_string() + " -> " +
                         st.sigma_prime.to_string() + "): ";
        if (!seen.contains(st.sigma.bits())) return fail(tag + "parent is neither T nor an earlier sigma_prime");
        if (!st.sigma.contains(st.s) || st.sigma_prime != st.sigma.without(st.s))
            return fail(tag + "sigma_prime != sigma \\ {s}");
        if (!seen.insert(st.sigma_prime.bits()).second) return fail(tag + "subset covered twice");

        DescentStep again;
        try {
            again = evaluate_step(fam, st.sigma, st.s, st.witness, cert.mode, established.contains(st.sigma.bits()));
        } catch (const Error& e) {
            return fail(tag + e.what());
        }
        if (again.multiplier != st.multiplier || again.ord_b_s != st.ord_b_s || again.phi_B != st.phi_B ||
            again.lower_bound != st.lower_bound || again.upper_bound != st.upper_bound ||
            again.psi_M_sigma != st.psi_M_sigma || again.psi_M_sigma_prime != st.psi_M_sigma_prime ||
            again.phi_A_sigma != st.phi_A_sigma || again.phi_A_sigma_prime != st.phi_A_sigma_prime ||
            again.psi_W_sigma != st.psi_W_sigma || again.defect_M_sigma != st.defect_M_sigma ||
            again.defect_M_sigma_prime != st.defect_M_sigma_prime)
            return fail(tag + "stored bounds do not match the witness");
        if (again.verdict != st.verdict)
            return fail(tag + "verdict " + to_string(st.verdict) + ", recomputed " + to_string(again.verdict));
        if (st.verdict == Verdict::forced_equal && !(st.multiplier == 0 || st.lower_bound > st.upper_bound))
            return fail(tag + "FORCED_EQUAL without zero multiplier or separation");
        if (cert.mode == StepMode::induction && st.verdict == Verdict::forced_equal) {
            established.insert(st.sigma_prime.bits());
            conclusion[st.sigma_prime.bits()] = mu0;
        }
    }
    if (seen.size() != (std::size_t{1} << inst.n)) return fail("steps do not cover every subset");
    if (conclusion != cert.conclusion) return fail("stored conclusion differs from the recomputed one");
    return {true, ""};
}

std::string render_certificate(const DescentCertificate& cert) {
    std::ostringstream out;
    out << "descent certificate: n = " << cert.n << ", mu_empty = " << cert.mu_empty << ", seed = " << cert.seed
        << ", mode = " << (cert.mode == StepMode::induction ? "induction" : "diagnostic")
        << ", hypotheses " << (cert.hypotheses_hold ? "hold" : "FAIL") << "\n";
    out << "removal order:";
    for (int i : cert.removal_order) out << ' ' << i;
    out << "\n";
    int k = 0;
    for (const auto& st : cert.steps) {
        const auto mup = st.multiplier + static_cast<std::int64_t>(cert.mu_empty);
        out << "\nstep " << ++k << ": S = " << st.sigma.to_string() << ", s = " << st.s
            << ", S' = " << st.sigma_prime.to_string() << "\n";
        out << "  witness " << st.witness.to_string() << "\n";
        auto line = [&](const char* rel, const std::string& lhs, const std::string& rhs) {
            out << "  " << std::setw(11) << std::right << rel << " " << std::setw(48) << std::left << lhs << " = " << rhs << "\n";
        };
        line("Psi(W_S) =", "Psi(M_S) - mu_empty*Psi(A_S)",
             std::to_string(st.psi_M_sigma) + " - " + std::to_string(cert.mu_empty) + "*" +
                 std::to_string(st.phi_A_sigma) + " = " + std::to_string(st.psi_W_sigma));
        line("=", "Psi(M_S') + mu_S'*ord(b_s) - mu_empty*Psi(A_S)",
             std::to_string(st.psi_M_sigma_prime) + " + " + std::to_string(mup) + "*" + std::to_string(st.ord_b_s) +
                 " - " + std::to_string(cert.mu_empty) + "*" + std::to_string(st.phi_A_sigma));
        line(">=", "(mu_S' - mu_empty)*ord(b_s)",
             std::to_string(st.multiplier) + "*" + std::to_string(st.ord_b_s) + " = " + std::to_string(st.lower_bound));
        line("Psi(W_S) <=", "(mu_S' - mu_empty)*Phi(B)",
             std::to_string(st.multiplier) + "*" + std::to_string(st.phi_B) + " = " + std::to_string(st.upper_bound));
        out << "  lower " << st.lower_bound << (st.lower_bound > st.upper_bound ? " > " : " <= ") << "upper "
            << st.upper_bound << "\n";
        out << "  verdict " << to_string(st.verdict) << ": " << st.note << "\n";
    }
    out << "\nconclusion:";
    if (cert.conclusion.empty()) out << " none";
    for (const auto& [bits, mu] : cert.conclusion) out << ' ' << SigmaSet(bits).to_string() << "->" << mu;
    out << "\n";
    return out.str();
}

} // namespace wdk
