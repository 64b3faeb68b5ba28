#pragma once

#include "casestudies.hpp"
#include "matlie.hpp"
#include "nullorbit.hpp"
#include "reductive.hpp"
#include "report.hpp"
#include "sympair.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace symspace::cli {

enum class Suite { table, axioms, stabilizers, orbits, su21, sp21, all };
enum class Format { json, markdown };

inline const std::vector<std::pair<std::string, Suite>>& suite_names() {
    static const std::vector<std::pair<std::string, Suite>> names{{"table", Suite::table},   {"axioms", Suite::axioms},
                                                                  {"stabilizers", Suite::stabilizers}, {"orbits", Suite::orbits},
                                                                  {"su21", Suite::su21},     {"sp21", Suite::sp21},
                                                                  {"all", Suite::all}};
    return names;
}

inline std::string to_string(Suite s) {
    for (const auto& [name, v] : suite_names())
        if (v == s) return name;
    return "?";
}

struct SuiteConfig {
    Suite suite = Suite::all;
    std::optional<Family> family;
    std::uint64_t seed = 0;
    double tol_abs = 1e-9;
    int trials = 100;
    Format format = Format::markdown;

    Tolerance tolerance() const { return {tol_abs, Tolerance{}.rank_rel}; }
};

// Raised for any argument problem; maps to exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseOutcome {
    std::optional<SuiteConfig> config;  // empty when help was printed
    std::string help;
};

inline ParseOutcome parse_args(const std::vector<std::string>& args) {
    CLI::App app{"Matrix-level verification suites for symmetric pairs and null-ray stabilizers", "symspace-cli"};
    SuiteConfig cfg;
    std::string suite = "all", field, format = "markdown";
    std::optional<int> p, q;

    std::map<std::string, Suite> suite_map(suite_names().begin(), suite_names().end());
    app.add_option("--suite", suite, "suite to run")->check(CLI::IsMember(suite_map));
    app.add_option("--field", field, "field of the family (R, C or H)")->check(CLI::IsMember({"R", "C", "H"}));
    app.add_option("--p", p, "positive index of the form");
    app.add_option("--q", q, "negative index of the form");
    app.add_option("--seed", cfg.seed, "random seed");
    app.add_option("--tol", cfg.tol_abs, "absolute tolerance")->check(CLI::PositiveNumber);
    app.add_option("--trials", cfg.trials, "random draws per check")->check(CLI::Range(1, 1000000));
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "markdown"}));

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        return {std::nullopt, app.help()};
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    cfg.suite = suite_map.at(suite);
    cfg.format = format == "json" ? Format::json : Format::markdown;
    const bool any = !field.empty() || p || q;
    if (any) {
        if (field.empty() || !p || !q) throw UsageError("--field, --p and --q must be given together");
        if (*p < 0 || *q < 0 || *p + *q < 2) throw UsageError("need p, q >= 0 and p + q >= 2");
        if (cfg.suite == Suite::su21 || cfg.suite == Suite::sp21) throw UsageError("the case-study suites take no family");
        const bool orbit_suite = cfg.suite == Suite::orbits || cfg.suite == Suite::stabilizers || cfg.suite == Suite::all;
        if (orbit_suite && (*p < 1 || *q < 1)) throw UsageError("orbit suites need p, q >= 1");
        cfg.family = Family{field == "R" ? Field::R : field == "C" ? Field::C : Field::H, *p, *q};
    }
    return {cfg, {}};
}

inline ParseOutcome parse_args(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return parse_args(args);
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

inline std::vector<Family> families_of_size(int n) {
    std::vector<Family> out;
    for (Field f : {Field::R, Field::C, Field::H})
        for (int p = n; p >= 0; --p) out.push_back({f, p, n - p});
    return out;
}

inline Report run_table(const SuiteConfig& cfg) {
    Report rep("table");
    const Tolerance tol = cfg.tolerance();
    std::vector<Family> fams;
    if (cfg.family) {
        fams.push_back(*cfg.family);
    } else {
        for (int n = 2; n <= 6; ++n)
            for (const Family& f : families_of_size(n)) fams.push_back(f);
    }
    for (const Family& f : fams) {
        const TableRow row = table_row(build_pair(f, Variant::standard, tol), tol);
        const TableRow ex = expected_row(f);
        const std::string tag = f.label();
        rep.equal<Index>(tag + ".dim_h", row.dim_h, ex.dim_h, "closed formula for dim h");
        rep.equal<Index>(tag + ".dim_m", row.dim_m, ex.dim_m, "closed formula for dim m");
        rep.equal<std::string>(tag + ".signature_m", to_string(row.sig_m), to_string(ex.sig_m), "signature of K on m");
    }
    return rep;
}

// One m-basis vector replaced by an element of h.
inline SymmetricPair corrupted_pair(const SymmetricPair& pair) {
    SymmetricPair bad = pair;
    std::vector<CMat> mb = pair.m.basis();
    mb.front() = pair.h[0];
    bad.m = RealSubspace(pair.size(), pair.size(), mb);
    return bad;
}

inline Report run_axioms(const SuiteConfig& cfg) {
    Report rep("axioms");
    const Tolerance tol = cfg.tolerance();
    std::vector<Family> fams;
    if (cfg.family) fams.push_back(*cfg.family);
    else fams = {{Field::R, 2, 1}, {Field::C, 2, 1}, {Field::H, 2, 1}, {Field::R, 3, 1}, {Field::C, 2, 2}, {Field::H, 3, 1}};
    for (const Family& f : fams) rep.merge(check_symmetric_axioms(build_pair(f, Variant::standard, tol), tol, cfg.seed));
    for (Field f : {Field::C, Field::H}) rep.merge(check_symmetric_axioms(build_pair({f, 2, 1}, Variant::canonical_T, tol), tol, cfg.seed), "T.");

    const SymmetricPair pair = build_pair(fams.front(), Variant::standard, tol);
    const Report bad = check_symmetric_axioms(corrupted_pair(pair), tol, cfg.seed);
    rep.expect_failure("control.corrupted_m.bracket_mm_in_h", *bad.find(pair.family.label() + ".bracket_mm_in_h"),
                       "an h element inside m breaks [m,m] in h");
    return rep;
}

struct StabilizerExpectation {
    Family family;
    Index dim;
};

inline std::vector<StabilizerExpectation> stabilizer_expectations() {
    return {{{Field::C, 2, 1}, 2}, {{Field::R, 2, 1}, 0}, {{Field::H, 2, 1}, 9}, {{Field::C, 3, 1}, 3}, {{Field::R, 3, 1}, 0}};
}

// Per-sample structural residuals: theta-invariance, stab(S) = stab(S^), and the torsion identities of the split.
struct SampleResiduals {
    double theta = 0.0, partner = 0.0, skew = 0.0, derivation = 0.0;
};

inline SampleResiduals sample_residuals(const SymmetricPair& pair, const NullVector& s, const Tolerance& tol) {
    SampleResiduals r;
    const StabilizerResult st = stabilizer_of_ray(pair, s, tol);
    std::vector<CMat> theta_b;
    for (const CMat& x : st.b.basis()) theta_b.push_back(pair.involution(x));
    const RealSubspace tb(pair.size(), pair.size(), theta_b, tol);
    r.theta = span_distance(st.b, tb);
    r.partner = span_distance(st.b, stabilizer_of_ray(pair, partner_null(pair, s, tol).hat, tol).b);
    const ReductiveSplit split = reductive_split(pair, st.b, tol);
    r.skew = torsion_skew_residual(split, torsion(split));
    r.derivation = torsion_derivation_residual(split);
    return r;
}

inline Report run_stabilizers(const SuiteConfig& cfg) {
    Report rep("stabilizers");
    const Tolerance tol = cfg.tolerance();
    std::vector<StabilizerExpectation> cases;
    if (cfg.family) {
        cases.push_back({*cfg.family, -1});
        for (const auto& e : stabilizer_expectations())
            if (e.family == *cfg.family) cases.back().dim = e.dim;
    } else {
        cases = stabilizer_expectations();
    }
    for (const auto& [fam, expected] : cases) {
        const SymmetricPair pair = build_pair(fam, Variant::standard, tol);
        const std::string tag = fam.label();
        int hits = 0;
        Index first = -1;
        SampleResiduals worst;
        const int structural = std::min(cfg.trials, 50);
        for (int t = 0; t < cfg.trials; ++t) {
            const NullVector s = sample_null_generic(pair, cfg.seed + static_cast<std::uint64_t>(t), Conjugation::compact, tol);
            const Index dim = stabilizer_of_ray(pair, s, tol).dim;
            if (first < 0) first = dim;
            hits += dim == (expected >= 0 ? expected : first);
            if (t < structural) {
                const SampleResiduals r = sample_residuals(pair, s, tol);
                worst.theta = std::max(worst.theta, r.theta);
                worst.partner = std::max(worst.partner, r.partner);
                worst.skew = std::max(worst.skew, r.skew);
                worst.derivation = std::max(worst.derivation, r.derivation);
            }
        }
        if (expected >= 0) rep.equal<int>(tag + ".stabilizer_dim_hits", hits, cfg.trials, "generic ray stabilizer dimension");
        else rep.equal<int>(tag + ".stabilizer_dim_constant", hits, cfg.trials, "stabilizer dimension is constant on generic samples");
        rep.info(tag + ".stabilizer_dim", first, "observed generic stabilizer dimension");
        rep.residual(tag + ".theta_invariant", worst.theta, tol.abs, "generic stabilizers are theta-invariant");
        rep.residual(tag + ".stab_equals_partner", worst.partner, tol.abs, "stab(S) = stab(S^)");
        rep.residual(tag + ".torsion_skew", worst.skew, tol.abs, "torsion of the split is totally skew");
        rep.residual(tag + ".torsion_derivation", worst.derivation, tol.abs, "stabilizer acts by derivations of the torsion");
    }
    if (!cfg.family) {
        const NullVector s = sample_null_generic(build_pair({Field::H, 2, 1}), cfg.seed, Conjugation::compact, tol);
        const StabilizerResult st = stabilizer_of_ray(build_pair({Field::H, 2, 1}), s, tol);
        std::vector<std::string> ideals;
        for (const RealSubspace& id : ideal_decomposition(st.b, tol))
            ideals.push_back(std::to_string(id.dim()) + ":" + to_string(algebra_profile(id, tol).killing));
        std::sort(ideals.begin(), ideals.end());
        rep.equal<std::vector<std::string>>("H(2,1).stabilizer_ideals", ideals, {"3:(0,3,0)", "6:(3,3,0)"},
                                            "compact rank-one ideal plus an sl2C ideal");
    }
    return rep;
}

inline Report run_orbits(const SuiteConfig& cfg) {
    Report rep("orbits");
    const Tolerance tol = cfg.tolerance();
    std::vector<Family> fams;
    if (cfg.family) fams.push_back(*cfg.family);
    else fams = {{Field::R, 2, 1}, {Field::R, 3, 1}, {Field::R, 3, 2}, {Field::C, 2, 1}, {Field::H, 2, 1}};
    const int samples = std::min(cfg.trials, 20);
    for (const Family& f : fams) {
        const SymmetricPair pair = build_pair(f, Variant::standard, tol);
        int hits = 0;
        for (int t = 0; t < samples; ++t) {
            const NullVector s = sample_null_generic(pair, cfg.seed + static_cast<std::uint64_t>(t), Conjugation::full, tol);
            hits += orbit_codimension(pair, s.S, tol) == f.n() - 3;
        }
        rep.equal<int>(f.label() + ".generic_codimension", hits, samples, "generic orbits have codimension n - 3");
    }
    if (!cfg.family || (cfg.family->field == Field::R && cfg.family->p == 2 && cfg.family->q == 1)) {
        const SymmetricPair pair = build_pair({Field::R, 2, 1}, Variant::standard, tol);
        Rng rng(cfg.seed);
        const std::vector<std::pair<OrbitClass, Index>> strata{
            {OrbitClass::open, 0}, {OrbitClass::two_step_nilpotent, 1}, {OrbitClass::one_step_nilpotent, 2}};
        for (const auto& [cls, dim] : strata) {
            int stab_hits = 0, class_hits = 0;
            for (int t = 0; t < cfg.trials; ++t) {
                const CMat s = so21_stratum_sample(pair, cls, rng, tol);
                stab_hits += stabilizer_of_ray(pair, s, tol).dim == dim;
                class_hits += so21_orbit_class(s, tol) == cls;
            }
            const std::string tag = std::string("so21.") + symspace::to_string(cls);
            rep.equal<int>(tag + ".stabilizer_dim_hits", stab_hits, cfg.trials, "stratum stabilizer dimension");
            rep.equal<int>(tag + ".classified", class_hits, cfg.trials, "stratum recovered by rank and nilpotency");
        }
    }
    return rep;
}

// Broken or degenerate inputs to the reductive machinery; each wrapped check must fail.
inline Report reductive_controls(const SP21Data& sp, const SU21Data& su, std::uint64_t seed, const Tolerance& tol) {
    Report rep("controls");
    {
        Rng rng(seed);
        std::vector<CMat> b = sp.b.basis();
        b[0] += 0.1 * random_element(sp.pair.h, rng);
        const ReductiveSplit bad = reductive_split(sp.pair, RealSubspace(6, 6, b, tol), tol);
        Report inner;
        inner.residual("x", torsion_derivation_residual(bad), tol.abs, "");
        rep.expect_failure("control.perturbed_b.torsion_derivation", inner.checks().front(), "perturbed stabilizer breaks the derivation identity");
    }
    {
        std::vector<CMat> b(sp.b.basis().begin() + 1, sp.b.basis().end());
        const ReductiveSplit bad = reductive_split(sp.pair, RealSubspace(6, 6, b, tol), tol);
        Report inner;
        inner.truth("x", wang_ziller_check(bad, tol).is_multiple, "");
        rep.expect_failure("control.truncated_b.casimir_multiple", inner.checks().front(), "dropping a basis vector of b breaks the Casimir test");
    }
    {
        bool nondegenerate = true;
        try {
            (void)reductive_split(su.pair, RealSubspace(3, 3, {su21_vplus(1.0, 0.0)}, tol), tol);
        } catch (const DegenerateForm&) {
            nondegenerate = false;
        }
        Report inner;
        inner.truth("x", nondegenerate, "");
        rep.expect_failure("control.null_b.degenerate_form", inner.checks().front(), "a null subalgebra is rejected");
    }
    return rep;
}

inline Report run_su21(const SuiteConfig& cfg) {
    Report rep("su21");
    const Tolerance tol = cfg.tolerance();
    const SU21Data d = su21_build(1.0, tol);
    rep.merge(su21_bracket_table(d, cfg.trials, cfg.seed, tol));
    {
        const CMat c = bracket(su21_vplus(1.0, 0.0), su21_vminus(1.0, 0.0));
        CMat e = CMat::Zero(3, 3);
        e.diagonal() << -1.0, 0.0, 1.0;
        rep.residual("bracket_spot", (c - e).norm(), tol.abs, "[v+(1,0), v-(1,0)] = diag(-1,0,1)");
    }
    for (const auto& [phi, r] : std::vector<std::pair<double, double>>{{0.0, 1.0}, {std::numbers::pi / 3.0, 2.0}, {0.37, -1.7}}) {
        std::ostringstream tag;
        tag << "phi=" << phi << ",r=" << r << ".";
        rep.merge(su21_ad_action(phi, r, cfg.seed, tol), tag.str());
    }
    rep.merge(su21_structure_report(d, std::max(cfg.trials, 500), cfg.seed, tol));
    const SU21Data d2 = su21_build(2.0, tol);
    rep.near("a=2.constant_type", su21_constant_type(d2, cfg.trials, cfg.seed).lambda, 0.5, 1e-8, "type constant is scale free in a");
    rep.near("a=2.einstein", su21_einstein(d2).lambda, 2.5, 1e-7, "Einstein constant is scale free in a");
    rep.merge(reductive_controls(sp21_build(1.0, tol), d, cfg.seed, tol));
    return rep;
}

inline Report run_sp21(const SuiteConfig& cfg) {
    Report rep("sp21");
    const Tolerance tol = cfg.tolerance();
    const SP21Data d = sp21_build(1.0, tol);
    rep.merge(sp21_structure_report(d, cfg.seed, tol));
    rep.merge(sp21_action_formulas(d, cfg.trials, cfg.seed, tol));
    const Grading g = sp21_grading(d, tol);
    rep.merge(sp21_grading_report(d, g, tol));
    rep.merge(sp21_duality_identity(d, g, std::max(cfg.trials, 500), cfg.seed, tol));
    const SP21Data d2 = sp21_build(2.0, tol);
    rep.merge(sp21_duality_identity(d2, sp21_grading(d2, tol), std::max(cfg.trials, 500), cfg.seed, tol));
    rep.merge(sp21_hatn_isometry(d, tol));
    rep.merge(sp21_embedding_check(d, std::min(cfg.trials, 50), cfg.seed, tol));
    return rep;
}

inline Report run(const SuiteConfig& cfg) {
    Report rep;
    switch (cfg.suite) {
        case Suite::table: rep = run_table(cfg); break;
        case Suite::axioms: rep = run_axioms(cfg); break;
        case Suite::stabilizers: rep = run_stabilizers(cfg); break;
        case Suite::orbits: rep = run_orbits(cfg); break;
        case Suite::su21: rep = run_su21(cfg); break;
        case Suite::sp21: rep = run_sp21(cfg); break;
        case Suite::all: {
            rep = Report("all");
            for (Suite s : {Suite::table, Suite::axioms, Suite::stabilizers, Suite::orbits, Suite::su21, Suite::sp21}) {
                if (cfg.family && (s == Suite::su21 || s == Suite::sp21)) continue;
                SuiteConfig sub = cfg;
                sub.suite = s;
                rep.merge(run(sub), to_string(s) + ".");
            }
            break;
        }
    }
    rep.sort_by_name();
    return rep;
}

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json to_json(const Report& rep, const SuiteConfig& cfg) {
    nlohmann::ordered_json out;
    out["suite"] = rep.suite();
    out["seed"] = cfg.seed;
    out["checks"] = nlohmann::ordered_json::array();
    for (const Check& c : rep.checks()) {
        nlohmann::ordered_json j;
        j["name"] = c.name;
        j["status"] = symspace::to_string(c.status);
        j["observed"] = c.observed;
        j["expected"] = c.expected;
        j["tol"] = c.tol;
        j["anchor"] = c.anchor;
        out["checks"].push_back(std::move(j));
    }
    out["summary"] = {{"pass", rep.count(Status::pass)}, {"fail", rep.count(Status::fail)}};
    return out;
}

inline std::string to_markdown(const Report& rep, const SuiteConfig& cfg, double wall_seconds) {
    std::ostringstream os;
    os << "## " << rep.suite() << "\n\n";
    os << "seed " << cfg.seed << ", tol " << cfg.tol_abs << ", trials " << cfg.trials << ", wall time " << wall_seconds << " s\n\n";
    os << "| check | status | observed | expected | tol | anchor |\n|---|---|---|---|---|---|\n";
    for (const Check& c : rep.checks())
        os << "| " << c.name << " | " << symspace::to_string(c.status) << " | " << c.observed.dump() << " | " << c.expected.dump()
           << " | " << c.tol << " | " << c.anchor << " |\n";
    os << "\n" << rep.count(Status::pass) << " pass, " << rep.count(Status::fail) << " fail, " << rep.count(Status::info)
       << " info\n";
    return os.str();
}

// Exit codes: 0 all checks pass, 1 some check failed, 2 usage error.
inline int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    ParseOutcome parsed;
    try {
        parsed = parse_args(argc, argv);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\nrun with --help for the flag list\n";
        return 2;
    }
    if (!parsed.config) {
        out << parsed.help;
        return 0;
    }
    const SuiteConfig& cfg = *parsed.config;
    const auto start = std::chrono::steady_clock::now();
    Report rep;
    try {
        rep = run(cfg);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (cfg.format == Format::json) out << to_json(rep, cfg).dump(2) << "\n";
    else out << to_markdown(rep, cfg, wall);
    return rep.passed() ? 0 : 1;
}

}  // namespace symspace::cli
