// One PASS/FAIL line per acceptance criterion. Tolerances are pinned here, not taken from the command line.
#include <symspace/cli.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>

using namespace symspace;

namespace {

constexpr double residual_tol = 1e-9;  // absolute residual bound shared by criteria 5 to 8
constexpr std::uint64_t seed = 20240601;

Tolerance pinned() { return Tolerance{residual_tol, Tolerance{}.rank_rel}; }

cli::SuiteConfig config(cli::Suite s, int trials) {
    cli::SuiteConfig c;
    c.suite = s;
    c.seed = seed;
    c.tol_abs = residual_tol;
    c.trials = trials;
    return c;
}

Report select(const Report& r, const std::function<bool(const std::string&)>& keep) {
    Report out(r.suite());
    for (const Check& c : r.checks())
        if (keep(c.name)) out.add(c);
    return out;
}

bool contains(const std::string& s, const char* part) { return s.find(part) != std::string::npos; }

struct Criterion {
    int id;
    std::string title;
    std::function<Report()> body;
};

}  // namespace

int main() {
    const Tolerance tol = pinned();
    const SU21Data su = su21_build(1.0, tol);
    const SP21Data sp = sp21_build(1.0, tol);
    const SP21Data sp2 = sp21_build(2.0, tol);

    const std::vector<Criterion> criteria{
        {1, "dimension table for 2 <= n <= 6", [] { return cli::run_table(config(cli::Suite::table, 1)); }},
        {2, "generic stabilizer dimensions over 100 samples",
         [] {
             return select(cli::run_stabilizers(config(cli::Suite::stabilizers, 100)),
                           [](const std::string& n) { return contains(n, "stabilizer_dim_hits") || contains(n, "ideals"); });
         }},
        {3, "generic orbit codimension n - 3",
         [] {
             return select(cli::run_orbits(config(cli::Suite::orbits, 20)),
                           [](const std::string& n) { return contains(n, "generic_codimension"); });
         }},
        {4, "SO(2,1) strata over 10^4 samples",
         [] {
             Report r("strata");
             const SymmetricPair pair = build_pair({Field::R, 2, 1});
             Rng rng(seed);
             const std::vector<std::pair<OrbitClass, Index>> strata{
                 {OrbitClass::open, 0}, {OrbitClass::two_step_nilpotent, 1}, {OrbitClass::one_step_nilpotent, 2}};
             constexpr int samples = 10000;
             for (const auto& [cls, dim] : strata) {
                 int stab = 0, codim = 0;
                 for (int t = 0; t < samples; ++t) {
                     const CMat s = so21_stratum_sample(pair, cls, rng);
                     stab += stabilizer_of_ray(pair, s).dim == dim;
                     codim += orbit_codimension(pair, s) == dim;
                 }
                 r.equal<int>(std::string(to_string(cls)) + ".stabilizer_dim", stab, samples, "");
                 r.equal<int>(std::string(to_string(cls)) + ".codimension", codim, samples, "");
             }
             return r;
         }},
        {5, "nearly para-Kaehler structure of the SU(2,1) split",
         [&] {
             Report r("su21");
             r.merge(su21_bracket_table(su, 500, seed, tol));
             r.merge(su21_structure_report(su, 500, seed, tol));
             return r;
         }},
        {6, "Casimir, eps pattern and action formulas on the Sp(2,1) split",
         [&] {
             Report r("sp21");
             r.merge(sp21_structure_report(sp, seed, tol));
             r.merge(sp21_action_formulas(sp, 100, seed, tol));
             return r;
         }},
        {7, "duality identity, dual bases, n -> n^ isometry and grading",
         [&] {
             Report r("sp21");
             for (const SP21Data* d : {&sp, &sp2}) {
                 const Grading g = sp21_grading(*d, tol);
                 r.merge(sp21_grading_report(*d, g, tol));
                 r.merge(sp21_duality_identity(*d, g, 500, seed, tol));
             }
             r.merge(sp21_hatn_isometry(sp, tol));
             return r;
         }},
        {8, "torsion, theta-invariance and stab(S) = stab(S^) over 50 samples per family",
         [&] {
             Report r = select(cli::run_stabilizers(config(cli::Suite::stabilizers, 50)), [](const std::string& n) {
                 return contains(n, "theta") || contains(n, "partner") || contains(n, "torsion");
             });
             for (const ReductiveSplit* s : {&su.split, &sp.split}) {
                 r.residual("case.torsion_skew", torsion_skew_residual(*s, torsion(*s)), residual_tol, "");
                 r.residual("case.torsion_derivation", torsion_derivation_residual(*s), residual_tol, "");
             }
             return r;
         }},
        {9, "negative controls fail their checks",
         [&] {
             Report r = cli::reductive_controls(sp, su, seed, tol);
             r.merge(select(cli::run_axioms(config(cli::Suite::axioms, 1)),
                            [](const std::string& n) { return n.starts_with("control."); }));
             return r;
         }},
    };

    const auto start = std::chrono::steady_clock::now();
    int failed = 0;
    for (const Criterion& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Report r;
        std::string error;
        try {
            r = c.body();
        } catch (const std::exception& e) {
            error = e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool ok = error.empty() && r.passed() && r.count(Status::pass) > 0;
        failed += !ok;
        std::printf("%s criterion %d: %s (%d checks, %.2f s)\n", ok ? "PASS" : "FAIL", c.id, c.title.c_str(),
                    r.count(Status::pass) + r.count(Status::fail), secs);
        if (!error.empty()) std::printf("    error: %s\n", error.c_str());
        for (const Check& k : r.checks())
            if (k.status == Status::fail)
                std::printf("    failed %s observed %s expected %s\n", k.name.c_str(), k.observed.dump().c_str(), k.expected.dump().c_str());
    }
    const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%d/%zu criteria passed in %.2f s\n", static_cast<int>(criteria.size()) - failed, criteria.size(), total);
    return failed == 0 ? 0 : 1;
}
