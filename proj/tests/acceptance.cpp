// Runs every acceptance criterion and prints one PASS/FAIL line each.
// Exit status is nonzero if any criterion fails.

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "generators.hpp"
#include "mingain/cli.hpp"
#include "mingain/document.hpp"
#include "mingain/fusion.hpp"
#include "oracles.hpp"

using namespace mingain;
using namespace mingain::testing;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok && pass) {
            pass = false;
            detail = what;
        }
    }
};

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

const std::vector<Conditional> kWorkedConditionals{{0, 0, 0.875}, {0, 1, 0.0}, {0, 2, 0.125},
                                                   {1, 0, 0.0},   {1, 1, 1.0}, {1, 2, 0.0}};

Outcome abstract_frame()
{
    Outcome o;
    auto f = t3_frame();
    auto body = abstract_evidence(first_bpa(f), f);
    o.require(body.frame().size() == 2, "frame size");
    o.require(body.prob()[0] == 0.8 && body.prob()[1] == 0.2, "probabilities");
    std::set<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t t = 0; t < 3; ++t)
            if (body.relation().compatible(s, t))
                pairs.emplace(s, t);
    std::set<std::pair<std::size_t, std::size_t>> expected{{0, 0}, {0, 1}, {1, 0}, {1, 1}, {1, 2}};
    o.require(pairs == expected, "compatibility pairs");
    o.detail = o.pass ? "P = (0.8, 0.2), 5 pairs" : o.detail;
    return o;
}

Outcome dempster_example()
{
    Outcome o;
    auto f = t3_frame();
    auto r = dempster_combine(first_bpa(f), second_bpa(f));
    struct Want {
        std::vector<std::string> set;
        double mass;
    };
    for (const auto& w : {Want{{"t2"}, 0.667}, Want{{"t3"}, 0.048}, Want{{"t1", "t2"}, 0.095},
                          Want{{"t2", "t3"}, 0.166}, Want{{"t1", "t2", "t3"}, 0.024}})
        o.require(std::abs(r.bpa.mass(prop(f, w.set)) - w.mass) <= 1e-3, "mass on " + prop(f, w.set).to_string());
    o.require(r.bpa.focal_count() == 5, "focal count");
    double b = bel(r.bpa, prop(f, {"t1", "t2"}));
    o.require(std::abs(b - 0.762) <= 1e-3, "Bel({t1,t2})");
    o.require(b < bel(first_bpa(f), prop(f, {"t1", "t2"})), "belief decrease");
    if (o.pass)
        o.detail = "Bel({t1,t2}) = " + fmt("%.6f", b) + " < 0.8";
    return o;
}

Outcome min_gain_example()
{
    Outcome o;
    auto f = t3_frame();
    auto r = min_gain_combine(first_bpa(f), second_bpa(f));
    double expected[2][3] = {{0.7, 0.0, 0.1}, {0.0, 0.2, 0.0}};
    double worst = 0.0;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            worst = std::max(worst, std::abs(r.joint(i, j) - expected[i][j]));
    worst = std::max(worst, std::abs(r.bpa.mass(prop(f, {"t2"})) - 0.7));
    worst = std::max(worst, std::abs(r.bpa.mass(prop(f, {"t3"})) - 0.2));
    worst = std::max(worst, std::abs(r.bpa.mass(prop(f, {"t1", "t2"})) - 0.1));
    o.require(worst <= 1e-6, "max deviation " + fmt("%.3g", worst));
    o.require(r.bpa.focal_count() == 3, "focal count");
    if (o.pass)
        o.detail = "max deviation " + fmt("%.3g", worst);
    return o;
}

Outcome monotonicity()
{
    Outcome o;
    std::mt19937_64 rng(1001);
    int feasible = 0;
    std::size_t violations = 0;
    while (feasible < 1000) {
        auto f = numbered_frame(3 + static_cast<std::size_t>(feasible % 3));
        auto m1 = random_bpa(rng, f, 6);
        auto m2 = random_bpa(rng, f, 6);
        try {
            auto r = min_gain_combine(m1, m2);
            for (const auto& a : power_set(f))
                if (bel(r.bpa, a) < std::max(bel(m1, a), bel(m2, a)) - 1e-9)
                    ++violations;
            ++feasible;
        } catch (const ConflictError&) {
        }
    }
    o.require(violations == 0, std::to_string(violations) + " violations");
    if (o.pass)
        o.detail = "1000 feasible pairs, 0 violations";
    return o;
}

Outcome oracle_equivalence()
{
    Outcome o;
    std::mt19937_64 rng(1002);
    int compared = 0;
    double worst_gap = 0.0;
    double worst_residual = 0.0;
    for (int trial = 0; compared < 200; ++trial) {
        std::size_t nr = 2 + static_cast<std::size_t>(compared % 2);
        auto cs = trial % 2 ? random_system(rng, nr, 3, 0.3, trial % 3 == 0) : tight_system(rng, nr, 3);
        if (!check_feasible(cs).feasible())
            continue;
        auto sol = solve_maxent(cs);
        auto oracle = oracle_maxent(cs, 0.05);
        worst_gap = std::max(worst_gap, joint_entropy(oracle) - joint_entropy(sol.joint));
        auto rs = sol.joint.cells().row_sums();
        auto cl = sol.joint.cells().col_sums();
        for (std::size_t i = 0; i < cs.row_count(); ++i)
            worst_residual = std::max(worst_residual, std::abs(rs[i] - cs.rows()[i]));
        for (std::size_t j = 0; j < cs.col_count(); ++j)
            worst_residual = std::max(worst_residual, std::abs(cl[j] - cs.cols()[j]));
        ++compared;
    }
    o.require(worst_gap <= 1e-4, "oracle ahead by " + fmt("%.3g", worst_gap) + " nats");
    o.require(worst_residual <= 1e-9, "residual " + fmt("%.3g", worst_residual));
    if (o.pass)
        o.detail = "200 systems, oracle lead " + fmt("%.3g", worst_gap) + " nats, residual " + fmt("%.3g", worst_residual);
    return o;
}

Outcome product_case()
{
    Outcome o;
    std::mt19937_64 rng(1003);
    double worst_cell = 0.0;
    double worst_mass = 0.0;
    for (int trial = 0; trial < 300; ++trial) {
        auto f = numbered_frame(2 + static_cast<std::size_t>(trial % 4));
        auto m1 = anchored_bpa(rng, f, 5);
        auto m2 = anchored_bpa(rng, f, 5);
        auto g = min_gain_combine(m1, m2);
        auto d = dempster_combine(m1, m2);
        for (std::size_t i = 0; i < g.joint.left().size(); ++i)
            for (std::size_t j = 0; j < g.joint.right().size(); ++j)
                worst_cell = std::max(worst_cell, std::abs(g.joint(i, j) - g.left.prob()[i] * g.right.prob()[j]));
        for (const auto& fe : d.bpa.focal())
            worst_mass = std::max(worst_mass, std::abs(g.bpa.mass(fe.set) - fe.mass));
        for (const auto& fe : g.bpa.focal())
            worst_mass = std::max(worst_mass, std::abs(d.bpa.mass(fe.set) - fe.mass));
    }
    o.require(worst_cell <= 1e-9, "joint vs product " + fmt("%.3g", worst_cell));
    o.require(worst_mass <= 1e-9, "bpa vs Dempster " + fmt("%.3g", worst_mass));
    if (o.pass)
        o.detail = "300 pairs, cell gap " + fmt("%.3g", worst_cell) + ", mass gap " + fmt("%.3g", worst_mass);
    return o;
}

Outcome conditional_case()
{
    Outcome o;
    auto f = t3_frame();
    double worst = 0.0;
    auto compare = [&](const BPA& m1, const BPA& m2, const std::vector<Conditional>& cond) {
        auto b = bayes_combine(m1, m2, cond);
        auto g = min_gain_combine(m1, m2, cond);
        for (const auto& fe : b.bpa.focal())
            worst = std::max(worst, std::abs(g.bpa.mass(fe.set) - fe.mass));
        for (const auto& fe : g.bpa.focal())
            worst = std::max(worst, std::abs(b.bpa.mass(fe.set) - fe.mass));
        for (std::size_t i = 0; i < b.joint.left().size(); ++i)
            for (std::size_t j = 0; j < b.joint.right().size(); ++j)
                worst = std::max(worst, std::abs(g.joint(i, j) - b.joint(i, j)));
    };
    compare(first_bpa(f), second_bpa(f), kWorkedConditionals);

    std::mt19937_64 rng(1004);
    int compared = 1;
    while (compared < 300) {
        auto fr = numbered_frame(2 + static_cast<std::size_t>(compared % 4));
        auto m1 = random_bpa(rng, fr, 5);
        auto m2 = random_bpa(rng, fr, 5);
        auto l = abstract_evidence(m1);
        auto r = abstract_evidence(m2);
        auto feas = check_feasible(assemble(l, r, default_joint_compatibility(l.relation(), r.relation()), {}));
        if (!feas.feasible())
            continue;
        std::vector<Conditional> cond;
        for (std::size_t i = 0; i < m1.focal_count(); ++i)
            for (std::size_t j = 0; j < m2.focal_count(); ++j)
                cond.push_back({i, j, (*feas.witness)(i, j) / m1.focal()[i].mass});
        compare(m1, m2, cond);
        ++compared;
    }
    o.require(worst <= 1e-12, "max difference " + fmt("%.3g", worst));
    if (o.pass)
        o.detail = "300 instances, max difference " + fmt("%.3g", worst);
    return o;
}

Outcome conflict_detection()
{
    Outcome o;
    Frame f({"t1", "t2"});
    std::vector<MassAssignment> a{{{"t1"}, 1.0}}, b{{{"t2"}, 1.0}};
    auto m1 = make_bpa(f, a);
    auto m2 = make_bpa(f, b);

    auto l = abstract_evidence(m1);
    auto r = abstract_evidence(m2);
    auto cs = assemble(l, r, default_joint_compatibility(l.relation(), r.relation()), {});
    auto feas = check_feasible(cs);
    o.require(!feas.feasible() && feas.certificate.has_value(), "disjoint singletons reported feasible");
    if (feas.certificate) {
        // Recompute the certificate's inequality from the system alone.
        const auto& c = *feas.certificate;
        double row_mass = 0.0, col_mass = 0.0;
        std::vector<bool> reach(cs.col_count(), false);
        for (auto i : c.rows) {
            row_mass += cs.residual_rows()[i];
            for (std::size_t j = 0; j < cs.col_count(); ++j)
                reach[j] = reach[j] || cs.is_free(i, j);
        }
        for (std::size_t j = 0; j < cs.col_count(); ++j)
            if (reach[j])
                col_mass += cs.residual_cols()[j];
        o.require(row_mass - col_mass > kFeasibilityTolerance, "certificate does not hold");
    }
    bool conflict_error = false;
    try {
        min_gain_combine(m1, m2);
    } catch (const ConflictError&) {
        conflict_error = true;
    }
    o.require(conflict_error, "min_gain_combine did not raise ConflictDetected");
    o.require(thrown_code([&] { dempster_combine(m1, m2); }) == ErrorCode::TotalConflict,
              "Dempster did not raise TotalConflict");

    auto ft = t3_frame();
    auto wl = abstract_evidence(first_bpa(ft));
    auto wr = abstract_evidence(second_bpa(ft));
    auto worked = check_feasible(assemble(wl, wr, default_joint_compatibility(wl.relation(), wr.relation()), {}));
    double k = dempster_combine(first_bpa(ft), second_bpa(ft)).normalization;
    o.require(worked.feasible(), "worked example reported as conflict");
    o.require(std::abs(k - 1.0) > 1e-3, "worked example has K = 1");
    if (o.pass)
        o.detail = "certificate margin " + fmt("%.3g", feas.certificate->margin()) + ", worked example feasible with K = "
                   + fmt("%.6f", k);
    return o;
}

Outcome measure_identities()
{
    Outcome o;
    std::vector<JointDistribution> corpus;
    auto add_document = [&](const char* name, Rule rule) {
        auto doc = parse_document(slurp(data_path(name)));
        std::vector<BPA> bodies;
        for (const auto& e : doc.evidence)
            bodies.push_back(e.bpa);
        CombineOptions opts;
        opts.conditionals = resolve_conditionals(doc);
        for (const auto& step : combine_all(bodies, rule, opts).steps)
            corpus.push_back(step.joint);
    };
    add_document("example31.json", Rule::MinGain);
    add_document("example31_bayes.json", Rule::Bayes);
    add_document("example31_bayes.json", Rule::MinGain);
    std::mt19937_64 rng(1005);
    while (corpus.size() < 300) {
        auto cs = corpus.size() % 2 ? random_system(rng, 3, 4, 0.3, true) : tight_system(rng, 4, 3);
        if (check_feasible(cs).feasible())
            corpus.push_back(solve_maxent(cs).joint);
    }

    double worst = 0.0;
    for (const auto& j : corpus) {
        auto g = info_gain(j, j.left_marginal(), j.right_marginal());
        worst = std::max(worst, std::abs(g - mutual_information(j)));
    }
    o.require(worst <= 1e-9, "gain vs mutual information " + fmt("%.3g", worst));

    double product_gain = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        auto fl = numbered_frame(1 + static_cast<std::size_t>(trial % 5), "a");
        auto fr = numbered_frame(1 + static_cast<std::size_t>(trial % 4), "b");
        ProbabilityFunction pl(fl, random_probs(rng, fl.size()));
        ProbabilityFunction pr(fr, random_probs(rng, fr.size()));
        product_gain = std::max(product_gain, std::abs(info_gain(JointDistribution::product(pl, pr), pl, pr)));
    }
    o.require(product_gain <= 1e-12, "product gain " + fmt("%.3g", product_gain));

    bool exact = true;
    for (std::size_t n = 1; n <= 16; ++n) {
        auto fn = numbered_frame(n);
        exact = exact
                && information(ProbabilityFunction(fn, std::vector<double>(n, 1.0 / static_cast<double>(n)))) == 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            std::vector<double> point(n, 0.0);
            point[k] = 1.0;
            exact = exact && information(ProbabilityFunction(fn, point)) == std::log(static_cast<double>(n));
        }
    }
    o.require(exact, "information of uniform or point mass not exact");
    if (o.pass)
        o.detail = std::to_string(corpus.size()) + " joints, gain/mutual gap " + fmt("%.3g", worst);
    return o;
}

Outcome dempster_cross_check()
{
    Outcome o;
    std::mt19937_64 rng(1006);
    int compared = 0;
    double worst = 0.0;
    while (compared < 1000) {
        auto f = numbered_frame(2 + static_cast<std::size_t>(compared % 5));
        auto m1 = random_bpa(rng, f, 6);
        auto m2 = random_bpa(rng, f, 6);
        auto expected = dempster_focal_formula(m1, m2);
        if (!expected)
            continue;
        auto r = dempster_combine(m1, m2);
        if (r.bpa.focal_count() != expected->size())
            worst = 1.0;
        for (const auto& fe : *expected)
            worst = std::max(worst, std::abs(r.bpa.mass(fe.set) - fe.mass));
        ++compared;
    }
    o.require(worst <= 1e-12, "max difference " + fmt("%.3g", worst));
    if (o.pass)
        o.detail = "1000 pairs, max difference " + fmt("%.3g", worst);
    return o;
}

Outcome cli_contract()
{
    Outcome o;
    auto run = [](std::vector<std::string> args, std::string* out = nullptr) {
        args.insert(args.begin(), "mingain");
        std::istringstream in;
        std::ostringstream os, es;
        int code = cli::run(args, in, os, es);
        if (out)
            *out = os.str();
        return code;
    };
    struct Golden {
        const char* input;
        const char* rule;
        const char* golden;
    };
    for (auto g : {Golden{"example31.json", "dempster", "example31_dempster.json"},
                   Golden{"example31.json", "mingain", "example31_mingain.json"},
                   Golden{"example31_bayes.json", "bayes", "example31_bayes.json"}}) {
        std::string out;
        int code = run({"combine", data_path(g.input), "--rule", g.rule, "--output", "json"}, &out);
        o.require(code == 0, std::string(g.rule) + " exit code");
        o.require(out == slurp(golden_path(g.golden)), std::string(g.rule) + " output differs from golden file");
    }
    o.require(run({"combine", data_path("bad_mass_sum.json")}) == 1, "input error exit code");
    o.require(run({"validate", data_path("duplicate_focal.json")}) == 1, "validation exit code");
    o.require(run({"combine", data_path("disjoint.json")}) == 2, "conflict exit code");
    o.require(run({"combine", data_path("example31.json"), "--max-iter", "0"}) == 3, "non-convergence exit code");
    if (o.pass)
        o.detail = "3 golden files match, exit codes 0/1/2/3";
    return o;
}

}  // namespace

int main()
{
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
    };
    std::vector<Criterion> criteria{
        {"abstract evidence frame", abstract_frame},
        {"Dempster worked example", dempster_example},
        {"minimum-gain worked example", min_gain_example},
        {"belief monotonicity", monotonicity},
        {"oracle equivalence", oracle_equivalence},
        {"no dead pairs gives the product", product_case},
        {"full conditionals give Bayes", conditional_case},
        {"conflict detection", conflict_detection},
        {"measure identities", measure_identities},
        {"Dempster cross-check", dempster_cross_check},
        {"CLI golden files and exit codes", cli_contract},
    };
    const char* ids[] = {"1", "2", "3", "4", "5", "6a", "6b", "7", "8", "9", "10"};
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome o;
        try {
            o = criteria[k].run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        std::printf("criterion %-3s %s  %s (%s)\n", ids[k], o.pass ? "PASS" : "FAIL", criteria[k].name,
                    o.detail.c_str());
        failures += o.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
