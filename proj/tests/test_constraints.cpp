#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "mingain/constraints.hpp"
#include "mingain/evidence.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace mingain;
using namespace mingain::testing;

namespace {

ConstraintSystem worked_system(std::span<const Conditional> conditionals = {})
{
    auto f = t3_frame();
    auto left = abstract_evidence(first_bpa(f));
    auto right = abstract_evidence(second_bpa(f));
    return assemble(left, right, default_joint_compatibility(left.relation(), right.relation()), conditionals);
}

void check_witness(const ConstraintSystem& cs, const JointDistribution& w, double tol)
{
    auto rs = w.cells().row_sums();
    auto cs_ = w.cells().col_sums();
    for (std::size_t i = 0; i < cs.row_count(); ++i)
        CHECK(std::abs(rs[i] - cs.rows()[i]) <= tol);
    for (std::size_t j = 0; j < cs.col_count(); ++j)
        CHECK(std::abs(cs_[j] - cs.cols()[j]) <= tol);
    for (std::size_t i = 0; i < cs.row_count(); ++i)
        for (std::size_t j = 0; j < cs.col_count(); ++j) {
            if (cs.kind(i, j) == CellKind::Forbidden)
                CHECK(w(i, j) == 0.0);
            else if (cs.kind(i, j) == CellKind::Fixed)
                CHECK(std::abs(w(i, j) - *cs.fixed_value(i, j)) <= tol);
            CHECK(w(i, j) >= 0.0);
        }
}

// Recomputes the certificate's inequality from the system alone.
void check_certificate(const ConstraintSystem& cs, const ConflictCertificate& c, double tol)
{
    double row_mass = 0.0;
    std::vector<bool> reach(cs.col_count(), false);
    for (auto i : c.rows) {
        row_mass += cs.residual_rows()[i];
        for (std::size_t j = 0; j < cs.col_count(); ++j)
            if (cs.is_free(i, j))
                reach[j] = true;
    }
    double col_mass = 0.0;
    std::vector<std::size_t> reached;
    for (std::size_t j = 0; j < cs.col_count(); ++j)
        if (reach[j]) {
            col_mass += cs.residual_cols()[j];
            reached.push_back(j);
        }
    CHECK(reached == c.reachable_cols);
    CHECK(row_mass - col_mass > tol);
    CHECK(c.row_labels.size() == c.rows.size());
}

}  // namespace

TEST_CASE("assembling the worked example")
{
    auto cs = worked_system();
    CHECK(std::vector<double>(cs.rows().begin(), cs.rows().end()) == std::vector<double>{0.8, 0.2});
    CHECK(cs.cols()[0] == doctest::Approx(0.7));
    CHECK(cs.cols()[1] == doctest::Approx(0.2));
    CHECK(cs.cols()[2] == doctest::Approx(0.1));
    CHECK(cs.forbidden_cells() == std::vector<Cell>{{0, 1}});
    CHECK(cs.fixed_cells().empty());
    CHECK(cs.free_count() == 5);
}

TEST_CASE("full conditionals fix every cell")
{
    std::vector<Conditional> cond{{0, 0, 0.875}, {0, 1, 0.0}, {0, 2, 0.125},
                                  {1, 0, 0.0},   {1, 1, 1.0}, {1, 2, 0.0}};
    auto cs = worked_system(cond);
    CHECK(cs.free_count() == 0);
    CHECK(*cs.fixed_value(0, 0) == doctest::Approx(0.7));
    CHECK(*cs.fixed_value(1, 1) == doctest::Approx(0.2));
    CHECK(cs.kind(1, 0) == CellKind::Forbidden);
    for (double r : cs.residual_rows())
        CHECK(r == 0.0);
}

TEST_CASE("conditional above a column marginal is inconsistent")
{
    std::vector<Conditional> cond{{0, 0, 0.95}};
    CHECK(thrown_code([&] { worked_system(cond); }) == ErrorCode::InconsistentConditional);
    std::vector<Conditional> over{{1, 0, 0.6}, {1, 2, 0.5}};
    CHECK(thrown_code([&] { worked_system(over); }) == ErrorCode::InconsistentConditional);
    std::vector<Conditional> dead{{0, 1, 0.1}};
    CHECK(thrown_code([&] { worked_system(dead); }) == ErrorCode::InconsistentConditional);
    std::vector<Conditional> range{{0, 0, 1.5}};
    CHECK(thrown_code([&] { worked_system(range); }) == ErrorCode::InconsistentConditional);
    std::vector<Conditional> index{{5, 0, 0.1}};
    CHECK(thrown_code([&] { worked_system(index); }) == ErrorCode::InconsistentConditional);
}

TEST_CASE("constraint system validation")
{
    CHECK(thrown_code([] { ConstraintSystem::from_marginals({0.5, 0.4}, {1.0}); }).has_value());
    std::vector<Cell> forbidden{{0, 0}};
    std::vector<FixedCell> fixed{{{0, 0}, 0.3}};
    CHECK(thrown_code([&] { ConstraintSystem::from_marginals({0.5, 0.5}, {0.5, 0.5}, forbidden, fixed); })
              .has_value());
    std::vector<FixedCell> too_big{{{0, 0}, 0.6}};
    CHECK(thrown_code([&] { ConstraintSystem::from_marginals({0.5, 0.5}, {0.5, 0.5}, {}, too_big); }).has_value());
    std::vector<FixedCell> zero{{{0, 1}, 0.0}};
    auto cs = ConstraintSystem::from_marginals({0.5, 0.5}, {0.5, 0.5}, {}, zero);
    CHECK(cs.kind(0, 1) == CellKind::Forbidden);
}

TEST_CASE("worked example is feasible")
{
    auto cs = worked_system();
    auto r = check_feasible(cs);
    REQUIRE(r.feasible());
    REQUIRE(r.witness.has_value());
    check_witness(cs, *r.witness, 1e-9);
}

TEST_CASE("disjoint singletons conflict")
{
    std::vector<Cell> forbidden{{0, 0}};
    auto cs = ConstraintSystem::from_marginals({1.0}, {1.0}, forbidden);
    auto r = check_feasible(cs);
    REQUIRE_FALSE(r.feasible());
    REQUIRE(r.certificate.has_value());
    CHECK(r.certificate->rows == std::vector<std::size_t>{0});
    CHECK(r.certificate->reachable_cols.empty());
    CHECK(r.certificate->margin() == doctest::Approx(1.0));
    check_certificate(cs, *r.certificate, 1e-9);
}

TEST_CASE("unconstrained systems are witnessed by the product")
{
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        auto cs = random_system(rng, 1 + trial % 5, 1 + trial % 4, 0.0, false);
        auto r = check_feasible(cs);
        REQUIRE(r.feasible());
        for (std::size_t i = 0; i < cs.row_count(); ++i)
            for (std::size_t j = 0; j < cs.col_count(); ++j)
                CHECK((*r.witness)(i, j) == cs.rows()[i] * cs.cols()[j]);
    }
}

TEST_CASE("max flow agrees with the Gale-Hoffman condition")
{
    std::mt19937_64 rng(13);
    int feasible = 0;
    int conflicts = 0;
    for (std::size_t nr = 1; nr <= 6; ++nr)
        for (std::size_t nc = 1; nc <= 6; ++nc)
            for (int trial = 0; trial < 30; ++trial) {
                auto cs = random_system(rng, nr, nc, 0.15 + 0.1 * (trial % 5), trial % 3 == 0);
                auto r = check_feasible(cs);
                CHECK(r.feasible() == gale_hoffman_feasible(cs, 1e-9));
                if (r.feasible()) {
                    ++feasible;
                    check_witness(cs, *r.witness, 1e-9);
                } else {
                    ++conflicts;
                    REQUIRE(r.certificate.has_value());
                    check_certificate(cs, *r.certificate, 1e-9);
                }
            }
    CHECK(feasible > 100);
    CHECK(conflicts > 100);
}

TEST_CASE("transposed systems have the same verdict")
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        auto cs = random_system(rng, 2 + trial % 4, 2 + trial % 3, 0.3, trial % 2 == 0);
        CHECK(check_feasible(cs).feasible() == check_feasible(cs.transposed()).feasible());
    }
}

TEST_CASE("extension support matches per-cell linear programs")
{
    std::mt19937_64 rng(19);
    int zeros = 0;
    for (int trial = 0; trial < 300; ++trial) {
        auto cs = trial % 2 ? random_system(rng, 2 + trial % 3, 2 + (trial / 3) % 3, 0.35, trial % 4 == 1)
                            : tight_system(rng, 2 + trial % 3, 2 + (trial / 3) % 3);
        auto r = check_feasible(cs);
        if (!r.feasible())
            continue;
        auto support = extension_support(cs, *r.witness);
        for (std::size_t i = 0; i < cs.row_count(); ++i)
            for (std::size_t j = 0; j < cs.col_count(); ++j) {
                if (!cs.is_free(i, j))
                    continue;
                std::vector<double> objective(cs.row_count() * cs.col_count(), 0.0);
                objective[i * cs.col_count() + j] = 1.0;
                auto v = lp_vertex(cs, objective);
                REQUIRE(v.has_value());
                bool positive = (*v)(i, j) > 1e-12;
                CHECK(support[i * cs.col_count() + j] == positive);
                if (!positive)
                    ++zeros;
            }
    }
    CHECK(zeros > 0);
}
