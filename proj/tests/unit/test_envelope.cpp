#include "slra/envelope.hpp"
#include "slra/subspace.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace slra;
using slra::testing::random_mat;

namespace {

Mat diag2(double a, double b) {
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

Mat random_unitary(Rng& rng, Index n) {
    Eigen::HouseholderQR<Mat> qr(random_mat(rng, n, n));
    return qr.householderQ() * Mat::Identity(n, n);
}

double augmented(const RankObjective& obj, const Mat& x, const Mat& lambda, double alpha) {
    return obj.envelope_value(x) + frobenius_inner(x, lambda) + 0.5 * alpha * x.squaredNorm();
}

} // namespace

TEST_CASE("primal_value examples") {
    Rng rng(21);
    const Mat f = random_mat(rng, 4, 3);
    const RankObjective obj(f, 0.7);
    CHECK(obj.primal_value(f) == doctest::Approx(0.49 * 3));
    CHECK(obj.primal_value(Mat::Zero(4, 3)) == doctest::Approx(f.squaredNorm()));
    const RankObjective d(diag2(2, 0.5), 1.0);
    CHECK(d.primal_value(diag2(2, 0)) == doctest::Approx(1.25));
    CHECK_THROWS_AS(d.primal_value(Mat::Zero(3, 2)), ShapeError);
    CHECK_THROWS_AS(RankObjective(f, 0.0), DomainError);
    CHECK_THROWS_AS(RankObjective(f, -1.0), DomainError);
}

TEST_CASE("envelope_value examples") {
    const RankObjective d(diag2(2, 0.5), 1.0);
    CHECK(d.envelope_value(Mat::Zero(2, 2)) == doctest::Approx(4.25));
    CHECK(d.envelope_value(diag2(2, 0.25)) == doctest::Approx(1.5));
    // all nonzero singular values above sigma0: envelope and objective agree
    CHECK(d.envelope_value(diag2(3, 1.5)) == doctest::Approx(d.primal_value(diag2(3, 1.5))));
    CHECK(d.envelope_value(diag2(1.2, 0)) == doctest::Approx(d.primal_value(diag2(1.2, 0))));
}

TEST_CASE("conjugate_value examples") {
    Rng rng(22);
    const Mat f = random_mat(rng, 3, 3);
    const RankObjective obj(f, 1.3);
    CHECK(obj.conjugate_value(-2.0 * f) == doctest::Approx(-f.squaredNorm()));
    const RankObjective d(diag2(2, 0.5), 1.0);
    CHECK(d.conjugate_value(Mat::Zero(2, 2)) == doctest::Approx(-1.25));
}

TEST_CASE("tilted_minimizer examples") {
    const RankObjective d(diag2(2, 0.5), 1.0);
    const TiltedMinimizer m = d.tilted_minimizer(Mat::Zero(2, 2), 0.0);
    CHECK((m.x - diag2(2, 0)).norm() < 1e-12);
    CHECK_FALSE(m.degenerate);
    for (double alpha : {0.0, 0.1, 1.0}) CHECK(d.tilted_minimizer(2.0 * d.data(), alpha).x.norm() < 1e-12);

    Mat f = Mat::Constant(1, 1, cplx(1.1, 0));
    const RankObjective one(f, 1.0);
    CHECK(std::abs(one.tilted_minimizer(Mat::Zero(1, 1), 0.2).x(0, 0) - 1.0) < 1e-12);

    // a singular value on sigma0 without augmentation is flagged, never fatal
    const RankObjective tie(diag2(1.0, 0.3), 1.0);
    CHECK(tie.tilted_minimizer(Mat::Zero(2, 2), 0.0).degenerate);
    CHECK_FALSE(tie.tilted_minimizer(Mat::Zero(2, 2), 0.1).degenerate);
    CHECK_THROWS_AS(tie.tilted_minimizer(Mat::Zero(2, 2), -0.1), DomainError);
}

TEST_CASE("dual values") {
    Rng rng(23);
    const Mat f = random_mat(rng, 4, 5);
    const RankObjective obj(f, 1.5);
    CHECK(dual_value_da(obj, Mat::Zero(4, 5)) == doctest::Approx(-obj.conjugate_value(Mat::Zero(4, 5))));
    CHECK(dual_value_da(obj, 2.0 * f) == doctest::Approx(f.squaredNorm()));
    const double alpha = 0.3;
    const TiltedMinimizer m = obj.tilted_minimizer(Mat::Zero(4, 5), alpha);
    CHECK(dual_value_ada(obj, Mat::Zero(4, 5), alpha) ==
          doctest::Approx(obj.envelope_value(m.x) + 0.5 * alpha * m.x.squaredNorm()));
    CHECK_THROWS_AS(dual_value_ada(obj, Mat::Zero(4, 5), 0.0), DomainError);

    // the dual from the minimizer's own singular values matches the closed form
    for (int trial = 0; trial < 20; ++trial) {
        const Mat l = 2.0 * random_mat(rng, 4, 5);
        const TiltedMinimizer t = obj.tilted_minimizer(l, 0.0);
        CHECK(t.envelope + frobenius_inner(t.x, l) == doctest::Approx(obj.dual_value(l)).epsilon(1e-10));
    }
}

TEST_CASE("Fenchel-Young on random instances") {
    Rng rng(24);
    for (int trial = 0; trial < 50; ++trial) {
        const Mat f = random_mat(rng, 6, 5);
        const double sigma0 = 0.5 + 0.05 * trial;
        const RankObjective obj(f, sigma0);
        const Mat l = random_mat(rng, 6, 5);
        const double conj = obj.conjugate_value(l);
        for (int k = 0; k < 20; ++k) {
            Mat x = random_mat(rng, 6, 5);
            if (k % 2) x = apply_svfc(x, [&](double s) { return s > 1.5 ? s : 0.0; });  // lower rank samples
            CHECK(obj.primal_value(x) + conj - frobenius_inner(x, l) >= -1e-9);
            CHECK(obj.envelope_value(x) + conj - frobenius_inner(x, l) >= -1e-9);
        }
        // equality at the hard-thresholded F + Lambda/2
        const Mat star = apply_svfc(f + 0.5 * l, [&](double s) { return f_zero(s, sigma0); });
        CHECK(conj == doctest::Approx(frobenius_inner(star, l) - obj.primal_value(star)).epsilon(1e-8));
    }
}

TEST_CASE("envelope lies below the objective and is midpoint convex") {
    Rng rng(25);
    for (int trial = 0; trial < 40; ++trial) {
        const Index m = 1 + trial % 30, n = 1 + (7 * trial) % 30;
        const RankObjective obj(random_mat(rng, m, n), 0.3 + 0.1 * (trial % 20));
        Mat x = random_mat(rng, m, n);
        if (trial % 3 == 0) x = apply_svfc(x, [](double s) { return s > 1.0 ? s - 1.0 : 0.0; });
        CHECK(obj.envelope_value(x) <= obj.primal_value(x) + 1e-9 * (1.0 + obj.primal_value(x)));
    }
    const RankObjective obj(random_mat(rng, 6, 5), 1.1);
    for (int trial = 0; trial < 200; ++trial) {
        const Mat x = random_mat(rng, 6, 5) * (0.2 + 0.01 * trial);
        const Mat y = random_mat(rng, 6, 5) * (0.1 + 0.005 * trial);
        CHECK(obj.envelope_value(0.5 * (x + y)) <= 0.5 * (obj.envelope_value(x) + obj.envelope_value(y)) + 1e-9);
    }
}

TEST_CASE("dual via envelope equals dual via objective") {
    // min_X N**(X) + <X, L> is attained at the hard-threshold minimizer and equals -N*(-L)
    Rng rng(26);
    for (int trial = 0; trial < 10; ++trial) {
        const RankObjective obj(random_mat(rng, 4, 3), 1.0);
        const Mat l = random_mat(rng, 4, 3);
        const double g = obj.dual_value(l);
        const Mat star = obj.tilted_minimizer(l, 0.0).x;
        CHECK(obj.envelope_value(star) + frobenius_inner(star, l) == doctest::Approx(g).epsilon(1e-10));
        CHECK(obj.primal_value(star) + frobenius_inner(star, l) == doctest::Approx(g).epsilon(1e-10));
        for (int k = 0; k < 300; ++k) {
            const Mat x = star + (0.02 * (k % 50) + 0.01) * random_mat(rng, 4, 3);
            CHECK(obj.envelope_value(x) + frobenius_inner(x, l) >= g - 1e-9);
        }
    }
}

TEST_CASE("augmented minimizer beats random perturbations") {
    Rng rng(27);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const RankObjective obj(2.0 * random_mat(rng, 5, 4), 0.5 + u(rng) * 2.0);
        const Mat l = random_mat(rng, 5, 4);
        const double alpha = 0.05 + u(rng);
        const Mat star = obj.tilted_minimizer(l, alpha).x;
        const double best = augmented(obj, star, l, alpha);
        const double radius = 0.1 * star.norm() + 0.1;
        for (int k = 0; k < 500; ++k) {
            Mat e = random_mat(rng, 5, 4);
            e *= radius * u(rng) / e.norm();
            CHECK(augmented(obj, star + e, l, alpha) >= best - 1e-10 * (1.0 + std::abs(best)));
        }
    }
}

TEST_CASE("augmented minimizer is unique and basis independent") {
    Rng rng(28);
    for (int trial = 0; trial < 10; ++trial) {
        const Mat f = random_mat(rng, 5, 5);
        const Mat l = random_mat(rng, 5, 5);
        const Mat q = random_unitary(rng, 5);
        const Mat w = random_unitary(rng, 5);
        const RankObjective a(f, 1.0), b(q * f * w, 1.0);
        const Mat xa = a.tilted_minimizer(l, 0.2).x;
        const Mat xb = b.tilted_minimizer(q * l * w, 0.2).x;
        CHECK((q * xa * w - xb).norm() <= 1e-8 * (1.0 + xa.norm()));
    }
}

TEST_CASE("thresholded factorization gives the same minimizer") {
    Rng rng(29);
    for (int trial = 0; trial < 10; ++trial) {
        const Mat f = random_mat(rng, 30, 30);
        const Mat l = 0.3 * random_mat(rng, 30, 30);
        const double sigma0 = 4.0 + trial;
        const RankObjective full(f, sigma0), fast(f, sigma0, SvdMethod::thresholded);
        for (double alpha : {0.0, 0.1}) {
            const TiltedMinimizer a = full.tilted_minimizer(l, alpha);
            const TiltedMinimizer b = fast.tilted_minimizer(l, alpha);
            CHECK((a.x - b.x).norm() <= 1e-10 * (1.0 + a.x.norm()));
            CHECK(a.envelope == doctest::Approx(b.envelope).epsilon(1e-12));
            CHECK((a.sigma - b.sigma).norm() <= 1e-10 * (1.0 + a.sigma.norm()));
        }
    }
}

TEST_CASE("restricted augmented dual is attained at the ADA minimizer") {
    Rng rng(30);
    const HankelSpec spec{5, 4};
    const HankelSubspace sub(spec);
    const double alpha = 0.2;
    for (int trial = 0; trial < 5; ++trial) {
        const RankObjective obj(random_mat(rng, 5, 4), 1.0);
        const Mat l0 = sub.project_complement(random_mat(rng, 5, 4));
        const TiltedMinimizer t = obj.tilted_minimizer(l0, alpha);
        const Mat l1 = l0 + alpha * sub.project_complement(t.x);
        const double h = dual_value_ada_restricted(obj, sub, t, l1, alpha);
        auto value = [&](const Mat& x) {
            return obj.envelope_value(x) + 0.5 * alpha * sub.project(x).squaredNorm() + frobenius_inner(x, l1);
        };
        CHECK(h == doctest::Approx(value(t.x)).epsilon(1e-12));
        for (int k = 0; k < 300; ++k) CHECK(value(t.x + 0.05 * (k % 10 + 1) * random_mat(rng, 5, 4)) >= h - 1e-10);
    }
}

TEST_CASE("toy objective functions") {
    CHECK(toy_conjugate(0.0) == 0.0);
    CHECK(toy_conjugate(2.0) == 2.0);
    CHECK(toy_conjugate(4.0) == 5.0);
    CHECK(toy_conjugate(-4.0) == 5.0);
    CHECK(toy_conjugate(2.0 + 1e-12) == doctest::Approx(2.0));
    CHECK(toy_objective(0.0) == 1.0);
    CHECK(toy_envelope(0.5) == 0.0);
    CHECK(toy_envelope(2.0) == 3.0);

    const auto tie = toy_tilted_minimizers(0.0);
    REQUIRE(tie.size() == 2);
    CHECK(tie[0] == 1.0);
    CHECK(tie[1] == -1.0);
    CHECK(toy_tilted_minimizers(0.5) == std::vector<double>{-1.0});
    CHECK(toy_tilted_minimizers(1.0) == std::vector<double>{-1.0});

    // grid oracle for argmin |x^2 - 1| + lambda x, and for the conjugate sup
    for (double lambda = -5.0; lambda <= 5.0; lambda += 0.37) {
        double best = std::numeric_limits<double>::infinity(), arg = 0.0;
        for (int g = -40000; g <= 40000; ++g) {
            const double x = g * 1e-4;
            const double v = toy_objective(x) + lambda * x;
            if (v < best) best = v, arg = x;
        }
        CAPTURE(lambda);
        const double pick = toy_tilted_minimizers(lambda).front();
        CHECK(std::abs(pick - arg) < 2e-4);
        CHECK(toy_conjugate(-lambda) == doctest::Approx(-best).epsilon(1e-6));
    }
}

TEST_CASE("toy augmented minimizer against a grid") {
    const ToyObjective toy;
    for (double alpha : {0.05, 0.5, 2.0}) {
        for (double lambda = -4.0; lambda <= 4.0; lambda += 0.23) {
            double best = std::numeric_limits<double>::infinity(), arg = 0.0;
            for (int g = -40000; g <= 40000; ++g) {
                const double x = g * 1e-4;
                const double v = toy_envelope(x) + lambda * x + 0.5 * alpha * x * x;
                if (v < best) best = v, arg = x;
            }
            const double x = toy.tilted_minimizer(Mat::Constant(1, 1, lambda), alpha).x(0, 0).real();
            CHECK(std::abs(x - arg) < 2e-4);
        }
    }
    CHECK(toy.tilted_minimizer(Mat::Zero(1, 1), 0.0).degenerate);
    CHECK(toy.dual_value(Mat::Constant(1, 1, 1.0)) == -1.0);
}
