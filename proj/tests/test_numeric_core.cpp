#include <doctest.h>

#include <cmath>
#include <string>

#include "gtrs/adam.hpp"
#include "gtrs/gradcheck.hpp"
#include "gtrs/ops.hpp"
#include "gtrs/rng.hpp"
#include "gtrs/tape.hpp"

using namespace gtrs;

namespace {

Tensor random_tensor(std::vector<int> shape, Rng& rng, double scale = 1.0) {
    Tensor t(std::move(shape));
    for (std::int64_t i = 0; i < t.size(); ++i) t[i] = rng.gaussian(0.0, scale);
    return t;
}

}  // namespace

TEST_CASE("tensor shape checks") {
    CHECK_THROWS_AS(Tensor({2, 3}, {1.0, 2.0}), ShapeError);
    CHECK_THROWS_AS(Tensor(std::vector<int>{0}), ShapeError);
    CHECK_THROWS_AS(Tensor(std::vector<int>{2, 2, 2, 2}), ShapeError);
    Tensor t({2, 3, 4});
    t.at3(1, 2, 3) = 7.0;
    CHECK(t[23] == 7.0);
    CHECK(t.shape_str() == "[2,3,4]");
}

TEST_CASE("rng matches the published splitmix64 vectors") {
    // First output for seed 0 is the canonical test value of the algorithm.
    Rng r0(0);
    CHECK(r0.next_u64() == 0xe220a8397b1dcdafull);

    Rng r(1234567890);
    CHECK(r.next_u64() == 0x476948b80f74962full);
    CHECK(r.next_u64() == 0x852368bd7f08928bull);
    CHECK(r.next_u64() == 0x1688d3ec6fd448cdull);
    CHECK(r.next_u64() == 0x2073ebe0e2e8c504ull);
}

TEST_CASE("rng uniform and gaussian are reproducible") {
    Rng r(1234567890);
    CHECK(r.uniform() == doctest::Approx(0.27895025724088129).epsilon(1e-15));
    Rng r2(1234567890);
    CHECK(r2.gaussian() == doctest::Approx(-1.5852593039473624).epsilon(1e-12));

    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("rng uniform stays in range and substreams decorrelate") {
    Rng r(7);
    for (int i = 0; i < 10000; ++i) {
        const double u = r.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    Rng base(99);
    Rng s1 = base.derive(1);
    Rng s2 = base.derive(2);
    CHECK(s1.next_u64() != s2.next_u64());
    // Restored state continues the stream bit-exactly.
    Rng c(123);
    (void)c.gaussian();
    const std::uint64_t st = c.state();
    const double next = c.gaussian();
    Rng d(0);
    d.set_state(st);
    CHECK(d.gaussian() == next);
}

TEST_CASE("matmul identity and zero") {
    Tensor a({2, 2}, {1, 2, 3, 4});
    Tensor c = ops::matmul(Tensor::identity(2), a);
    for (int i = 0; i < 4; ++i) CHECK(c[i] == a[i]);
    Tensor z = ops::matmul(a, Tensor::zeros({2, 2}));
    for (int i = 0; i < 4; ++i) CHECK(z[i] == 0.0);
}

TEST_CASE("matmul matches a triple-loop oracle") {
    Rng rng(2024);
    Tensor a = random_tensor({3, 4}, rng);
    Tensor b = random_tensor({4, 2}, rng);
    Tensor c = ops::matmul(a, b);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 2; ++j) {
            double s = 0.0;
            for (int k = 0; k < 4; ++k) s += a.at(i, k) * b.at(k, j);
            CHECK(c.at(i, j) == doctest::Approx(s).epsilon(1e-12));
        }
    }
}

TEST_CASE("matmul errors name both shapes") {
    Tensor a({3, 4});
    Tensor b({5, 2});
    try {
        ops::matmul(a, b);
        FAIL("expected ShapeError");
    } catch (const ShapeError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("[3,4]") != std::string::npos);
        CHECK(msg.find("[5,2]") != std::string::npos);
    }
}

TEST_CASE("transposed matmul variants agree with explicit transpose") {
    Rng rng(11);
    Tensor a = random_tensor({3, 5}, rng);
    Tensor b = random_tensor({4, 5}, rng);
    Tensor nt = ops::matmul_nt(a, b);
    Tensor ref = ops::matmul(a, ops::transpose(b));
    for (std::int64_t i = 0; i < nt.size(); ++i) CHECK(nt[i] == doctest::Approx(ref[i]).epsilon(1e-12));

    Tensor c = random_tensor({5, 3}, rng);
    Tensor d = random_tensor({5, 4}, rng);
    Tensor tn = ops::matmul_tn(c, d);
    Tensor ref2 = ops::matmul(ops::transpose(c), d);
    for (std::int64_t i = 0; i < tn.size(); ++i) CHECK(tn[i] == doctest::Approx(ref2[i]).epsilon(1e-12));
}

TEST_CASE("softmax_rows basics") {
    Tensor x({1, 2}, {0.0, 0.0});
    Tensor y = ops::softmax_rows(x);
    CHECK(y[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(y[1] == doctest::Approx(0.5).epsilon(1e-15));

    Tensor big({1, 2}, {1000.0, 0.0});
    Tensor yb = ops::softmax_rows(big);
    CHECK(yb.all_finite());
    CHECK(yb[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(yb[1] < 1e-300);
}

TEST_CASE("softmax_rows matches extended-precision oracle") {
    // exp/sum of [1,2,3] computed at 50 digits.
    Tensor x({1, 3}, {1.0, 2.0, 3.0});
    Tensor y = ops::softmax_rows(x);
    CHECK(std::abs(y[0] - 0.090030573170380458) < 1e-12);
    CHECK(std::abs(y[1] - 0.24472847105479765) < 1e-12);
    CHECK(std::abs(y[2] - 0.66524095577482189) < 1e-12);
}

TEST_CASE("softmax_rows rows sum to 1 within 1e-12") {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        Tensor x = random_tensor({8, 13}, rng, 20.0);
        Tensor y = ops::softmax_rows(x);
        for (int i = 0; i < 8; ++i) {
            double s = 0.0;
            for (int j = 0; j < 13; ++j) {
                CHECK(y.at(i, j) >= 0.0);
                s += y.at(i, j);
            }
            CHECK(std::abs(s - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("gelu matches the erf oracle") {
    CHECK(ops::gelu_scalar(0.0) == 0.0);
    CHECK(std::abs(ops::gelu_scalar(10.0) - 10.0) < 1e-9);
    // x * Phi(x) at 50 digits.
    CHECK(std::abs(ops::gelu_scalar(1.0) - 0.84134474606854295) < 1e-10);
    CHECK(std::abs(ops::gelu_scalar(0.5) - 0.34573123063700655) < 1e-10);
}

TEST_CASE("layer_norm hand values") {
    Tensor c({1, 4}, {3.0, 3.0, 3.0, 3.0});
    Tensor ones = Tensor::ones({4});
    Tensor zeros = Tensor::zeros({4});
    Tensor yc = ops::layer_norm(c, ones, zeros);
    for (int j = 0; j < 4; ++j) CHECK(std::abs(yc[j]) < 1e-9);

    Tensor pm({1, 2}, {1.0, -1.0});
    Tensor y = ops::layer_norm(pm, Tensor::ones({2}), Tensor::zeros({2}));
    // 1/sqrt(1 + 1e-5) at 50 digits.
    CHECK(y[0] == doctest::Approx(0.99999500003749969).epsilon(1e-12));
    CHECK(y[1] == doctest::Approx(-0.99999500003749969).epsilon(1e-12));

    Rng rng(3);
    Tensor x = random_tensor({5, 16}, rng, 4.0);
    Tensor yn = ops::layer_norm(x, Tensor::ones({16}), Tensor::zeros({16}));
    for (int i = 0; i < 5; ++i) {
        double mean = 0.0;
        for (int j = 0; j < 16; ++j) mean += yn.at(i, j);
        CHECK(std::abs(mean / 16.0) < 1e-12);
    }

    Tensor gain({2}, {2.0, 0.5});
    Tensor bias({2}, {1.0, -1.0});
    Tensor ya = ops::layer_norm(pm, gain, bias);
    CHECK(ya[0] == doctest::Approx(2.0 * 0.99999500003749969 + 1.0).epsilon(1e-12));
    CHECK(ya[1] == doctest::Approx(0.5 * -0.99999500003749969 - 1.0).epsilon(1e-12));
}

TEST_CASE("backward: f(x)=x^2 at x=3 gives 6") {
    ParamStore store;
    store.add("x", Tensor::scalar(3.0));
    Tape tape;
    Var x = tape.param(store, "x");
    Var loss = tape.mul(x, x);
    tape.backward(loss);
    CHECK(store.entry("x").grad[0] == doctest::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("backward: f(W)=sum(X*W) gives X^T * ones") {
    ParamStore store;
    Rng rng(8);
    store.add("W", random_tensor({3, 2}, rng));
    Tensor x = random_tensor({4, 3}, rng);

    Tape tape;
    Var w = tape.param(store, "W");
    Var xc = tape.constant(x);
    Var loss = tape.sum_all(tape.matmul(xc, w));
    tape.backward(loss);

    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 2; ++j) {
            double expect = 0.0;
            for (int r = 0; r < 4; ++r) expect += x.at(r, i);
            CHECK(store.entry("W").grad.at(i, j) == doctest::Approx(expect).epsilon(1e-12));
        }
    }
}

TEST_CASE("backward leaves non-trainable gradients at zero") {
    ParamStore store;
    store.add("w", Tensor::scalar(2.0));
    store.add("frozen", Tensor::scalar(5.0), /*trainable=*/false);
    Tape tape;
    Var w = tape.param(store, "w");
    Var f = tape.param(store, "frozen");
    tape.backward(tape.mul(w, f));
    CHECK(store.entry("w").grad[0] == doctest::Approx(5.0));
    CHECK(store.entry("frozen").grad[0] == 0.0);
}

TEST_CASE("value-only tapes refuse backward") {
    ParamStore store;
    store.add("w", Tensor::scalar(2.0));
    Tape tape(/*grad_enabled=*/false);
    Var w = tape.param(store, "w");
    Var y = tape.mul(w, w);
    CHECK(tape.value(y)[0] == doctest::Approx(4.0));
    CHECK_THROWS_AS(tape.backward(y), ConfigError);
}

TEST_CASE("backward matches finite differences on a two-layer toy net") {
    ParamStore store;
    Rng rng(77);
    store.add("W1", random_tensor({3, 5}, rng, 0.5));
    store.add("b1", random_tensor({1, 5}, rng, 0.1));
    store.add("W2", random_tensor({5, 2}, rng, 0.5));
    Tensor x = random_tensor({4, 3}, rng);

    auto forward = [&](Tape& tape) {
        Var xc = tape.constant(x);
        Var h = tape.gelu(tape.add_rowvec(tape.matmul(xc, tape.param(store, "W1")), tape.param(store, "b1")));
        Var out = tape.softmax_rows(tape.layer_norm_rows(tape.matmul(h, tape.param(store, "W2"))));
        // Weighted sum makes the softmax output gradient non-degenerate.
        Tensor wts({4, 2});
        for (std::int64_t i = 0; i < wts.size(); ++i) wts[i] = 0.1 * static_cast<double>(i + 1);
        return tape.sum_all(tape.mul(out, tape.constant(wts)));
    };

    store.zero_grads();
    Tape tape;
    tape.backward(forward(tape));

    auto f = [&] {
        Tape t(/*grad_enabled=*/false);
        return t.value(forward(t))[0];
    };
    GradCheckResult r = compare_grads_fd(f, store, 1e-5);
    CHECK(r.excluded == 0);
    CHECK(r.max_rel_err < 1e-4);
}

TEST_CASE("tape op gradients match finite differences individually") {
    Rng rng(31);
    // Each entry builds a scalar loss exercising one op.
    ParamStore store;
    store.add("A", random_tensor({3, 4}, rng, 0.8));
    store.add("B", random_tensor({3, 4}, rng, 0.8));
    store.add("g", random_tensor({1, 4}, rng, 0.5));
    store.add("c", random_tensor({3, 1}, rng, 0.5));

    auto forward = [&](Tape& tape) {
        Var a = tape.param(store, "A");
        Var b = tape.param(store, "B");
        Var g = tape.param(store, "g");
        Var c = tape.param(store, "c");
        Var t1 = tape.mul(tape.sigmoid(a), tape.gelu(b));
        Var t2 = tape.add_colvec(tape.mul_rowvec(t1, g), c);
        Var t3 = tape.concat_rows({t2, tape.scale(tape.sub(a, b), 0.5)});
        Var t4 = tape.slice_rows(t3, 1, 5);
        Var t5 = tape.mean_rows(tape.softmax_rows(t4));
        Tensor wts({1, 4}, {0.3, -0.7, 1.1, 0.2});
        return tape.sum_all(tape.mul(t5, tape.constant(wts)));
    };

    store.zero_grads();
    Tape tape;
    tape.backward(forward(tape));
    auto f = [&] {
        Tape t(false);
        return t.value(forward(t))[0];
    };
    GradCheckResult r = compare_grads_fd(f, store, 1e-5);
    CHECK(r.excluded == 0);
    CHECK(r.max_rel_err < 1e-4);
}

TEST_CASE("adam basics") {
    SUBCASE("zero gradient is a no-op") {
        ParamStore store;
        store.add("w", Tensor({2, 2}, {1, 2, 3, 4}));
        Adam opt(1e-2);
        store.zero_grads();
        opt.step(store);
        CHECK(store.entry("w").value[2] == 3.0);
    }
    SUBCASE("constant positive gradient strictly decreases the parameter") {
        ParamStore store;
        store.add("w", Tensor::scalar(1.0));
        Adam opt(1e-2);
        double prev = 1.0;
        for (int i = 0; i < 10; ++i) {
            store.zero_grads();
            store.entry("w").grad[0] = 2.5;
            opt.step(store);
            CHECK(store.entry("w").value[0] < prev);
            prev = store.entry("w").value[0];
        }
    }
    SUBCASE("first step is about -lr * sign(g), independent of |g|") {
        for (double g : {0.5, 3.0, -2.0, 1e-5}) {
            ParamStore store;
            store.add("w", Tensor::scalar(0.0));
            Adam opt(1e-3);
            store.entry("w").grad[0] = g;
            opt.step(store);
            const double delta = store.entry("w").value[0];
            CHECK(std::abs(delta + 1e-3 * (g > 0 ? 1.0 : -1.0)) < 1e-3 * 1e-2);
        }
    }
    SUBCASE("non-trainable parameters are fixed points") {
        ParamStore store;
        store.add("frozen", Tensor::scalar(7.0), /*trainable=*/false);
        store.add("w", Tensor::scalar(1.0));
        Adam opt(1e-1);
        for (int i = 0; i < 5; ++i) {
            store.zero_grads();
            store.entry("frozen").grad[0] = 100.0;  // deliberately hostile
            store.entry("w").grad[0] = 1.0;
            opt.step(store);
        }
        CHECK(store.entry("frozen").value[0] == 7.0);
        CHECK(store.entry("w").value[0] != 1.0);
    }
}

TEST_CASE("finite differences: quadratic is exact, error order is 2") {
    ParamStore store;
    store.add("theta", Tensor({1, 3}, {0.4, -1.2, 2.0}));
    const double a[3] = {1.5, -0.7, 0.3};
    const double b[3] = {0.2, 0.9, -1.1};
    auto f = [&] {
        double s = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double th = store.entry("theta").value[i];
            s += a[i] * th * th + b[i] * th;
        }
        return s;
    };
    auto g = finite_diff_grad(f, store, 1e-5);
    for (int i = 0; i < 3; ++i) {
        const double expect = 2.0 * a[i] * store.entry("theta").value[i] + b[i];
        CHECK(std::abs(g.at("theta")[i] - expect) < 1e-9);
    }

    // Smooth non-quadratic: halving h shrinks the error about 4x.
    ParamStore s2;
    s2.add("t", Tensor::scalar(0.3));
    auto fe = [&] { return std::exp(s2.entry("t").value[0]); };
    const double exact = std::exp(0.3);
    const double e1 = std::abs(finite_diff_grad(fe, s2, 1e-3).at("t")[0] - exact);
    const double e2 = std::abs(finite_diff_grad(fe, s2, 5e-4).at("t")[0] - exact);
    CHECK(e1 / e2 > 3.5);
    CHECK(e1 / e2 < 4.5);
}

TEST_CASE("ops keep finite inputs finite") {
    Rng rng(63);
    Tensor x = random_tensor({6, 7}, rng, 30.0);
    CHECK(ops::softmax_rows(x).all_finite());
    CHECK(ops::gelu(x).all_finite());
    CHECK(ops::sigmoid(x).all_finite());
    CHECK(ops::layer_norm_rows(x, ops::kLayerNormEps).all_finite());
    Tensor flat = Tensor::full({3, 4}, 2.5);
    CHECK(ops::layer_norm_rows(flat, ops::kLayerNormEps).all_finite());
}
