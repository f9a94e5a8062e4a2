#include <doctest.h>

#include <cmath>

#include "graphsum/errors.hpp"
#include "graphsum/optim.hpp"
#include "graphsum/rng.hpp"

using namespace graphsum;

TEST_CASE("rng determinism and range") {
  Rng a(42), b(42), c(43);
  bool all_equal = true;
  bool any_differs = false;
  for (int i = 0; i < 1000; ++i) {
    const double va = a.next_double();
    const double vb = b.next_double();
    const double vc = c.next_double();
    all_equal = all_equal && va == vb;
    any_differs = any_differs || va != vc;
    CHECK(va >= 0.0);
    CHECK(va < 1.0);
  }
  CHECK(all_equal);
  CHECK(any_differs);

  SUBCASE("forked streams are independent of parent draws") {
    Rng parent(9);
    Rng fork_before = parent.fork(5);
    parent.next_double();
    Rng fork_after = parent.fork(5);
    CHECK(fork_before.next_u64() == fork_after.next_u64());
  }
}

TEST_CASE("adam step") {
  SUBCASE("zero gradient leaves a fresh tensor unchanged") {
    ParamTensor p("p", Matrix::from_rows({{1.0, -2.0}}));
    adam_step(p, AdamConfig{});
    CHECK(p.value(0, 0) == 1.0);
    CHECK(p.value(0, 1) == -2.0);
    CHECK(p.steps == 1);
  }

  SUBCASE("first step moves by about -lr for unit gradient") {
    ParamTensor p("p", Matrix::from_rows({{0.5}}));
    p.grad(0, 0) = 1.0;
    AdamConfig cfg;
    cfg.lr = 0.1;
    adam_step(p, cfg);
    // Bias correction makes the first-step ratio approach sign(g).
    CHECK(p.value(0, 0) == doctest::Approx(0.5 - 0.1).epsilon(1e-7));
    CHECK(p.grad(0, 0) == 0.0);  // cleared
  }

  SUBCASE("constant positive gradient shrinks the value monotonically") {
    ParamTensor p("p", Matrix::from_rows({{1.0}}));
    AdamConfig cfg;
    cfg.lr = 0.05;
    double prev = p.value(0, 0);
    for (int i = 0; i < 2; ++i) {
      p.grad(0, 0) = 2.0;
      adam_step(p, cfg);
      CHECK(p.value(0, 0) < prev);
      prev = p.value(0, 0);
    }
  }

  SUBCASE("deterministic: identical state gives identical update") {
    auto run = [] {
      ParamTensor p("p", Matrix::from_rows({{0.3, -0.7}}));
      p.grad(0, 0) = 0.11;
      p.grad(0, 1) = -0.42;
      adam_step(p, AdamConfig{});
      p.grad(0, 0) = -0.2;
      p.grad(0, 1) = 0.05;
      adam_step(p, AdamConfig{});
      return p;
    };
    const ParamTensor p1 = run();
    const ParamTensor p2 = run();
    CHECK(p1.value.data() == p2.value.data());
    CHECK(p1.moment1.data() == p2.moment1.data());
    CHECK(p1.moment2.data() == p2.moment2.data());
  }

  SUBCASE("non-finite gradient names the parameter") {
    ParamTensor p("encoder_weight", Matrix(1, 1, 0.0));
    p.grad(0, 0) = std::nan("");
    CHECK_THROWS_WITH_AS(adam_step(p, AdamConfig{}), doctest::Contains("encoder_weight"),
                         NumericError);
  }
}

TEST_CASE("grad_check") {
  SUBCASE("quadratic loss has gradient p") {
    Rng rng(5);
    ParamTensor p("p", glorot_uniform(3, 3, rng));
    // Keep entries away from zero so the check is purely relative.
    for (double& v : p.value.data()) {
      v += v >= 0 ? 0.5 : -0.5;
    }
    auto loss = [&p] { return 0.5 * dot(p.value, p.value); };
    p.grad = p.value;
    CHECK(grad_check(loss, p, 1e-5) < 1e-8);
  }

  SUBCASE("constant loss means zero gradient and zero error") {
    ParamTensor p("p", Matrix(2, 2, 1.0));
    auto loss = [] { return 3.5; };
    CHECK(grad_check(loss, p, 1e-5) == 0.0);
  }

  SUBCASE("a wrong gradient is flagged") {
    ParamTensor p("p", Matrix(1, 1, 1.0));
    auto loss = [&p] { return p.value(0, 0) * p.value(0, 0); };
    p.grad(0, 0) = 1.0;  // true gradient is 2
    CHECK(grad_check(loss, p, 1e-5) > 0.1);
  }
}
