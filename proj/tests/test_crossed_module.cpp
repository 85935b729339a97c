#include <doctest.h>

#include "gerbe/crossed_module.hpp"
#include "gerbe/rng.hpp"
#include "oracles.hpp"

using namespace gerbe;

TEST_CASE("registry knows the three instances and rejects others") {
  for (const auto& n : crossed_module_names()) CHECK(make_crossed_module(n)->name() == n);
  CHECK(crossed_module_names().size() == 3);
  CHECK_THROWS_AS(make_crossed_module("so4"), ConfigError);
}

TEST_CASE("exp agrees with the Pade matrix exponential") {
  for (const auto& n : crossed_module_names()) {
    auto cm = make_crossed_module(n);
    Rng rng(3);
    for (Side s : {Side::G, Side::H}) {
      if (cm->dim(s) == 0) continue;
      for (int k = 0; k < 50; ++k) {
        Mat X = rng.algebra(*cm, s, 1.2);
        CHECK((cm->exp(s, X) - oracle::expm(X)).norm() < 1e-13);
      }
    }
  }
}

TEST_CASE("log inverts exp near the identity") {
  for (const auto& n : crossed_module_names()) {
    auto cm = make_crossed_module(n);
    Rng rng(5);
    for (Side s : {Side::G, Side::H}) {
      if (cm->dim(s) == 0) continue;
      for (int k = 0; k < 50; ++k) {
        Mat X = rng.algebra(*cm, s, 0.8);
        CHECK((cm->log(s, cm->exp(s, X)) - X).norm() < 1e-12);
        CHECK(cm->algebra_residual(s, X) < 1e-14);
        CHECK(cm->group_residual(s, cm->exp(s, X)) < 1e-13);
      }
    }
  }
}

TEST_CASE("su2 target is the adjoint representation") {
  auto cm = make_su2_ad();
  Rng rng(11);
  for (int k = 0; k < 30; ++k) {
    Mat q = rng.group(*cm, Side::H, 1.5);
    Eigen::Matrix3d R = oracle::su2_adjoint(q);
    CHECK((cm->t_group(q).real() - R).norm() < 1e-13);
    CHECK(cm->t_group(q).imag().norm() < 1e-14);
    // alpha of t(q) is conjugation by q regardless of the lift's sign.
    Mat h = rng.group(*cm, Side::H, 1.0);
    CHECK((cm->alpha(cm->t_group(q), h) - q * h * q.adjoint()).norm() < 1e-12);
  }
}

TEST_CASE("pushforwards match finite differences of the group action") {
  for (const auto& n : crossed_module_names()) {
    auto cm = make_crossed_module(n);
    Rng rng(17);
    for (int k = 0; k < 20; ++k) {
      Mat g = rng.group(*cm, Side::G), h = rng.group(*cm, Side::H);
      Mat X = rng.algebra(*cm, Side::G), Y = rng.algebra(*cm, Side::H);
      Mat fd_g = oracle::derivative5([&](double e) { return cm->alpha(g, cm->exp(Side::H, e * Y)); }, 1e-3);
      CHECK((fd_g - cm->alpha_gstar(g, Y)).norm() < 1e-10);
      Mat fd_h = oracle::derivative5([&](double e) { return cm->alpha(cm->exp(Side::G, e * X), h); }, 1e-3);
      CHECK((fd_h - cm->alpha_hstar(X, h)).norm() < 1e-10);
      Mat fd_a = oracle::derivative5([&](double e) { return cm->alpha_gstar(cm->exp(Side::G, e * X), Y); }, 1e-3);
      CHECK((fd_a - cm->alg_act(X, Y)).norm() < 1e-10);
      Mat fd_t = oracle::derivative5([&](double e) { return cm->t_group(cm->exp(Side::H, e * Y)); }, 1e-3);
      CHECK((fd_t - cm->t_alg(Y)).norm() < 1e-10);
    }
  }
}

TEST_CASE("axioms hold on every instance") {
  for (const auto& n : crossed_module_names()) {
    AxiomReport r = check_axioms(*make_crossed_module(n), 200, 1);
    CAPTURE(n);
    CHECK(r.pass());
    for (const auto& [k, v] : r.residuals) {
      CAPTURE(k);
      CHECK(v <= 1e-10);
    }
  }
}

TEST_CASE("corrupted target breaks the axioms") {
  for (const auto& n : {"heisenberg", "su2_ad"}) {
    AxiomReport r = check_axioms(*make_corrupted_target(make_crossed_module(n)), 100, 1);
    CHECK_FALSE(r.pass());
    CHECK(r.residuals.at("equivariance_t") > 1e-2);
  }
  CHECK_FALSE(check_axioms(*make_corrupted_target(make_bs1()), 100, 1).pass());
}

TEST_CASE("typed operations reject mismatched tags") {
  auto cm = make_heisenberg();
  GroupElement g{cm->identity(Side::G), Side::G};
  GroupElement h{cm->identity(Side::H), Side::H};
  CHECK_NOTHROW(act(*cm, g, h));
  CHECK_THROWS_AS(act(*cm, h, g), TagMismatch);
  CHECK_THROWS_AS(target_group(*cm, g), TagMismatch);
  CHECK_THROWS_AS(mul(*cm, g, h), TagMismatch);
  AlgebraElement X{cm->basis(Side::G)[0], Side::G};
  CHECK_THROWS_AS(target_alg(*cm, X), TagMismatch);
  CHECK(exp(*cm, X).group == Side::G);
}

TEST_CASE("su2 log refuses elements near minus one") {
  auto cm = make_su2_ad();
  CHECK_THROWS_AS(cm->log(Side::H, Mat(-Mat::Identity(2, 2))), DomainError);
}

TEST_CASE("chain accumulator stays on the group over long products") {
  auto cm = make_su2_ad();
  Rng rng(2);
  ChainAccumulator acc(*cm, Side::H);
  Mat plain = cm->identity(Side::H);
  for (int k = 0; k < 5000; ++k) {
    Mat x = rng.group(*cm, Side::H, 1.0);
    acc.right_multiply(x);
    plain = plain * x;
  }
  CHECK(cm->group_residual(Side::H, acc.value()) < 1e-13);
  CHECK((acc.value() - plain).norm() < 1e-10);
}

TEST_CASE("coordinates round-trip") {
  for (const auto& n : crossed_module_names()) {
    auto cm = make_crossed_module(n);
    Rng rng(4);
    Mat Y = rng.algebra(*cm, Side::H);
    CHECK((cm->from_coords(Side::H, cm->coords(Side::H, Y)) - Y).norm() < 1e-14);
  }
}
