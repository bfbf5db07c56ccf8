#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wce/vn_algebra.hpp"

using namespace wce;

namespace {

MeasureSpace uniform_space(int n) {
  Weights w(n);
  w.setConstant(1.0 / n);
  return MeasureSpace(w);
}

Fn real_fn(std::initializer_list<double> vals) {
  Fn f(static_cast<int>(vals.size()));
  int i = 0;
  for (double v : vals) f[i++] = Complex(v, 0.0);
  return f;
}

template <typename E, typename F>
std::string code_of(F&& body) {
  try {
    body();
  } catch (const E& e) {
    return e.code();
  }
  return "<no exception>";
}

}  // namespace

TEST_CASE("algebra elements are averaged multiplications") {
  WceAlgebra alg(Partition::from_atoms({{0, 1}, {2, 3}}, 4),
                 uniform_space(4));

  CHECK((alg.unit() - cond_expectation(alg.algebra(), alg.space()))
            .cwiseAbs()
            .maxCoeff() == doctest::Approx(0.0));

  Mat m = alg.element(real_fn({2, 2, 3, 3}), 1e-9);
  Mat want = Mat::Zero(4, 4);
  want(0, 0) = want(0, 1) = want(1, 0) = want(1, 1) = 1.0;
  want(2, 2) = want(2, 3) = want(3, 2) = want(3, 3) = 1.5;
  CHECK((m - want).cwiseAbs().maxCoeff() == doctest::Approx(0.0));

  CHECK(code_of<PreconditionError>([&] {
          alg.element(real_fn({1, 2, 3, 4}), 1e-9);
        }) == "not_measurable");
  CHECK(code_of<InputError>([&] { alg.element(real_fn({1, 1}), 1e-9); }) ==
        "length_mismatch");
  CHECK(code_of<InputError>([] {
          WceAlgebra bad(Partition::trivial(3), uniform_space(4));
        }) == "length_mismatch");
}

TEST_CASE("membership recovers symbols and rejects outsiders") {
  WceAlgebra alg(Partition::from_atoms({{0, 1}, {2, 3}}, 4),
                 uniform_space(4));

  auto unit_symbol = alg.membership(alg.unit(), 1e-9);
  REQUIRE(unit_symbol.has_value());
  CHECK(((*unit_symbol) - Fn(Fn::Ones(4))).cwiseAbs().maxCoeff() ==
        doctest::Approx(0.0));

  Fn g = real_fn({2, 2, 3, 3});
  auto round_trip = alg.membership(alg.element(g, 1e-9), 1e-9);
  REQUIRE(round_trip.has_value());
  CHECK(((*round_trip) - g).cwiseAbs().maxCoeff() == doctest::Approx(0.0));

  // plain multiplication by a non-measurable symbol
  CHECK(!alg.membership(multiplication(real_fn({1, 2, 3, 4})), 1e-9)
             .has_value());

  // measurable symbol but no averaging in front: op(1) looks right, the
  // reconstruction residual does not
  CHECK(!alg.membership(multiplication(g), 1e-9).has_value());

  CHECK(code_of<InputError>([&] { alg.membership(Mat::Zero(2, 2), 1e-9); }) ==
        "dimension_mismatch");
}

TEST_CASE("algebra axioms hold on a skewed space") {
  Weights w(5);
  w << 0.3, 1.7, 0.9, 0.4, 1.1;
  WceAlgebra alg(Partition::from_atoms({{0, 3}, {1, 4}, {2}}, 5),
                 MeasureSpace(w));

  auto rep = alg.verify_axioms(25, 7, 1e-12);
  CHECK(rep.passed);
  CHECK(rep.atom_count == 3);
  CHECK(rep.numeric_dimension == 3);
  CHECK(rep.product_residual <= 1e-12);
  CHECK(rep.adjoint_residual <= 1e-12);
  CHECK(rep.commutator_residual <= 1e-12);
  CHECK(rep.unit_residual <= 1e-12);
  CHECK(rep.linearity_residual <= 1e-12);
}

TEST_CASE("idempotents are exactly the indicator elements") {
  WceAlgebra alg(Partition::from_atoms({{0, 1}, {2, 3}}, 4),
                 uniform_space(4));

  auto rep = alg.classify_idempotents(30, 11, 1e-9);
  CHECK(rep.passed);
  CHECK(rep.indicator_count == 4);  // 2^2 unions of atoms
  CHECK(rep.indicators_idempotent);
  CHECK(rep.indicators_distinct);
  CHECK(rep.non_indicators_rejected);
  CHECK(rep.symbols_recoverable);

  WceAlgebra single(Partition::trivial(3), uniform_space(3));
  auto tiny = single.classify_idempotents(5, 11, 1e-9);
  CHECK(tiny.indicator_count == 2);  // zero and the unit
  CHECK(tiny.passed);

  CHECK(code_of<CapError>([] {
          Weights w(21);
          w.setOnes();
          WceAlgebra big(Partition::discrete(21), MeasureSpace(w));
          big.classify_idempotents(1, 1, 1e-9);
        }) == "cap_exceeded_atoms");
}
