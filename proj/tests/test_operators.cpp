#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wce/operators.hpp"

using namespace wce;

namespace {

Weights make_weights(std::initializer_list<double> vals) {
  Weights w(static_cast<int>(vals.size()));
  int i = 0;
  for (double v : vals) w[i++] = v;
  return w;
}

Fn make_fn(std::initializer_list<Complex> vals) {
  Fn f(static_cast<int>(vals.size()));
  int i = 0;
  for (Complex v : vals) f[i++] = v;
  return f;
}

Fn real_fn(std::initializer_list<double> vals) {
  Fn f(static_cast<int>(vals.size()));
  int i = 0;
  for (double v : vals) f[i++] = Complex(v, 0.0);
  return f;
}

// Plain-loop averaging, kept deliberately independent of the matrix code:
// every point receives the mass-weighted mean of its atom.
Fn averaged_by_hand(const Fn& f, const Partition& a, const MeasureSpace& sp) {
  Fn out(f.size());
  for (const auto& atom : a.atoms()) {
    Complex sum = 0.0;
    double mass = 0.0;
    for (int i : atom) {
      sum += f[i] * sp.mu()[i];
      mass += sp.mu()[i];
    }
    for (int i : atom) out[i] = sum / mass;
  }
  return out;
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

TEST_CASE("conditional expectation averages over atoms") {
  MeasureSpace uniform(make_weights({0.25, 0.25, 0.25, 0.25}));
  Partition a = Partition::from_atoms({{0, 1}, {2, 3}}, 4);
  Mat e = cond_expectation(a, uniform);

  Fn f = real_fn({1, 2, 3, 4});
  Fn ef = e * f;
  CHECK(ef[0].real() == doctest::Approx(1.5));
  CHECK(ef[1].real() == doctest::Approx(1.5));
  CHECK(ef[2].real() == doctest::Approx(3.5));
  CHECK(ef[3].real() == doctest::Approx(3.5));

  MeasureSpace skew(make_weights({1, 2, 1}));
  Partition b = Partition::from_atoms({{0, 1}, {2}}, 3);
  Fn g = real_fn({3, 0, 7});
  Fn eg = cond_expectation(b, skew) * g;
  CHECK(eg[0].real() == doctest::Approx(1.0));  // (1*3 + 2*0) / 3
  CHECK(eg[1].real() == doctest::Approx(1.0));
  CHECK(eg[2].real() == doctest::Approx(7.0));

  // column-by-column comparison against the hand-rolled average
  MeasureSpace sp(make_weights({0.3, 1.7, 0.9, 0.4, 1.1}));
  Partition c = Partition::from_atoms({{0, 3}, {1, 4}, {2}}, 5);
  Mat ec = cond_expectation(c, sp);
  for (int j = 0; j < 5; ++j) {
    Fn basis = Fn::Zero(5);
    basis[j] = 1.0;
    Fn want = averaged_by_hand(basis, c, sp);
    CHECK((Fn(ec.col(j)) - want).cwiseAbs().maxCoeff() ==
          doctest::Approx(0.0));
  }
}

TEST_CASE("conditional expectation is a weighted orthogonal projection") {
  MeasureSpace sp(make_weights({0.5, 1.25, 2.0, 0.75}));
  Partition a = Partition::from_atoms({{0, 2}, {1}, {3}}, 4);
  Mat e = cond_expectation(a, sp);

  CHECK(op_norm(compose(e, e) - e, sp) == doctest::Approx(0.0));
  CHECK(op_norm(adjoint(e, sp) - e, sp) == doctest::Approx(0.0));
  CHECK(op_norm(e, sp) == doctest::Approx(1.0));

  // averaging property <E f, g> = <f, g> for atom-constant g
  Fn f = make_fn({{0.3, -1.0}, {2.0, 0.4}, {-0.7, 0.0}, {1.0, 1.0}});
  Fn g = make_fn({{2.0, 1.0}, {0.0, 0.0}, {2.0, 1.0}, {-3.0, 0.5}});
  Complex lhs = inner_product(Fn(e * f), g, sp);
  Complex rhs = inner_product(f, g, sp);
  CHECK(std::abs(lhs - rhs) == doctest::Approx(0.0));
}

TEST_CASE("multiplication operator") {
  Fn u = make_fn({{1.0, 1.0}, {0.0, -2.0}});
  Mat m = multiplication(u);
  Fn f = make_fn({{2.0, 0.0}, {3.0, 1.0}});
  Fn mf = m * f;
  CHECK(mf[0] == Complex(2.0, 2.0));
  CHECK(mf[1] == Complex(2.0, -6.0));
  CHECK(m(0, 1) == Complex(0.0, 0.0));

  CHECK(code_of<InputError>([] {
          multiplication(make_fn({{std::nan(""), 0.0}}));
        }) == "nonfinite_value");
}

TEST_CASE("weighted adjoint") {
  MeasureSpace sp(make_weights({1.0, 2.0}));
  Mat a = Mat::Zero(2, 2);
  a(0, 1) = Complex(1.0, 0.0);

  Mat astar = adjoint(a, sp);
  CHECK(astar(1, 0).real() == doctest::Approx(0.5));  // mu_0 / mu_1
  CHECK(astar(0, 1) == Complex(0.0, 0.0));

  // defining property on fixed vectors
  Fn f = make_fn({{1.0, 2.0}, {-0.5, 0.3}});
  Fn g = make_fn({{0.7, -1.0}, {2.0, 2.0}});
  Complex lhs = inner_product(Fn(a * f), g, sp);
  Complex rhs = inner_product(f, Fn(astar * g), sp);
  CHECK(std::abs(lhs - rhs) == doctest::Approx(0.0));

  CHECK(op_norm(adjoint(astar, sp) - a, sp) == doctest::Approx(0.0));
}

TEST_CASE("operator norm in the weighted metric") {
  MeasureSpace sp(make_weights({1.0, 2.0}));
  Mat d = Mat::Zero(2, 2);
  d(0, 0) = Complex(3.0, 0.0);
  d(1, 1) = Complex(0.0, -4.0);
  CHECK(op_norm(d, sp) == doctest::Approx(4.0));

  Mat shift = Mat::Zero(2, 2);
  shift(0, 1) = Complex(1.0, 0.0);
  // conjugating by sqrt(mu) scales the entry by sqrt(mu_0 / mu_1)
  CHECK(op_norm(shift, sp) == doctest::Approx(1.0 / std::sqrt(2.0)));

  CHECK(op_norm(Mat::Zero(2, 2), sp) == doctest::Approx(0.0));
}

TEST_CASE("composition and difference guard shapes") {
  CHECK(code_of<InputError>([] {
          compose(Mat::Zero(2, 3), Mat::Zero(2, 3));
        }) == "dimension_mismatch");
  CHECK(code_of<InputError>([] {
          sub(Mat::Zero(2, 2), Mat::Zero(3, 3));
        }) == "dimension_mismatch");
}

TEST_CASE("the averaged multiplication operator") {
  MeasureSpace sp(make_weights({0.25, 0.25, 0.25, 0.25}));
  Partition a = Partition::from_atoms({{0, 1}, {2, 3}}, 4);
  Fn u = real_fn({1, 2, 3, 4});
  WceOperator t = wce::wce(a, u, sp);

  Mat want = Mat::Zero(4, 4);
  want(0, 0) = 0.5;
  want(0, 1) = 1.0;
  want(1, 0) = 0.5;
  want(1, 1) = 1.0;
  want(2, 2) = 1.5;
  want(2, 3) = 2.0;
  want(3, 2) = 1.5;
  want(3, 3) = 2.0;
  CHECK((t.realization - want).cwiseAbs().maxCoeff() == doctest::Approx(0.0));

  Fn tf = t.realization * Fn::Ones(4);
  CHECK(tf[0].real() == doctest::Approx(1.5));
  CHECK(tf[3].real() == doctest::Approx(3.5));

  CHECK(code_of<InputError>([&] { wce::wce(a, real_fn({1, 2}), sp); }) ==
        "length_mismatch");
}

TEST_CASE("closed adjoint forms") {
  MeasureSpace sp(make_weights({0.4, 1.2, 0.7, 0.9}));
  Partition a = Partition::from_atoms({{0, 2}, {1, 3}}, 4);
  Fn u = make_fn({{1.0, 0.5}, {-2.0, 1.0}, {0.0, 0.0}, {3.0, -1.0}});
  WceOperator t = wce::wce(a, u, sp);

  Mat e = cond_expectation(a, sp);
  Mat m_conj = multiplication(u.conjugate());

  CHECK(op_norm(adjoint(t.realization, sp) - compose(m_conj, e), sp) ==
        doctest::Approx(0.0).epsilon(1e-12));

  WceIdentityReport rep = wce_identities_check(t, 1e-12);
  CHECK(rep.passed);
  CHECK(rep.adjoint_residual <= rep.threshold);
  CHECK(rep.gram_residual <= rep.threshold);
  CHECK(rep.cogram_residual <= rep.threshold);

  double tn = op_norm(t.realization, sp);
  CHECK(rep.threshold == doctest::Approx(1e-12 * (1.0 + tn * tn)));
}

TEST_CASE("T T* multiplies by the averaged squared weight") {
  MeasureSpace sp(make_weights({0.25, 0.25, 0.25, 0.25}));
  Partition a = Partition::from_atoms({{0, 1}, {2, 3}}, 4);
  WceOperator t = wce::wce(a, real_fn({1, 2, 3, 4}), sp);

  Mat e = cond_expectation(a, sp);
  Fn w = e * real_fn({1, 4, 9, 16});  // |u|^2 averaged
  CHECK(w[0].real() == doctest::Approx(2.5));
  CHECK(w[2].real() == doctest::Approx(12.5));

  Mat cogram = compose(t.realization, adjoint(t.realization, sp));
  CHECK(op_norm(cogram - compose(e, multiplication(w)), sp) ==
        doctest::Approx(0.0).epsilon(1e-12));
}
