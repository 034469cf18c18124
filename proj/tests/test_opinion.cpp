#include <doctest.h>

#include <cmath>
#include <string>

#include "evident/errors.hpp"
#include "evident/opinion.hpp"
#include "evident/rng.hpp"

using namespace evident;

namespace {

Evidence random_evidence(Rng& rng, std::size_t k) {
  Evidence e;
  e.values.resize(k);
  for (double& v : e.values) {
    // mix of zeros, small and large counts
    const double roll = rng.uniform01();
    v = roll < 0.2 ? 0.0 : rng.uniform(0.0, 50.0);
  }
  return e;
}

}  // namespace

TEST_CASE("opinion_from_evidence worked examples") {
  {
    DirichletOpinion o = opinion_from_evidence({{0.0, 0.0, 0.0, 0.0}});
    for (double b : o.beliefs) CHECK(b == 0.0);
    CHECK(o.uncertainty == 1.0);
  }
  {
    DirichletOpinion o = opinion_from_evidence({{4.0, 0.0, 0.0, 0.0}});
    CHECK(o.beliefs[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(o.beliefs[1] == 0.0);
    CHECK(o.uncertainty == doctest::Approx(0.5).epsilon(1e-12));
  }
  {
    DirichletOpinion o = opinion_from_evidence({{1.0, 1.0, 1.0, 1.0}});
    for (double b : o.beliefs) CHECK(b == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(o.uncertainty == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("evidence_from_opinion worked examples") {
  {
    Evidence e = evidence_from_opinion({{0.0, 0.0, 0.0, 0.0}, 1.0});
    for (double v : e.values) CHECK(v == 0.0);
  }
  {
    // S = K/u = 8; e_k = b_k * S, consistent with the forward map, so
    // the half-belief opinion inverts to four units of evidence.
    Evidence e = evidence_from_opinion({{0.5, 0.0, 0.0, 0.0}, 0.5});
    CHECK(e.values[0] == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(e.values[1] == 0.0);
    CHECK(e.values[2] == 0.0);
    CHECK(e.values[3] == 0.0);
  }
  {
    // fully certain opinions have no finite evidence representation
    CHECK_THROWS_WITH_AS(evidence_from_opinion({{0.9, 0.1}, 0.0}),
                         doctest::Contains("infinite Dirichlet strength"),
                         validation_error);
  }
}

TEST_CASE("expected_probabilities worked examples") {
  {
    ClassProbabilities p = expected_probabilities({{0.0, 0.0, 0.0, 0.0}});
    for (double v : p.probs) CHECK(v == doctest::Approx(0.25).epsilon(1e-12));
  }
  {
    ClassProbabilities p = expected_probabilities({{4.0, 0.0, 0.0, 0.0}});
    CHECK(p.probs[0] == doctest::Approx(0.625).epsilon(1e-12));
    CHECK(p.probs[1] == doctest::Approx(0.125).epsilon(1e-12));
  }
  {
    ClassProbabilities p = expected_probabilities({{99.0, 0.0}});
    CHECK(p.probs[0] == doctest::Approx(100.0 / 101.0).epsilon(1e-12));
    CHECK(p.probs[1] == doctest::Approx(1.0 / 101.0).epsilon(1e-12));
  }
}

TEST_CASE("validation errors name the offending entry") {
  CHECK_THROWS_WITH_AS(opinion_from_evidence({{1.0, -0.5, 2.0}}),
                       doctest::Contains("entry 1"), validation_error);
  CHECK_THROWS_AS(
      opinion_from_evidence({{1.0, std::numeric_limits<double>::quiet_NaN()}}),
      validation_error);
  CHECK_THROWS_AS(opinion_from_evidence({{1.0}}), validation_error);
  // opinions must satisfy the unit-sum invariant
  DirichletOpinion bad{{0.5, 0.5}, 0.5};
  CHECK_THROWS_AS(bad.validate(), validation_error);
  DirichletOpinion negative{{-0.1, 0.6}, 0.5};
  CHECK_THROWS_AS(negative.validate(), validation_error);
}

TEST_CASE("unit-sum invariant over 1000 random evidence vectors") {
  Rng rng(21);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t k = 2 + rng.below(6);
    const Evidence e = random_evidence(rng, k);
    const DirichletOpinion o = opinion_from_evidence(e);
    double sum = o.uncertainty;
    for (double b : o.beliefs) {
      CHECK(b >= 0.0);
      sum += b;
    }
    CHECK(std::abs(sum - 1.0) < 1e-9);
  }
}

TEST_CASE("round trip evidence -> opinion -> evidence is the identity") {
  Rng rng(22);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t k = 2 + rng.below(6);
    const Evidence e = random_evidence(rng, k);
    const Evidence back = evidence_from_opinion(opinion_from_evidence(e));
    for (std::size_t j = 0; j < k; ++j) {
      CHECK(std::abs(back.values[j] - e.values[j]) < 1e-9);
    }
  }
}

TEST_CASE("round trip opinion -> evidence -> opinion is the identity") {
  Rng rng(23);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t k = 2 + rng.below(6);
    const DirichletOpinion o = opinion_from_evidence(random_evidence(rng, k));
    REQUIRE(o.uncertainty > 0.0);
    const DirichletOpinion back = opinion_from_evidence(evidence_from_opinion(o));
    CHECK(std::abs(back.uncertainty - o.uncertainty) < 1e-9);
    for (std::size_t j = 0; j < k; ++j) {
      CHECK(std::abs(back.beliefs[j] - o.beliefs[j]) < 1e-9);
    }
  }
}

TEST_CASE("monotonicity: more evidence, more belief, less uncertainty") {
  Rng rng(24);
  for (int i = 0; i < 200; ++i) {
    const std::size_t k = 2 + rng.below(5);
    Evidence e = random_evidence(rng, k);
    const std::size_t j = rng.below(k);
    const DirichletOpinion before = opinion_from_evidence(e);
    e.values[j] += rng.uniform(0.5, 5.0);
    const DirichletOpinion after = opinion_from_evidence(e);
    CHECK(after.beliefs[j] > before.beliefs[j]);
    CHECK(after.uncertainty < before.uncertainty);
  }
}

TEST_CASE("expected probabilities dominate beliefs and sum to one") {
  Rng rng(25);
  for (int i = 0; i < 500; ++i) {
    const std::size_t k = 2 + rng.below(5);
    const Evidence e = random_evidence(rng, k);
    const DirichletOpinion o = opinion_from_evidence(e);
    const ClassProbabilities p = expected_probabilities(e);
    double sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      CHECK(p.probs[j] >= o.beliefs[j]);
      sum += p.probs[j];
    }
    CHECK(std::abs(sum - 1.0) < 1e-9);
  }
}

TEST_CASE("argmax breaks ties toward the lowest index") {
  CHECK(argmax_class({0.2, 0.5, 0.5}) == 1);
  CHECK(argmax_class({0.5, 0.5}) == 0);
  CHECK(argmax_class({0.1, 0.2, 0.7}) == 2);
  CHECK_THROWS_AS(argmax_class({}), validation_error);
}
