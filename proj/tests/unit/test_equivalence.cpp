#include <doctest.h>

#include <algorithm>
#include <map>
#include <numbers>

#include "generators.hpp"
#include "oracles.hpp"
#include "uqd/models.hpp"

using namespace uqd;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<std::size_t> identity(std::size_t n) {
  std::vector<std::size_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  return p;
}

// V of J_j = sum_k V_jk J'_k, written out from the operator algebra:
// <1| = -s(-s<1| + c<2|) + c(c<1| + s<2|), and likewise for <2|.
CMatrix expected_isometry(double theta, double vartheta, double phi) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  CMatrix v = CMatrix::Zero(5, 3);
  v(0, 0) = -s;
  v(0, 1) = c / std::sqrt(2.0);
  v(1, 0) = c;
  v(1, 1) = s / std::sqrt(2.0);
  v(2, 0) = 0.0;
  v(2, 1) = 1.0 / std::sqrt(2.0);
  v(3, 2) = std::cos(vartheta);
  v(4, 2) = std::polar(std::sin(vartheta), phi);
  return v;
}

bool columns_match_up_to_phase(const CMatrix& got, const CMatrix& want, double tol) {
  if (got.rows() != want.rows() || got.cols() != want.cols()) return false;
  for (Eigen::Index c = 0; c < got.cols(); ++c) {
    const Complex overlap = want.col(c).dot(got.col(c));
    if (std::abs(overlap) < 1e-12) return false;
    const Complex phase = overlap / std::abs(overlap);
    if ((got.col(c) - phase * want.col(c)).norm() > tol) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("levels") {
  CHECK(parse_level("t2") == Level::T2);
  CHECK(to_string(Level::Qme) == "qme");
  CHECK_THROWS_AS(parse_level("t4"), std::invalid_argument);
}

TEST_CASE("same Liouvillian") {
  const auto full = models::qutrit_full();
  CHECK(same_liouvillian(full, models::qutrit_minimal()));
  models::QutritParams doubled;
  doubled.gamma = 2.0;
  CHECK_FALSE(same_liouvillian(full, models::qutrit_full(doubled)));
  CHECK(same_liouvillian(full, shift_hamiltonian(full, 0.37)));
  CHECK_THROWS(same_liouvillian(full, models::single_decay()));
}

TEST_CASE("theorem 1 on the qutrit models") {
  const auto full = models::qutrit_full();
  const auto minimal = models::qutrit_minimal();
  std::vector<std::string> diag;
  const auto v = check_theorem1(full, minimal, {}, &diag);
  CHECK(v.holds);
  CHECK(v.shift_r == 0.0);
  CHECK(v.perm_c == identity(2));
  CHECK(diag.empty());

  for (double vt : {0.2, 0.7, 1.1}) {
    models::QutritParams p;
    p.vartheta = vt;
    p.phi = 0.4;
    const auto w = check_theorem1(full, models::qutrit_full(p));
    CHECK(w.holds);
    CHECK(w.perm_c == identity(2));
  }

  const auto shifted = shift_hamiltonian(minimal, -0.25);
  const auto ws = check_theorem1(full, shifted);
  CHECK(ws.holds);
  CHECK(ws.shift_r == doctest::Approx(-0.25).epsilon(1e-12));

  models::QutritParams doubled;
  doubled.gamma = 2.0;
  diag.clear();
  CHECK_FALSE(check_theorem1(full, models::qutrit_full(doubled), {}, &diag).holds);
  CHECK(std::find(diag.begin(), diag.end(), "different QME") != diag.end());
}

TEST_CASE("theorem 1 on the two-reset models") {
  models::TwoResetParams p;
  p.theta = 0.0;
  auto v = check_theorem1(models::two_reset(p), models::two_reset_tilde(p));
  CHECK(v.holds);
  CHECK(v.perm_c == identity(2));

  p.theta = kPi / 2;
  v = check_theorem1(models::two_reset(p), models::two_reset_tilde(p));
  CHECK(v.holds);
  CHECK(v.perm_c == std::vector<std::size_t>{1, 0});

  p.theta = kPi / 4;
  CHECK(same_liouvillian(models::two_reset(p), models::two_reset_tilde(p)));
  CHECK_FALSE(check_theorem1(models::two_reset(p), models::two_reset_tilde(p)).holds);
}

TEST_CASE("theorem 1 symmetry") {
  std::mt19937_64 rng(404);
  int holding = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const auto pair = testing::random_pair(rng);
    const auto ab = check_theorem1(pair.a, pair.b);
    const auto ba = check_theorem1(pair.b, pair.a);
    CHECK(ab.holds == ba.holds);
    if (ab.holds && ba.holds) {
      ++holding;
      CHECK(ab.shift_r == doctest::Approx(-ba.shift_r).epsilon(1e-9));
      for (std::size_t alpha = 0; alpha < ab.perm_c.size(); ++alpha) {
        CHECK(ba.perm_c[ab.perm_c[alpha]] == alpha);
      }
    }
  }
  CHECK(holding > 5);
}

TEST_CASE("theorem 2 special cases") {
  // Away from pi/3, where a 30 degree offset would zero J~_4.
  const double vt = 0.4;
  const double phi = 0.3;
  const double phi_t = -1.1;
  models::QutritParams pa;
  pa.vartheta = vt;
  pa.phi = phi;
  const auto a = models::qutrit_full(pa);

  struct Case {
    double offset;
    std::vector<std::size_t> perm;
    Complex c4;
    Complex c5;
  };
  // Coefficients of J~_4 and J~_5 against their partners, from the trigonometric shifts.
  const std::vector<Case> cases{
      {0.0, {0, 1, 2, 3, 4}, 1.0, std::polar(1.0, phi_t - phi)},
      {kPi / 2, {0, 1, 2, 4, 3}, -std::polar(1.0, -phi), std::polar(1.0, phi_t)},
      {kPi, {0, 1, 2, 3, 4}, -1.0, -std::polar(1.0, phi_t - phi)},
      {3 * kPi / 2, {0, 1, 2, 4, 3}, std::polar(1.0, -phi), -std::polar(1.0, phi_t)},
  };
  for (const auto& c : cases) {
    models::QutritParams pb = pa;
    pb.vartheta = vt + c.offset;
    pb.phi = phi_t;
    const auto v = check_theorem2(a, models::qutrit_full(pb));
    REQUIRE(v.holds);
    CHECK_FALSE(v.multiple);
    REQUIRE(v.matchings.size() == 1);
    CHECK(v.matchings[0].perm == c.perm);
    CHECK(std::abs(std::polar(1.0, v.matchings[0].phases[3]) - c.c4) < 1e-10);
    CHECK(std::abs(std::polar(1.0, v.matchings[0].phases[4]) - c.c5) < 1e-10);
    for (double ph : v.matchings[0].phases) {
      CHECK(ph > -kPi);
      CHECK(ph <= kPi);
    }
  }

  models::QutritParams generic = pa;
  generic.vartheta = vt + kPi / 6;
  CHECK_FALSE(check_theorem2(a, models::qutrit_full(generic)).holds);
  CHECK(check_theorem1(a, models::qutrit_full(generic)).holds);

  std::vector<std::string> diag;
  CHECK_FALSE(check_theorem2(a, models::qutrit_minimal(pa), {}, false, 10000, &diag).holds);
  CHECK(std::find(diag.begin(), diag.end(), "jump counts differ (5 vs 3)") != diag.end());
}

TEST_CASE("theorem 2 multiplicity") {
  models::QutritParams p;
  p.theta = 0.0;
  const auto rep = models::qutrit_full(p);
  const auto v = check_theorem2(rep, rep);
  CHECK(v.holds);
  CHECK(v.multiple);
  CHECK(v.matchings.size() == 1);

  const auto all = check_theorem2(rep, rep, {}, true);
  REQUIRE(all.matchings.size() == 2);
  CHECK(all.matchings[0].perm == std::vector<std::size_t>{0, 1, 2, 3, 4});
  CHECK(all.matchings[1].perm == std::vector<std::size_t>{2, 1, 0, 3, 4});
  CHECK_FALSE(all.truncated);

  // Four identical jumps: 24 matchings, capped.
  Representation dup;
  dup.hamiltonian = CMatrix::Zero(2, 2);
  dup.jumps.assign(4, models::single_decay().jumps[0]);
  const auto capped = check_theorem2(dup, dup, {}, true, 5);
  CHECK(capped.matchings.size() == 5);
  CHECK(capped.truncated);
}

TEST_CASE("theorem 3") {
  const auto full = models::qutrit_full();
  const auto minimal = models::qutrit_minimal();
  CHECK(check_theorem3(full, minimal, {}, identity(2)).holds);
  CHECK_FALSE(check_theorem3(full, minimal, {}, std::vector<std::size_t>{1, 0}).holds);
  CHECK_THROWS_AS(check_theorem3(full, minimal, {}, std::vector<std::size_t>{0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(check_theorem3(full, minimal, {}, std::vector<std::size_t>{0, 0}),
                  std::invalid_argument);

  models::TwoResetParams p;
  p.theta = kPi / 2;
  const auto a = models::two_reset(p);
  const auto b = models::two_reset_tilde(p);
  CHECK(check_theorem3(a, b, {}, std::vector<std::size_t>{1, 0}).holds);
  CHECK_FALSE(check_theorem3(a, b, {}, identity(2)).holds);
  CHECK(check_theorem3(a, b).perm_c == std::vector<std::size_t>{1, 0});
}

TEST_CASE("equivalence report") {
  const auto report = check_equivalence(models::qutrit_full(), models::qutrit_minimal());
  CHECK(report.same_qme);
  CHECK(report.holds(Level::Qme));
  CHECK(report.holds(Level::T1));
  CHECK_FALSE(report.holds(Level::T2));
  CHECK(report.holds(Level::T3));
  const auto j = to_json(report);
  CHECK(j["theorem1"]["perm_C"] == nlohmann::json::array({1, 2}));
  CHECK(j["theorem2"]["holds"] == false);
  CHECK(j["diagnostics"].size() >= 1);

  CheckOptions forced;
  forced.perm_c = std::vector<std::size_t>{1, 0};
  const auto swapped = check_equivalence(models::qutrit_full(), models::qutrit_minimal(), {}, forced);
  CHECK(swapped.holds(Level::T1));
  CHECK_FALSE(swapped.holds(Level::T3));
}

TEST_CASE("gauge application and extraction") {
  const double theta = kPi / 6;
  const double vartheta = kPi / 3;
  const auto minimal = models::qutrit_minimal();
  const auto full = models::qutrit_full();
  const CMatrix v47 = expected_isometry(theta, vartheta, 0.0);

  SUBCASE("the 5x3 isometry rebuilds the full model") {
    BlockIsometry iso;
    iso.matrix = v47;
    iso.row_blocks = {{0, 1, 2}, {3, 4}};
    iso.block_map = {0, 1};
    const auto out = apply_gauge(minimal, iso, 0.0);
    REQUIRE(out.jump_count() == 5);
    for (std::size_t k = 0; k < 5; ++k) CHECK(oracle::max_abs(out.jumps[k] - full.jumps[k]) < 1e-12);
  }

  SUBCASE("identity gauge") {
    BlockIsometry iso;
    iso.matrix = CMatrix::Identity(3, 3);
    iso.row_blocks = {{0, 1}, {2}};
    iso.block_map = {0, 1};
    const auto out = apply_gauge(minimal, iso, 0.0);
    for (std::size_t k = 0; k < 3; ++k) CHECK(oracle::max_abs(out.jumps[k] - minimal.jumps[k]) == 0.0);
  }

  SUBCASE("extraction recovers the isometry") {
    const auto iso = extract_isometry(minimal, full);
    CHECK(columns_match_up_to_phase(iso.matrix, v47, 1e-10));
    CHECK((iso.matrix.adjoint() * iso.matrix - CMatrix::Identity(3, 3)).norm() < 1e-10);
    const auto self = extract_isometry(minimal, minimal);
    CHECK(columns_match_up_to_phase(self.matrix, CMatrix::Identity(3, 3), 1e-10));
  }

  SUBCASE("errors") {
    BlockIsometry bad;
    bad.matrix = 2.0 * v47;
    bad.row_blocks = {{0, 1, 2}, {3, 4}};
    bad.block_map = {0, 1};
    CHECK_THROWS_AS(apply_gauge(minimal, bad, 0.0), NumericError);

    BlockIsometry leaky;
    leaky.matrix = v47;
    // Leak column 0 into the dephasing rows, orthogonally to column 2.
    leaky.matrix(3, 0) = -0.1 * std::conj(v47(4, 2));
    leaky.matrix(4, 0) = 0.1 * std::conj(v47(3, 2));
    leaky.matrix.col(0).normalize();
    leaky.row_blocks = {{0, 1, 2}, {3, 4}};
    leaky.block_map = {0, 1};
    CHECK_THROWS_AS(apply_gauge(minimal, leaky, 0.0), std::invalid_argument);

    CHECK_THROWS_AS(apply_gauge(full, bad, 0.0), std::invalid_argument);

    models::QutritParams doubled;
    doubled.gamma = 2.0;
    CHECK_THROWS_WITH_AS(extract_isometry(minimal, models::qutrit_full(doubled)),
                         "representations not trajectory-equivalent", EquivalenceError);
  }

  SUBCASE("json round trip") {
    BlockIsometry iso;
    iso.matrix = v47;
    iso.row_blocks = {{0, 1, 2}, {3, 4}};
    iso.block_map = {0, 1};
    const auto back = block_isometry_from_json(to_json(iso));
    CHECK(back.matrix == iso.matrix);
    CHECK(back.row_blocks == iso.row_blocks);
    CHECK(back.block_map == iso.block_map);
  }
}

TEST_CASE("random gauge round trips") {
  std::mt19937_64 rng(505);
  for (int trial = 0; trial < 50; ++trial) {
    const auto rep = minimize_representation(testing::random_representation(2 + trial % 3, rng));
    REQUIRE(is_minimal(rep));
    const auto iso = testing::random_block_isometry(rep, testing::random_out_sizes(rep, rng), rng);
    const double r = 0.1 * trial - 2.0;
    const auto gauged = apply_gauge(rep, iso, r);
    const auto v = check_theorem1(rep, gauged);
    CHECK(v.holds);
    CHECK(v.shift_r == doctest::Approx(r).epsilon(1e-9));

    const auto back = extract_isometry(rep, gauged);
    CHECK((back.matrix - iso.matrix).norm() < 1e-10);
    const auto again = apply_gauge(rep, back, r);
    for (std::size_t k = 0; k < gauged.jump_count(); ++k) {
      CHECK(oracle::max_abs(again.jumps[k] - gauged.jumps[k]) < 1e-10);
    }
  }
}

TEST_CASE("mixing across blocks keeps the QME but breaks theorem 1") {
  std::mt19937_64 rng(606);
  int tested = 0;
  while (tested < 50) {
    const auto rep = minimize_representation(testing::random_representation(3, rng));
    const auto part = partition(rep);
    if (part.block_count() < 2) continue;
    const std::size_t i = part.blocks[0].indices.front();
    const std::size_t j = part.blocks[1].indices.front();
    const auto mixed = testing::mix_jumps(rep, i, j, testing::random_unitary2(rng));
    CHECK(same_liouvillian(rep, mixed));
    CHECK_FALSE(check_theorem1(rep, mixed).holds);
    ++tested;
  }
}

TEST_CASE("implication chain") {
  std::mt19937_64 rng(707);
  std::map<std::string, int> kinds;
  for (int trial = 0; trial < 200; ++trial) {
    const auto pair = testing::random_pair(rng);
    ++kinds[pair.kind];
    const auto report = check_equivalence(pair.a, pair.b);
    if (report.theorem2.holds) CHECK(report.theorem1.holds);
    if (report.theorem1.holds) CHECK(report.same_qme);
    CHECK(report.theorem3.holds == report.theorem1.holds);
    if (pair.kind == "labelled") CHECK(report.theorem2.holds);
    if (pair.kind == "block-gauge") CHECK(report.theorem1.holds);
    if (pair.kind == "qme-gauge" || pair.kind == "cross-mix") CHECK(report.same_qme);
  }
  CHECK(kinds.size() >= 5);
}
