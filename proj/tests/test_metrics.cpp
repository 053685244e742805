#include <doctest.h>

#include "quasar/metrics.hpp"
#include "support.hpp"

using namespace quasar;

namespace {

EvidenceList ranked(const std::vector<bool>& hits) {
  EvidenceList out;
  for (std::size_t i = 0; i < hits.size(); ++i) {
    out.push_back(testing::piece("p" + std::to_string(i), hits[i] ? "the answer is gold" : "noise"));
  }
  return out;
}

}  // namespace

TEST_CASE("p_at_1 is alias aware") {
  Catalog c = testing::sports_catalog();
  CHECK(p_at_1("The Dallas Mavericks", {"Dallas Mavericks"}) == 1);
  CHECK(p_at_1("Mavs", {"Dallas Mavericks"}, &c) == 1);
  CHECK(p_at_1("Mavs", {"Dallas Mavericks"}) == 0);
  CHECK(p_at_1("unknown", {"unknown"}) == 0);
  CHECK(p_at_1("Houston", {"Dallas Mavericks"}, &c) == 0);
}

TEST_CASE("answer presence and reciprocal rank") {
  auto list = ranked({false, false, true, false});
  CHECK_FALSE(answer_presence(list, {"gold"}, 2));
  CHECK(answer_presence(list, {"gold"}, 3));
  CHECK(answer_presence(list, {"gold"}, 100));
  CHECK(mrr_at_k(list, {"gold"}, 2) == 0.0);
  CHECK(mrr_at_k(list, {"gold"}, 3) == doctest::Approx(1.0 / 3.0));
  CHECK_FALSE(answer_presence(list, {"old"}, 4));
  CHECK_FALSE(answer_presence({}, {"gold"}, 4));
}

TEST_CASE("presence through entity mentions") {
  Catalog c = testing::sports_catalog();
  EvidenceList list{testing::piece("a", "no names here", {"Q2"})};
  CHECK(answer_presence(list, {"Dallas Mavericks"}, 1, &c));
  CHECK_FALSE(answer_presence(list, {"Dallas Mavericks"}, 1));
}

TEST_CASE("metrics are non-decreasing in k") {
  testing::Gen gen(8);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<bool> hits;
    std::size_t n = gen.below(40);
    for (std::size_t i = 0; i < n; ++i) hits.push_back(gen.chance(0.1));
    auto list = ranked(hits);
    bool prev_ap = false;
    double prev_rr = 0.0;
    for (std::size_t k = 1; k <= n + 2; ++k) {
      bool ap = answer_presence(list, {"gold"}, k);
      double rr = mrr_at_k(list, {"gold"}, k);
      CHECK((ap || !prev_ap));
      CHECK(rr >= prev_rr);
      prev_ap = ap;
      prev_rr = rr;
    }
  }
}

TEST_CASE("refrain metrics on a hand-built fixture") {
  // 3 of 10 refrained, 2 of those with the answer absent; 7 answered, 4 correct.
  std::vector<RefrainRow> rows{
      {true, false, false}, {true, false, false}, {true, true, false},  {false, true, true},
      {false, true, true},  {false, true, true},  {false, true, true},  {false, true, false},
      {false, false, false}, {false, true, false},
  };
  auto m = refrain_metrics(rows);
  CHECK(m.refrain_rate == 0.3);
  REQUIRE(m.refrain_accuracy.has_value());
  CHECK(*m.refrain_accuracy == 2.0 / 3.0);
  REQUIRE(m.p_at_1_answered.has_value());
  CHECK(*m.p_at_1_answered == 4.0 / 7.0);
}

TEST_CASE("refrain metrics without refusals or answers") {
  std::vector<RefrainRow> none{{false, true, true}};
  CHECK_FALSE(refrain_metrics(none).refrain_accuracy.has_value());
  std::vector<RefrainRow> all{{true, false, false}};
  auto m = refrain_metrics(all);
  CHECK_FALSE(m.p_at_1_answered.has_value());
  CHECK(m.refrain_rate == 1.0);
  CHECK(refrain_metrics({}).refrain_rate == 0.0);
}
