#include <gtest/gtest.h>

#include "kerbundle/report.hpp"

using namespace kerbundle;

namespace {
PrimeField F;
}

TEST(PointConfig, Parse) {
  auto c = parse_point_config(json::parse(R"({"n": 2, "p": 101, "points": [[1,0,0],[0,1,0]], "extra_points": [[1,1,1]]})"));
  EXPECT_EQ(c.n, 2);
  EXPECT_EQ(*c.p, 101u);
  EXPECT_EQ(c.points.size(), 2u);
  EXPECT_EQ(c.extra_points.size(), 1u);
  EXPECT_THROW(parse_point_config(json::parse(R"({"points": []})")), UsageError);
  EXPECT_THROW(parse_point_config(json::parse(R"({"n": 2, "points": [[1,0]]})")), UsageError);
  auto pts = to_points(F, {{2, 4, 6}});
  EXPECT_EQ(pts[0].coords, (std::vector<Scalar>{1, 2, 3}));
}

TEST(Report, TableJsonAndCsv) {
  BlowupVariety x(F, 2, sample_points(F, 2, 8, 3).points);
  auto t = cohomology_divisor(x, DivisorClass{1, std::vector<int>(8, 1)});
  auto j = to_json(t);
  EXPECT_EQ(j["h"], json::array({0, 5, 0}));
  EXPECT_TRUE(j["exact"].get<bool>());
  EXPECT_FALSE(j["cite"].empty());
  auto csv = cohomology_csv({{0, t}}, 2);
  EXPECT_EQ(csv, "t,h0,h1,h2\n0,0,5,0\n");
  CohomologyTable flagged;
  flagged.h.assign(3, CohomologyEntry::unknown("unsupported-shape"));
  EXPECT_EQ(to_json(flagged)["h"][0]["reason"], "unsupported-shape");
  EXPECT_EQ(cohomology_csv({{1, flagged}}, 2), "t,h0,h1,h2\n1,0..inf,0..inf,0..inf\n");
}

TEST(Report, VerificationIsDeterministicAndCited) {
  BlowupVariety x(F, 2, sample_points(F, 2, 6, 3).points);
  auto plan = RankPlan::make(2, 2, 0);
  auto a = verification_report(construct(x, plan, 11), 11, -2, 2);
  auto b = verification_report(construct(x, plan, 11), 11, -2, 2);
  EXPECT_EQ(a.report.dump(), b.report.dump());
  EXPECT_TRUE(a.pass);
  EXPECT_FALSE(a.indeterminate);
  for (auto& [k, v] : a.report["verdicts"].items()) {
    EXPECT_TRUE(v.contains("cite")) << k;
    EXPECT_FALSE(v["cite"].get<std::string>().empty()) << k;
  }
  EXPECT_EQ(a.report["chern"]["c2"], 5);
  EXPECT_EQ(a.report["family_dimension"]["defining"], 5);
  EXPECT_EQ(a.report["cohomology"]["1"]["h"], json::array({6, 0, 0}));
  EXPECT_EQ(a.report["seed"], 11);
}

TEST(Report, Mrc) {
  BlowupVariety x(F, 2, sample_points(F, 2, 6, 3).points);
  auto z = sample_point_scheme(x, 5, 2);
  auto j = to_json(check_mrc_degrees(z, 2));
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_EQ(j["verdicts"]["h0_I(r)"]["actual"], 5);
}
