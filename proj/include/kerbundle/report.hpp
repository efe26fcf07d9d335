#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "kerbundle/blowup.hpp"
#include "kerbundle/kerbundle.hpp"
#include "kerbundle/serrecorr.hpp"

namespace kerbundle {

using nlohmann::json;

/// { "n": int, "p": int, "points": [[...]], "extra_points": [[...]] }; p and extra_points optional.
struct PointConfig {
  int n = 2;
  std::optional<std::uint32_t> p;
  std::vector<std::vector<std::int64_t>> points;
  std::vector<std::vector<std::int64_t>> extra_points;
};

inline PointConfig parse_point_config(const json& j) {
  PointConfig c;
  try {
    c.n = j.at("n").get<int>();
    if (j.contains("p")) c.p = j.at("p").get<std::uint32_t>();
    c.points = j.value("points", std::vector<std::vector<std::int64_t>>{});
    c.extra_points = j.value("extra_points", std::vector<std::vector<std::int64_t>>{});
  } catch (const json::exception& e) {
    throw UsageError(std::string("bad point configuration: ") + e.what());
  }
  auto check = [&](const std::vector<std::vector<std::int64_t>>& pts, const char* key) {
    for (const auto& q : pts)
      if (static_cast<int>(q.size()) != c.n + 1)
        throw UsageError(std::string(key) + ": every point needs n+1 coordinates");
  };
  check(c.points, "points");
  check(c.extra_points, "extra_points");
  return c;
}

inline PointConfig load_point_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
  return parse_point_config(j);
}

inline std::vector<ProjectivePoint> to_points(const PrimeField& f, const std::vector<std::vector<std::int64_t>>& raw) {
  std::vector<ProjectivePoint> out;
  for (const auto& q : raw) out.push_back(ProjectivePoint::make(f, q));
  return out;
}

inline json to_json(const CohomologyEntry& e) {
  if (e.is_exact()) return e.lo;
  json j{{"lo", e.lo}, {"reason", e.reason}};
  j["hi"] = e.hi ? json(*e.hi) : json(nullptr);
  return j;
}

inline json to_json(const CohomologyTable& t) {
  json h = json::array();
  for (const auto& e : t.h) h.push_back(to_json(e));
  return json{{"h", h}, {"exact", t.all_exact()}, {"cite", t.citations}};
}

inline json to_json(const RankPlan& p) {
  return json{{"n", p.n}, {"r", p.r}, {"c", p.c}, {"a", p.a}, {"b", p.b}, {"rank", p.bundle_rank()}};
}

inline json to_json(const SurjectivityCertificate& c) {
  return json{{"h0_rank", c.h0_rank},
              {"h0_target", c.h0_target},
              {"h0_surjective", c.h0_surjective},
              {"pointwise_trials", c.trials},
              {"pointwise_failures", c.pointwise_failures},
              {"per_trial_false_alarm", c.per_trial_false_alarm},
              {"seed", c.seed},
              {"pass", c.pass()}};
}

inline json to_json(const BlowupVariety& x) {
  json pts = json::array();
  for (const auto& q : x.points()) pts.push_back(q.coords);
  return json{{"n", x.n()}, {"s", x.s()}, {"p", x.field().p()}, {"degree", x.degree()}, {"points", pts}};
}

/// Verdict entry: a checked claim, its values, and the statement it was checked against.
inline json verdict(bool pass, const json& expected, const json& actual, const std::string& cite) {
  return json{{"pass", pass}, {"expected", expected}, {"actual", actual}, {"cite", cite}};
}

struct VerifyOutcome {
  json report;
  bool pass = false;
  bool indeterminate = false;
};

/// Full report for one construction: plan, seeds, certificate, per-twist cohomology and verdicts.
inline VerifyOutcome verification_report(const KernelBundlePresentation& bp, std::uint64_t master_seed, int t_min,
                                         int t_max) {
  const auto& x = bp.variety;
  const int n = x.n();
  VerifyOutcome out;
  json& j = out.report;
  j["plan"] = to_json(bp.plan);
  j["variety"] = to_json(x);
  j["seed"] = master_seed;
  j["matrix_seed"] = bp.seed;
  j["attempted_seeds"] = bp.attempted_seeds;
  j["certificate"] = to_json(bp.certificate);

  json verdicts;
  verdicts["surjectivity"] =
      verdict(bp.certificate.pass(), bp.certificate.h0_target, bp.certificate.h0_rank,
              "H^0(O(1)^b) -> H^0(O(2)^a) onto and A(q) of full rank at sampled points");

  AcmReport acm;
  std::optional<UlrichReport> ulrich;
  if (n == 2) {
    ulrich = verify_ulrich(bp, t_min, t_max);
    acm = ulrich->acm;
  } else {
    acm = verify_acm(bp, t_min, t_max);
  }
  json cohom = json::object();
  json chis = json::object();
  bool chi_ok = true;
  for (const auto& [t, table] : acm.tables) {
    cohom[std::to_string(t)] = to_json(table);
    if (!table.all_exact()) {
      out.indeterminate = true;
      continue;
    }
    std::int64_t expect = expected_euler(bp, t), got = table.euler();
    chis[std::to_string(t)] = got;
    chi_ok = chi_ok && expect == got;
  }
  j["cohomology"] = cohom;
  verdicts["acm"] = verdict(acm.pass, "h^i(E(tH)) = 0, 0 < i < n", acm.failures,
                            n >= 3 ? "ACM window plus 0-regularity of I_W(t(n+1)) w.r.t. O(2)"
                                   : "ACM window over the twists");
  verdicts["euler"] = verdict(chi_ok, "alternating sum of line-bundle Euler characteristics", chis,
                              "chi(E(tH)) = b chi(tH - e0) - a chi(tH - 2e0)");
  if (n >= 3) {
    json reg = json::array();
    for (const auto& rc : acm.regularity)
      reg.push_back(json{{"t", rc.t}, {"i", rc.i}, {"a", rc.divisor.a}, {"vanishes", rc.vanishes}});
    j["regularity"] = reg;
  }
  if (ulrich) {
    json checks = json::object();
    bool all = true;
    for (const auto& c : ulrich->checks) {
      checks[c.name] = json{{"expected", c.expected}, {"actual", c.actual}, {"pass", c.ok}};
      all = all && c.ok;
    }
    verdicts["ulrich"] = verdict(all && !ulrich->checks.empty(), "initialized Ulrich E(H)", checks,
                                 "h^0(E(H)) = d r and vanishing of H^i(F(-i)), H^i(F(-i-1))");
    auto cd = chern_and_slope(bp, 1);
    std::int64_t d = x.degree(), r = cd.rank;
    std::int64_t c2_expect = (d * r * r + (2 - d) * r) / 2;
    j["chern"] = json{{"rank", cd.rank}, {"c1", cd.c1.str()}, {"c2", *cd.c2}, {"slope", *cd.slope()}};
    bool c1_ok = cd.c1 == x.anticanonical() * static_cast<int>(r);
    verdicts["chern"] = verdict(c1_ok && *cd.c2 == c2_expect, json{{"c1", (x.anticanonical() * static_cast<int>(r)).str()}, {"c2", c2_expect}},
                                json{{"c1", cd.c1.str()}, {"c2", *cd.c2}},
                                "Ulrich E(H) has c_1 = rH and c_2 = (d r^2 + (2-d) r)/2");
    verdicts["riemann_roch"] = verdict(riemann_roch_surface(x, cd) == d * r, d * r, riemann_roch_surface(x, cd),
                                       "chi(F) = c_1(c_1 - K)/2 + r - c_2");
  }
  verdicts["simple"] = verdict(bp.stabilizer == 1, 1, bp.stabilizer, "dim Stab(A) = 1 for general A");
  auto fam = family_dimension(bp.plan);
  json famj{{"defining", fam.defining}, {"closed_form", fam.closed_form}, {"match", fam.match}};
  if (!fam.match) famj["flag"] = fam.flag;
  j["family_dimension"] = famj;
  out.pass = true;
  for (const auto& [k, v] : verdicts.items()) out.pass = out.pass && v.at("pass").get<bool>();
  j["verdicts"] = verdicts;
  j["pass"] = out.pass;
  return out;
}

/// One CSV row per twist: t,h0,...,hn; unresolved entries print as lo..hi.
inline std::string cohomology_csv(const std::map<int, CohomologyTable>& tables, int n) {
  std::ostringstream os;
  os << "t";
  for (int i = 0; i <= n; ++i) os << ",h" << i;
  os << "\n";
  for (const auto& [t, table] : tables) {
    os << t;
    for (const auto& e : table.h) {
      os << ",";
      if (e.is_exact())
        os << e.lo;
      else
        os << e.lo << ".." << (e.hi ? std::to_string(*e.hi) : "inf");
    }
    os << "\n";
  }
  return os.str();
}

inline json to_json(const MrcReport& m) {
  return json{{"d", m.d},
              {"r", m.r},
              {"m", m.m},
              {"verdicts",
               {{"h0_I(r-1)", verdict(m.below_ok, 0, m.h0_below, "h^0(I_Z(r-1)) = 0")},
                {"h0_I(r)", verdict(m.at_ok, m.expected_at, m.h0_at, "h^0(I_Z(r)) = (d-1) r + 1")},
                {"no_generators_r+1", verdict(m.surjective, m.h0_above, m.image_rank,
                                              "W (x) I_r -> I_{r+1} onto: no generators in degree r+1")}}},
              {"pass", m.pass()}};
}

}  // namespace kerbundle
