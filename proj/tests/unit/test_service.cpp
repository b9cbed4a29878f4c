#include <gtest/gtest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "hypforge/search.hpp"
#include "hypforge/service.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace hypforge;
using nlohmann::json;

namespace {

const char* kFifteen = "default <good>\nA {x y} -> B\nB {y} -> A\nstart: A\n";

Request post_json(const std::string& path, const json& body) {
  return Request{"POST", path, body.dump(), "application/json", {}};
}

Request get(const std::string& path) { return Request{"GET", path, "", "", {}}; }

json body(const Response& r) { return json::parse(r.body); }

std::string create(Service& s, const std::string& source) {
  const Response r = s.handle(post_json("/models", {{"source", source}}));
  EXPECT_EQ(r.status, 201) << r.body;
  return body(r)["id"].get<std::string>();
}

json page(Service& s, const std::string& id, const json& req) {
  const Response r = s.handle(post_json("/models/" + id + "/hypotheses", req));
  EXPECT_EQ(r.status, 200) << r.body;
  return body(r);
}

std::string temp_path(const std::string& stem) {
  const auto p = std::filesystem::temp_directory_path() /
                 (stem + "-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "-" +
                  std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id())) + ".json");
  std::filesystem::remove(p);
  return p.string();
}

}  // namespace

TEST(Service, ParseEndpointReturnsTokensDiagnosticsGraph) {
  Service s;
  const Response ok = s.handle(post_json("/parse", {{"source", hftest::bundled_source("malware")}}));
  ASSERT_EQ(ok.status, 200);
  const json j = body(ok);
  EXPECT_EQ(j["errors"], 0);
  EXPECT_GT(j["tokens"].size(), 50u);
  EXPECT_EQ(j["tokens"][0]["span"]["line"], 1);
  ASSERT_TRUE(j.contains("graph"));
  EXPECT_GE(j["graph"]["nodes"].size(), 18u);

  const Response bad = s.handle(Request{"POST", "/parse", "default <good>\nA {x} -> Missing\nstart: A\n", "text/plain", {}});
  ASSERT_EQ(bad.status, 200);
  const json b = body(bad);
  EXPECT_GE(b["errors"], 1);
  EXPECT_FALSE(b.contains("graph"));
  EXPECT_EQ(b["diagnostics"][0]["code"], "unknown-state");
  EXPECT_EQ(b["diagnostics"][0]["span"]["line"], 2);
}

TEST(Service, StatusCodes) {
  ServiceOptions o;
  o.max_body_bytes = 64;
  Service s(o);
  EXPECT_EQ(s.handle(Request{"POST", "/parse", std::string(65, 'x'), "text/plain", {}}).status, 413);
  EXPECT_EQ(s.handle(get("/parse")).status, 405);
  EXPECT_EQ(s.handle(Request{"POST", "/parse", "{not json", "application/json", {}}).status, 400);
  EXPECT_EQ(s.handle(Request{"POST", "/parse", "\xff\xfe", "text/plain", {}}).status, 400);
  EXPECT_EQ(s.handle(get("/nowhere")).status, 404);
  EXPECT_EQ(s.handle(get("/models/nope")).status, 404);
  EXPECT_EQ(s.handle(get("/models/nope/graph")).status, 404);
  EXPECT_EQ(s.handle(Request{"DELETE", "/models", "", "", {}}).status, 405);

  const std::string broken = create(s, "A {x} -> Q\nstart: A\n");
  EXPECT_EQ(s.handle(get("/models/" + broken + "/graph")).status, 409);
  EXPECT_EQ(s.handle(post_json("/models/" + broken + "/hypotheses", {{"trace", {"x"}}})).status, 409);

  const std::string good = create(s, "default <good>\nA {x}\nstart: A\n");
  const Response unknown_obs = s.handle(post_json("/models/" + good + "/hypotheses", {{"trace", {"x", "sneeze"}}}));
  EXPECT_EQ(unknown_obs.status, 422);
  EXPECT_EQ(body(unknown_obs)["symbol"], "sneeze");
  EXPECT_EQ(body(unknown_obs)["position"], 1);
  EXPECT_EQ(s.handle(post_json("/models/" + good + "/hypotheses", {{"trace", {"x"}}, {"page", 0}})).status, 400);
  EXPECT_EQ(s.handle(post_json("/models/" + good + "/hypotheses", {{"trace", "x"}})).status, 400);
  EXPECT_EQ(s.handle(post_json("/models/" + good + "/hypotheses", {{"token", "feedface"}, {"page", 2}})).status, 410);
}

TEST(Service, FifteenHypothesesPaginate) {
  Service s;
  const std::string id = create(s, kFifteen);
  const json p1 = page(s, id, {{"trace", {"y", "x"}}});
  EXPECT_EQ(p1["items"].size(), 10u);
  EXPECT_TRUE(p1["has_next"]);
  EXPECT_EQ(p1["items"][0]["rank"], 1);
  const json p2 = page(s, id, {{"token", p1["token"]}, {"page", 2}});
  EXPECT_EQ(p2["items"].size(), 5u);
  EXPECT_FALSE(p2["has_next"]);
  EXPECT_TRUE(p2["exhausted"]);
  EXPECT_EQ(p2["items"][0]["rank"], 11);
  EXPECT_EQ(p2["trace"], json({"y", "x"}));
  const json p3 = page(s, id, {{"token", p1["token"]}, {"page", 3}});
  EXPECT_TRUE(p3["items"].empty());
  EXPECT_FALSE(p3["has_next"]);
}

TEST(Service, EmptyTraceSingleItem) {
  Service s;
  const std::string id = create(s, hftest::bundled_source("icu"));
  const json p = page(s, id, {{"trace", json::array()}});
  ASSERT_EQ(p["items"].size(), 1u);
  EXPECT_FALSE(p["has_next"]);
  EXPECT_EQ(p["items"][0]["states"], json({"Unadmitted"}));
}

TEST(Service, MalwareFirstPageRanksCrawlerFirst) {
  Service s;
  const std::string id = create(s, hftest::bundled_source("malware"));
  const json p = page(s, id, {{"trace", {"blacklisted-download", "ad-traffic-increase"}}});
  ASSERT_FALSE(p["items"].empty());
  const json& top = p["items"][0];
  EXPECT_EQ(top["rank"], 1);
  EXPECT_EQ(top["cost"], 2);
  EXPECT_EQ(top["states"], json({"start", "Crawling"}));
  EXPECT_EQ(top["discards"], 0);
  EXPECT_EQ(top["observations"][0]["disposition"], "explained");
  EXPECT_EQ(top["observations"][1]["disposition"], "explained");
}

TEST(Service, PagesAgreeWithOneShotSearch) {
  Service s;
  const std::string id = create(s, hftest::bundled_source("malware"));
  const std::vector<std::string> trace{"blacklisted-download", "usb-autorun", "p2p-traffic"};
  const json p1 = page(s, id, {{"trace", trace}});
  std::vector<json> items(p1["items"].begin(), p1["items"].end());
  for (int n = 2; n <= 3; ++n) {
    const json pn = page(s, id, {{"token", p1["token"]}, {"page", n}});
    items.insert(items.end(), pn["items"].begin(), pn["items"].end());
  }
  const PlanningProblem prob = compile(hftest::bundled("malware"), Trace::from_symbols(trace), CostParams{});
  SearchConfig c;
  c.k = 30;
  const ResultSet rs = find_top_k(prob, c);
  ASSERT_EQ(items.size(), rs.hypotheses.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    EXPECT_EQ(items[i]["rank"], i + 1);
    EXPECT_EQ(items[i]["cost"], rs.hypotheses[i].total_cost);
    EXPECT_EQ(items[i]["states"], json(rs.hypotheses[i].state_sequence()));
  }
  // revisiting a page does not move the ranking
  const json again = page(s, id, {{"token", p1["token"]}, {"page", 1}});
  EXPECT_EQ(again["items"], p1["items"]);
}

TEST(Service, TextTraceWithQueryParameters) {
  Service s;
  const std::string id = create(s, kFifteen);
  const Response r1 = s.handle(Request{"POST", "/models/" + id + "/hypotheses", "y\nx\n", "text/plain", {}});
  ASSERT_EQ(r1.status, 200);
  const std::string token = body(r1)["token"];
  const Response r2 =
      s.handle(Request{"POST", "/models/" + id + "/hypotheses", "", "text/plain", {{"page", "2"}, {"token", token}}});
  ASSERT_EQ(r2.status, 200);
  EXPECT_EQ(body(r2)["items"].size(), 5u);
  EXPECT_EQ(s.handle(Request{"POST", "/models/" + id + "/hypotheses", "", "text/plain", {{"page", "abc"}}}).status, 400);
}

TEST(Service, TokenBelongsToModel) {
  Service s;
  const std::string a = create(s, kFifteen);
  const std::string b = create(s, kFifteen);
  const json p = page(s, a, {{"trace", {"y"}}});
  EXPECT_EQ(s.handle(post_json("/models/" + b + "/hypotheses", {{"token", p["token"]}, {"page", 2}})).status, 400);
}

TEST(Service, SessionsExpire) {
  auto now = Clock::now();
  ServiceOptions o;
  o.session_ttl = Seconds(60.0);
  o.now = [&now] { return now; };
  Service s(o);
  const std::string id = create(s, kFifteen);
  const json p = page(s, id, {{"trace", {"y", "x"}}});
  EXPECT_EQ(s.session_count(), 1u);
  now += std::chrono::seconds(30);
  EXPECT_EQ(s.handle(post_json("/models/" + id + "/hypotheses", {{"token", p["token"]}, {"page", 2}})).status, 200);
  now += std::chrono::seconds(61);
  const Response gone = s.handle(post_json("/models/" + id + "/hypotheses", {{"token", p["token"]}, {"page", 1}}));
  EXPECT_EQ(gone.status, 410);
  EXPECT_EQ(s.session_count(), 0u);
}

TEST(Service, ModelRecordsAndIdempotentParse) {
  Service s;
  const std::string source = hftest::bundled_source("icu");
  const std::string id = create(s, source);
  const Response g = s.handle(get("/models/" + id));
  ASSERT_EQ(g.status, 200);
  EXPECT_EQ(body(g)["source"], source);
  EXPECT_EQ(body(g)["last_parse"]["errors"], 0);
  const Response p1 = s.handle(Request{"POST", "/models/" + id + "/parse", "", "", {}});
  const Response p2 = s.handle(Request{"POST", "/models/" + id + "/parse", "", "", {}});
  ASSERT_EQ(p1.status, 200);
  EXPECT_EQ(p1.body, p2.body);

  const Response put = s.handle(Request{"PUT", "/models/" + id, "A {x} -> Nope\nstart: A\n", "text/plain", {}});
  ASSERT_EQ(put.status, 200);
  EXPECT_GE(body(put)["last_parse"]["errors"], 1);
  EXPECT_EQ(s.handle(Request{"PUT", "/models/zzz", "A\nstart: A\n", "text/plain", {}}).status, 404);
}

TEST(Service, Vocabulary) {
  Service s;
  const std::string id = create(s, hftest::bundled_source("icu"));
  const Response r = s.handle(get("/models/" + id + "/vocabulary"));
  ASSERT_EQ(r.status, 200);
  const auto obs = body(r)["observations"].get<std::vector<std::string>>();
  EXPECT_TRUE(std::is_sorted(obs.begin(), obs.end()));
  EXPECT_EQ(std::adjacent_find(obs.begin(), obs.end()), obs.end());
  EXPECT_NE(std::find(obs.begin(), obs.end(), "HH3"), obs.end());
  EXPECT_NE(std::find(obs.begin(), obs.end(), "HRVL"), obs.end());
  const std::string dup = create(s, "default <good>\nA {x y} -> B\nB {y x}\nstart: A\n");
  EXPECT_EQ(body(s.handle(get("/models/" + dup + "/vocabulary")))["observations"], json({"x", "y"}));
  const Response graph = s.handle(get("/models/" + dup + "/graph"));
  ASSERT_EQ(graph.status, 200);
  EXPECT_EQ(body(graph)["edges"].size(), 1u);
}

TEST(Service, PersistsSourcesByteExact) {
  const std::string path = temp_path("hypforge-store");
  const std::string source = "# odd spacing\t\ndefault <bad>\n  A {x}   -> B\r\nB {y} \xc3\xa9\nstart: A";
  std::string id;
  {
    ServiceOptions o;
    o.store_path = path;
    Service s(o);
    const Response r = s.handle(Request{"POST", "/models", source, "text/plain", {}});
    ASSERT_EQ(r.status, 201);
    id = body(r)["id"];
  }
  ASSERT_TRUE(std::filesystem::exists(path));
  ServiceOptions o;
  o.store_path = path;
  Service reloaded(o);
  const Response g = reloaded.handle(get("/models/" + id));
  ASSERT_EQ(g.status, 200);
  EXPECT_EQ(body(g)["source"].get<std::string>(), source);
  // fresh ids do not collide with reloaded ones
  const std::string other = create(reloaded, kFifteen);
  EXPECT_NE(other, id);
  std::filesystem::remove(path);
}

TEST(Service, ConcurrentSessions) {
  Service s;
  const std::string id = create(s, hftest::bundled_source("malware"));
  const std::vector<std::vector<std::string>> traces{
      {"blacklisted-download", "ad-traffic-increase"},
      {"blacklisted-download", "irc-increase", "ad-traffic-increase"},
      {"blacklisted-download", "usb-autorun", "p2p-traffic"},
      {"ad-traffic-increase"}};
  std::vector<std::string> first(traces.size());
  std::vector<std::string> serial(traces.size());
  for (std::size_t i = 0; i < traces.size(); ++i) {
    serial[i] = page(s, id, {{"trace", traces[i]}})["items"].dump();
  }
  std::vector<std::thread> threads;
  std::atomic<int> failures{0};
  for (std::size_t i = 0; i < traces.size(); ++i) {
    threads.emplace_back([&, i] {
      const Response r = s.handle(post_json("/models/" + id + "/hypotheses", {{"trace", traces[i]}}));
      if (r.status != 200) {
        ++failures;
        return;
      }
      const json j = json::parse(r.body);
      first[i] = j["items"].dump();
      const Response r2 =
          s.handle(post_json("/models/" + id + "/hypotheses", {{"token", j["token"]}, {"page", 2}}));
      if (r2.status != 200) ++failures;
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(failures.load(), 0);
  EXPECT_EQ(first, serial);
}

TEST(Service, ServesOverHttp) {
  Service s;
  HttpServer server(s, 1 << 20);
  const int port = server.bind("127.0.0.1", 0);
  ASSERT_GT(port, 0);
  std::thread t([&] { server.listen(); });
  httplib::Client c("127.0.0.1", port);
  c.set_read_timeout(30, 0);
  for (int i = 0; i < 100; ++i) {
    if (auto r = c.Get("/models/none")) break;
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  auto created = c.Post("/models", json{{"source", kFifteen}}.dump(), "application/json");
  ASSERT_TRUE(created);
  EXPECT_EQ(created->status, 201);
  const std::string id = json::parse(created->body)["id"];
  auto hyp = c.Post("/models/" + id + "/hypotheses?page=1", "y\nx\n", "text/plain");
  ASSERT_TRUE(hyp);
  EXPECT_EQ(hyp->status, 200);
  EXPECT_EQ(json::parse(hyp->body)["items"].size(), 10u);
  auto missing = c.Get("/models/none");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);
  server.stop();
  t.join();
}
