#include "commentrisk/error.hpp"
#include "commentrisk/records.hpp"

#include "fixture_repo.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>

using namespace commentrisk;
using namespace commentrisk::records;

namespace {

std::string source(const std::string& comment, const std::string& body)
{
    return "class Svc {\n  /** " + comment + " */\n  int run() {\n    " + body + "\n  }\n}\n";
}

std::vector<std::string> old_commits(const BuildResult& r)
{
    std::vector<std::string> ids;
    for (const auto& rec : r.records) ids.push_back(rec.old_commit);
    return ids;
}

}  // namespace

TEST_CASE("sample size")
{
    CHECK(sample_size(1'000'000'000, 0.90, 0.10) == 68);
    CHECK(sample_size(68, 0.90, 0.10) == 35);
    CHECK(sample_size(5, 0.90, 0.10) == 5);
    CHECK(sample_size(1, 0.90, 0.10) == 1);
    CHECK(sample_size(1'000'000'000, 0.95, 0.05) == 385);
    for (std::size_t n = 1; n <= 500; ++n) {
        const auto s = sample_size(n, 0.90, 0.10);
        CHECK(s >= 1);
        CHECK(s <= n);
    }
    CHECK_THROWS_AS(sample_size(0, 0.9, 0.1), Error);
    CHECK_THROWS_AS(sample_size(10, 1.0, 0.1), Error);
    CHECK_THROWS_AS(sample_size(10, 0.9, 0.0), Error);
    CHECK_THROWS_AS(sample_size(10, 0.0, 0.1), Error);

    const auto plan = SamplePlan::make(68, 0.90, 0.10, 42);
    CHECK(plan.sample_size == 35);
    CHECK(plan.seed == 42);
}

TEST_CASE("documentation and test path rules")
{
    const PathRules rules;
    CHECK(rules.is_doc_or_test("src/test/java/FooTest.java"));
    CHECK(rules.is_doc_or_test("module/tests/helper.py"));
    CHECK(rules.is_doc_or_test("src/it/java/Smoke.java"));
    CHECK(rules.is_doc_or_test("README.md"));
    CHECK(rules.is_doc_or_test("notes/CHANGES.txt"));
    CHECK(rules.is_doc_or_test("guide.adoc"));
    CHECK(rules.is_doc_or_test("docs/index.html"));
    CHECK_FALSE(rules.is_doc_or_test("src/main/java/Foo.java"));
    CHECK_FALSE(rules.is_doc_or_test("src/main/java/TestUtils.java"));
    CHECK_FALSE(rules.is_doc_or_test("pom.xml"));
}

TEST_CASE("windows")
{
    const Window week{0, 7};
    CHECK_FALSE(week.contains_seconds(0));
    CHECK(week.contains_seconds(1));
    CHECK(week.contains_seconds(7 * fixture::kDay));
    CHECK_FALSE(week.contains_seconds(7 * fixture::kDay + 1));
    CHECK(week.label() == "0-7");
    CHECK(Window{7, 14}.label() == "7-14");
    CHECK(Window{0.5, 1.5}.label() == "0.5-1.5");

    CHECK(parse_window("7-14") == Window{7, 14});
    CHECK(parse_window("0.5-1.5") == Window{0.5, 1.5});
    CHECK_THROWS_AS(parse_window("seven"), Error);
    CHECK_THROWS_AS(parse_window("7-"), Error);
    CHECK_THROWS_AS(Window({7, 7}).validate(), Error);
    CHECK_THROWS_AS(Window({-1, 7}).validate(), Error);
}

TEST_CASE("record JSON round trip")
{
    MethodRecord r{"a", "b", "old code", "new code", "/** old */", "/** new */", true, 10, 20, "repo", 0.25,
                   "Svc#run()", "src/Svc.java"};
    const auto j = to_json(r);
    for (const auto* key : {"old_commit", "new_commit", "old_code", "new_code", "old_comment", "new_comment",
                            "is_bug_introducing", "old_time", "new_time", "repo_name", "window_days_back"}) {
        CHECK(j.contains(key));
    }
    CHECK(record_from_json(j) == r);
    auto broken = j;
    broken.erase("new_code");
    try {
        (void)record_from_json(broken, 4);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 4);
    }
}

TEST_CASE("target selection")
{
    fixture::Repo r;
    r.write("src/main/A.java", "class A {}\n");
    const auto c0 = r.commit("base", fixture::kEpoch);
    std::vector<std::string> bug;
    for (int i = 1; i <= 3; ++i) {
        r.write("src/main/A.java", "class A { int v = " + std::to_string(i) + "; }\n");
        bug.push_back(r.commit("bug " + std::to_string(i), fixture::kEpoch + i * 100));
    }
    r.write("src/test/ATest.java", "class ATest {}\n");
    r.write("README.md", "readme\n");
    const auto docs_only = r.commit("tests and docs", fixture::kEpoch + 500);
    const auto empty = r.commit("empty", fixture::kEpoch + 550);
    r.write("src/main/B.java", "class B {}\n");
    const auto code1 = r.commit("code 1", fixture::kEpoch + 600);
    r.write("src/main/C.java", "class C {}\n");
    const auto code2 = r.commit("code 2", fixture::kEpoch + 700);

    const auto repo = git::Repository::open(r.path());
    const std::set<std::string> introducers(bug.begin(), bug.end());
    const auto plan = SamplePlan::make(introducers.size(), 0.90, 0.10, 7);
    REQUIRE(plan.sample_size == 3);
    const auto sel = select_targets(repo, introducers, plan);

    CHECK(sel.bug_targets.size() == 3);
    for (const auto& c : sel.bug_targets) CHECK(introducers.count(c.id) == 1);
    // Pool: c0, code1, code2 (docs_only and the empty commit are discarded).
    REQUIRE(sel.nonbug_targets.size() == 3);
    std::set<std::string> nonbug;
    for (const auto& c : sel.nonbug_targets) nonbug.insert(c.id);
    CHECK(nonbug == std::set<std::string>{c0, code1, code2});
    CHECK(nonbug.count(docs_only) == 0);
    CHECK(nonbug.count(empty) == 0);
    CHECK_FALSE(sel.insufficient_nonbug);

    const auto again = select_targets(repo, introducers, plan);
    CHECK(again.bug_targets.size() == sel.bug_targets.size());
    for (std::size_t i = 0; i < again.nonbug_targets.size(); ++i) {
        CHECK(again.nonbug_targets[i].id == sel.nonbug_targets[i].id);
    }

    // Four introducers (one of them a code commit) leave only two baseline survivors.
    auto more = introducers;
    more.insert(code1);
    const auto short_sel = select_targets(repo, more, SamplePlan::make(4, 0.90, 0.10, 7));
    CHECK(short_sel.nonbug_targets.size() == 2);
    CHECK(short_sel.requested_nonbug == 4);
    CHECK(short_sel.insufficient_nonbug);

    CHECK_THROWS_AS(select_targets(repo, {}, plan), Error);
}

TEST_CASE("seeded sampling is reproducible and seed-dependent")
{
    fixture::Repo r;
    std::set<std::string> introducers;
    for (int i = 0; i < 40; ++i) {
        r.write("src/A.java", "class A { int v = " + std::to_string(i) + "; }\n");
        const auto id = r.commit("c" + std::to_string(i), fixture::kEpoch + i * 60);
        if (i % 2 == 0) introducers.insert(id);
    }
    const auto repo = git::Repository::open(r.path());
    auto ids = [&](std::uint64_t seed) {
        std::vector<std::string> out;
        for (const auto& c : select_targets(repo, introducers, SamplePlan::make(20, 0.9, 0.2, seed)).bug_targets) {
            out.push_back(c.id);
        }
        return out;
    };
    const auto plan = SamplePlan::make(20, 0.9, 0.2, 1);
    REQUIRE(plan.sample_size < 20);
    CHECK(ids(1) == ids(1));
    CHECK(ids(1) != ids(2));
}

TEST_CASE("building records over windows")
{
    fixture::Repo r;
    const auto day = [](double d) { return fixture::kEpoch + static_cast<std::int64_t>(d * fixture::kDay); };
    r.write("src/Svc.java", source("Runs.", "return 0;"));
    r.write("src/Other.java", "class Other {\n  int x() { return 0; }\n}\n");
    const auto c0 = r.commit("base", day(0));
    r.write("src/Svc.java", source("Runs.", "return 1;"));
    const auto c2 = r.commit("two", day(2));  // 8 days before the target
    r.write("src/Svc.java", source("Runs.", "return 2;"));
    const auto c4 = r.commit("four", day(4));  // 6 days before
    r.write("src/Svc.java", source("Runs.", "return 3;"));
    r.write("src/Other.java", "class Other {\n  int x() { return 1; }\n}\n");  // no comment: dropped
    const auto c7 = r.commit("seven", day(7));  // 3 days before
    r.write("src/Svc.java", source("Runs fast.", "return 4;"));
    const auto target = r.commit("target", day(10));

    // A side branch commit inside the window that the target does not descend from.
    r.git({"checkout", "-q", "-b", "side", c7});
    r.write("src/Svc.java", source("Side.", "return 99;"));
    const auto side = r.commit("side", day(9));
    r.git({"checkout", "-q", "main"});

    const auto repo = git::Repository::open(r.path(), {"svc"});
    const std::vector<Target> targets{{repo.commit(target), true}};

    const auto week = build_records(repo, targets, Window{0, 7});
    CHECK(old_commits(week) == std::vector<std::string>{c4, c7});
    CHECK(week.dropped_empty_comment == 1);
    CHECK(week.failures.empty());
    REQUIRE(week.records.size() == 2);
    const auto& rec = week.records[1];
    CHECK(rec.new_commit == target);
    CHECK(rec.old_comment == "/** Runs. */");
    CHECK(rec.new_comment == "/** Runs fast. */");
    CHECK(rec.old_code.find("return 3;") != std::string::npos);
    CHECK(rec.new_code.find("return 4;") != std::string::npos);
    CHECK(rec.is_bug_introducing);
    CHECK(rec.repo_name == "svc");
    CHECK(rec.old_time == day(7));
    CHECK(rec.new_time == day(10));
    CHECK(rec.window_days_back == 3.0);
    CHECK(rec.signature_key == "Svc#run()");
    CHECK(rec.path == "src/Svc.java");
    for (const auto& x : week.records) {
        CHECK(x.old_commit != side);
        CHECK_FALSE(x.new_comment.empty());
        CHECK(x.old_time < x.new_time);
        CHECK(repo.is_ancestor(x.old_commit, x.new_commit));
    }

    const auto second = build_records(repo, targets, Window{7, 14});
    CHECK(old_commits(second) == std::vector<std::string>{c0, c2});

    // (0,7] and (7,14] partition (0,14].
    const auto fortnight = build_records(repo, targets, Window{0, 14});
    auto combined = week.records;
    combined.insert(combined.end(), second.records.begin(), second.records.end());
    auto by_old = [](const MethodRecord& a, const MethodRecord& b) { return a.old_commit < b.old_commit; };
    auto all = fortnight.records;
    std::sort(combined.begin(), combined.end(), by_old);
    std::sort(all.begin(), all.end(), by_old);
    CHECK(combined == all);

    // Nothing before the first commit.
    const auto none = build_records(repo, {{repo.commit(c0), false}}, Window{0, 7});
    CHECK(none.records.empty());
    CHECK(none.failures.empty());

    // Deterministic, also with several workers.
    BuildOptions parallel;
    parallel.jobs = 3;
    const std::vector<Target> many{{repo.commit(target), true}, {repo.commit(c7), false}, {repo.commit(c4), false}};
    CHECK(build_records(repo, many, Window{0, 14}).records == build_records(repo, many, Window{0, 14}, parallel).records);
}
