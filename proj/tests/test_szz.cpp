#include "commentrisk/error.hpp"
#include "commentrisk/szz.hpp"

#include "fixture_repo.hpp"

#include <catch_amalgamated.hpp>

#include <sstream>

using namespace commentrisk;
using namespace commentrisk::szz;

namespace {

std::string java(const std::vector<std::string>& body)
{
    std::string s = "class Foo {\n";
    for (const auto& l : body) s += l + "\n";
    return s + "}\n";
}

// Origin commit of one line at `rev`, straight from `git blame`.
std::string blame_origin(const fixture::Repo& r, const std::string& rev, const std::string& path, std::size_t line)
{
    const auto range = std::to_string(line) + "," + std::to_string(line);
    const auto out = r.git({"blame", "--root", "-l", "-s", "-L", range, rev, "--", path});
    return out.substr(0, 40);
}

}  // namespace

TEST_CASE("deleted line blames to the commit that added it")
{
    fixture::Repo r;
    r.write("Foo.java", java({"  int a() { return 1; }"}));
    r.commit("base", fixture::kEpoch);
    r.write("Foo.java", java({"  int a() { return 1; }", "  int l = 42;"}));
    const auto a = r.commit("add L", fixture::kEpoch + 100);
    r.write("Foo.java", java({"  int a() { return 1; }"}));
    const auto b = r.commit("fix: drop L", fixture::kEpoch + 200);

    const auto repo = git::Repository::open(r.path());
    const auto set = find_introducers(repo, repo.commit(b));
    CHECK(set.fix_commit == b);
    CHECK(set.introducers == std::set<std::string>{a});
    REQUIRE(set.evidence.count(a) == 1);
    CHECK(set.evidence.at(a) == std::vector<BlamedLine>{{"Foo.java", 3}});

    const auto json = to_json(set);
    CHECK(json.at("fix") == b);
    CHECK(json.at("introducers") == nlohmann::json::array({a}));
    CHECK(json.at("evidence").at(0).at("line") == 3);
}

TEST_CASE("a fix that only adds lines blames nothing")
{
    fixture::Repo r;
    r.write("Foo.java", java({"  int a() { return 1; }"}));
    r.commit("base", fixture::kEpoch);
    r.write("Foo.java", java({"  int a() { return 1; }", "  int b() { return 2; }"}));
    const auto fix = r.commit("fix: add b", fixture::kEpoch + 100);
    const auto repo = git::Repository::open(r.path());
    CHECK(find_introducers(repo, repo.commit(fix)).introducers.empty());
}

TEST_CASE("replacing lines from two commits returns both origins")
{
    fixture::Repo r;
    r.write("Foo.java", java({"  int a = 1;", "  int b = 2;", "  int c = 3;", "  int d = 4;"}));
    r.commit("c1", fixture::kEpoch);
    r.write("Foo.java", java({"  int a = 1;", "  int b = 20;", "  int c = 3;", "  int d = 4;"}));
    const auto c2 = r.commit("c2", fixture::kEpoch + 100);
    r.write("Foo.java", java({"  int a = 1;", "  int b = 20;", "  int c = 30;", "  int d = 4;"}));
    const auto c3 = r.commit("c3", fixture::kEpoch + 200);
    r.write("Foo.java", java({"  int a = 1;", "  int b = 21;", "  int c = 31;", "  int d = 4;"}));
    const auto fix = r.commit("fix both", fixture::kEpoch + 300);

    const auto repo = git::Repository::open(r.path());
    const auto set = find_introducers(repo, repo.commit(fix));
    CHECK(set.introducers == std::set<std::string>{c2, c3});
    // The replaced lines are 3 and 4 of the parent; git blame there agrees.
    CHECK(blame_origin(r, fix + "^", "Foo.java", 3) == c2);
    CHECK(blame_origin(r, fix + "^", "Foo.java", 4) == c3);
    CHECK(set.evidence.at(c2) == std::vector<BlamedLine>{{"Foo.java", 3}});
    CHECK(set.evidence.at(c3) == std::vector<BlamedLine>{{"Foo.java", 4}});
}

TEST_CASE("filters drop blank lines, comment lines and non-source paths")
{
    fixture::Repo r;
    r.write("Foo.java", java({"  // note", "", "  /* block", "     comment */", "  int x = 1; // trailing"}));
    r.write("notes.txt", "old\n");
    const auto base = r.commit("base", fixture::kEpoch);
    r.write("Foo.java", java({"  int x = 1; // trailing"}));
    r.write("notes.txt", "new\n");
    const auto fix = r.commit("fix comments", fixture::kEpoch + 100);

    const auto repo = git::Repository::open(r.path());
    const auto filtered = find_introducers(repo, repo.commit(fix));
    CHECK(filtered.introducers.empty());

    const auto unfiltered = find_introducers(repo, repo.commit(fix), SzzFilters::none());
    CHECK(unfiltered.introducers == std::set<std::string>{base});
    // Four Java lines plus the text file.
    std::size_t evidence = 0;
    for (const auto& [c, lines] : unfiltered.evidence) evidence += lines.size();
    CHECK(evidence == 5);

    SzzFilters code_only_java;
    code_only_java.skip_comments = false;
    const auto with_comments = find_introducers(repo, repo.commit(fix), code_only_java);
    CHECK(with_comments.evidence.at(base).size() == 3);
}

TEST_CASE("introducers newer than the fix are dropped")
{
    fixture::Repo r;
    r.write("Foo.java", java({"  int x = 1;"}));
    r.commit("base", fixture::kEpoch);
    r.write("Foo.java", java({"  int x = 2;"}));
    r.commit("later-dated change", fixture::kEpoch + 300);
    r.write("Foo.java", java({"  int x = 3;"}));
    const auto fix = r.commit("fix x", fixture::kEpoch + 200);
    const auto repo = git::Repository::open(r.path());
    CHECK(find_introducers(repo, repo.commit(fix)).introducers.empty());
}

TEST_CASE("errors")
{
    fixture::Repo r;
    r.write("Foo.java", java({"  int x = 1;"}));
    const auto root = r.commit("fix root", fixture::kEpoch);
    const auto repo = git::Repository::open(r.path());
    try {
        (void)find_introducers(repo, repo.commit(root));
        FAIL("expected NoParent");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NoParent);
    }

    git::CommitMeta ghost;
    ghost.id = std::string(40, 'a');
    ghost.parent_ids = {std::string(40, 'b')};
    try {
        (void)find_introducers(repo, ghost);
        FAIL("expected UnknownCommit");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnknownCommit);
    }

    const auto report = find_all_bug_introducing(repo, {repo.commit(root), ghost});
    CHECK(report.failures.size() == 2);
    CHECK(report.introducers.empty());
}

TEST_CASE("union over fixes")
{
    fixture::Repo r;
    r.write("Foo.java", java({"  int a = 1;", "  int b = 1;", "  int c = 1;", "  int d = 1;", "  int e = 1;"}));
    r.commit("c0", fixture::kEpoch);
    r.write("Foo.java", java({"  int a = 2;", "  int b = 2;", "  int c = 1;", "  int d = 1;", "  int e = 1;"}));
    const auto i1 = r.commit("i1", fixture::kEpoch + 10);
    r.write("Foo.java", java({"  int a = 2;", "  int b = 2;", "  int c = 3;", "  int d = 1;", "  int e = 1;"}));
    const auto i2 = r.commit("i2", fixture::kEpoch + 20);
    r.write("Foo.java", java({"  int a = 2;", "  int b = 2;", "  int c = 3;", "  int d = 4;", "  int e = 1;"}));
    const auto i3 = r.commit("i3", fixture::kEpoch + 30);
    r.write("Bar.java", "class Bar {\n  int z = 0;\n}\n");
    const auto i4 = r.commit("i4", fixture::kEpoch + 40);

    // f1 rewrites a (i1); f2 rewrites b (i1 again); f3 rewrites c, d and Bar.z (i2, i3, i4).
    r.write("Foo.java", java({"  int a = 9;", "  int b = 2;", "  int c = 3;", "  int d = 4;", "  int e = 1;"}));
    const auto f1 = r.commit("fix a", fixture::kEpoch + 50);
    r.write("Foo.java", java({"  int a = 9;", "  int b = 9;", "  int c = 3;", "  int d = 4;", "  int e = 1;"}));
    const auto f2 = r.commit("fix b", fixture::kEpoch + 60);
    r.write("Foo.java", java({"  int a = 9;", "  int b = 9;", "  int c = 9;", "  int d = 9;", "  int e = 1;"}));
    r.write("Bar.java", "class Bar {\n  int z = 9;\n}\n");
    const auto f3 = r.commit("fix c d z", fixture::kEpoch + 70);

    const auto repo = git::Repository::open(r.path());
    const auto first_two = find_all_bug_introducing(repo, {repo.commit(f1), repo.commit(f2)});
    CHECK(first_two.introducers == std::set<std::string>{i1});

    CHECK(find_all_bug_introducing(repo, {}).introducers.empty());

    const auto all = find_all_bug_introducing(repo, {repo.commit(f1), repo.commit(f2), repo.commit(f3)});
    CHECK(all.introducers == std::set<std::string>{i1, i2, i3, i4});
    CHECK(all.per_fix.size() == 3);
    CHECK(all.failures.empty());

    for (const auto& set : all.per_fix) {
        CHECK(set.introducers.count(set.fix_commit) == 0);
        for (const auto& id : set.introducers) CHECK(repo.is_ancestor(id, set.fix_commit));
    }
    const auto unfiltered = find_all_bug_introducing(repo, {repo.commit(f1), repo.commit(f2), repo.commit(f3)},
                                                     SzzFilters::none());
    CHECK(std::includes(unfiltered.introducers.begin(), unfiltered.introducers.end(), all.introducers.begin(),
                        all.introducers.end()));

    // Byte-stable reports.
    const auto again = find_all_bug_introducing(repo, {repo.commit(f1), repo.commit(f2), repo.commit(f3)});
    for (std::size_t i = 0; i < all.per_fix.size(); ++i) {
        CHECK(to_json(all.per_fix[i]).dump() == to_json(again.per_fix[i]).dump());
    }
}
