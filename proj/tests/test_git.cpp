#include "commentrisk/error.hpp"
#include "commentrisk/git.hpp"

#include "fixture_repo.hpp"

#include <catch_amalgamated.hpp>

#include <sstream>

using namespace commentrisk;
using namespace commentrisk::git;

namespace {

ErrorKind error_kind_of(const std::function<void()>& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::IoError;
}

// Origins per line as printed by the git executable.
std::vector<std::string> git_blame_origins(const fixture::Repo& repo, const std::string& rev, const std::string& path)
{
    std::istringstream in(repo.git({"blame", "--root", "-l", "-s", rev, "--", path}));
    std::vector<std::string> origins;
    for (std::string line; std::getline(in, line);) origins.push_back(line.substr(0, 40));
    return origins;
}

std::size_t count_lines(const std::string& s)
{
    if (s.empty()) return 0;
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')) + (s.back() == '\n' ? 0 : 1);
}

}  // namespace

TEST_CASE("list_commits orders by time, then by id")
{
    fixture::Repo r;
    r.write("a.txt", "1\n");
    const auto c1 = r.commit("first", fixture::kEpoch + 30);
    r.write("a.txt", "2\n");
    const auto c2 = r.commit("second", fixture::kEpoch + 10);  // older author time than its parent
    r.write("a.txt", "3\n");
    const auto c3 = r.commit("third", fixture::kEpoch + 20);

    const auto repo = Repository::open(r.path(), {"demo"});
    const auto commits = repo.list_commits();
    REQUIRE(commits.size() == 3);
    CHECK(commits[0].id == c2);
    CHECK(commits[1].id == c3);
    CHECK(commits[2].id == c1);
    CHECK(commits[0].author_time == fixture::kEpoch + 10);
    CHECK(commits[0].message == "second");
    CHECK(commits[0].repo_name == "demo");
    CHECK(commits[0].parent_ids == std::vector<std::string>{c1});
    CHECK(commits[2].parent_ids.empty());
    for (const auto& c : commits) CHECK(is_commit_hash(c.id));

    const auto until = repo.list_commits(fixture::kEpoch + 20);
    CHECK(until.size() == 2);
}

TEST_CASE("equal times fall back to hash order")
{
    fixture::Repo r;
    r.write("a.txt", "1\n");
    const auto c1 = r.commit("one", fixture::kEpoch);
    r.write("a.txt", "2\n");
    const auto c2 = r.commit("two", fixture::kEpoch);
    const auto commits = Repository::open(r.path()).list_commits();
    REQUIRE(commits.size() == 2);
    CHECK(commits[0].id == std::min(c1, c2));
    CHECK(commits[1].id == std::max(c1, c2));
}

TEST_CASE("the clock option picks author or committer time")
{
    fixture::Repo r;
    r.write("a.txt", "1\n");
    const auto early_author = r.commit("a", fixture::kEpoch + 100, fixture::kEpoch + 1);
    r.write("a.txt", "2\n");
    const auto late_author = r.commit("b", fixture::kEpoch + 200, fixture::kEpoch + 0);

    const auto by_author = Repository::open(r.path(), {"x", "HEAD", Clock::Author}).list_commits();
    CHECK(by_author.front().id == early_author);
    const auto by_committer = Repository::open(r.path(), {"x", "HEAD", Clock::Committer}).list_commits();
    CHECK(by_committer.front().id == late_author);
}

TEST_CASE("repository errors")
{
    CHECK(error_kind_of([] { (void)Repository::open("/nonexistent/path/for/sure"); }) == ErrorKind::RepoNotFound);

    fixture::TempDir plain;
    CHECK(error_kind_of([&] { (void)Repository::open(plain.path()); }) == ErrorKind::RepoNotFound);

    fixture::Repo empty;
    const auto repo = Repository::open(empty.path());
    CHECK(error_kind_of([&] { (void)repo.list_commits(); }) == ErrorKind::EmptyRepo);

    fixture::Repo r;
    r.write("a.txt", "1\n");
    r.commit("one", fixture::kEpoch);
    const auto repo2 = Repository::open(r.path());
    CHECK(error_kind_of([&] { (void)repo2.commit("0123456789012345678901234567890123456789"); }) ==
          ErrorKind::UnknownCommit);
    CHECK(error_kind_of([&] { (void)repo2.diff("HEAD", "nope"); }) == ErrorKind::UnknownCommit);
}

TEST_CASE("diff")
{
    fixture::Repo r;
    r.write("B.java", "class B {\n  int x() { return 1; }\n  int y() { return 2; }\n  int z() { return 3; }\n}\n");
    r.write("README.md", "hello\n");
    r.write("Same.java", "class Same {}\n");
    const auto c1 = r.commit("base", fixture::kEpoch);
    r.write("A.java", "class A {}\n");
    const auto c2 = r.commit("add A", fixture::kEpoch + 10);
    r.move("B.java", "C.java");
    r.write("C.java", "class B {\n  int x() { return 1; }\n  int y() { return 2; }\n  int z() { return 4; }\n}\n");
    r.write("README.md", "hello again\n");
    const auto c3 = r.commit("rename B to C", fixture::kEpoch + 20);
    r.remove("A.java");
    const auto c4 = r.commit("drop A", fixture::kEpoch + 30);

    const auto repo = Repository::open(r.path());

    SECTION("identical commits")
    {
        CHECK(repo.diff(c2, c2).empty());
    }
    SECTION("added file")
    {
        const auto d = repo.diff(c1, c2);
        REQUIRE(d.size() == 1);
        CHECK(d[0].path == "A.java");
        CHECK(d[0].change_kind == ChangeKind::Added);
        CHECK_FALSE(d[0].old_blob.has_value());
        CHECK(d[0].new_blob == "class A {}\n");
    }
    SECTION("rename with edit, as git itself reports it")
    {
        const auto d = repo.diff(c2, c3, {"*.java"});
        REQUIRE(d.size() == 1);
        CHECK(d[0].change_kind == ChangeKind::Renamed);
        CHECK(d[0].old_path == "B.java");
        CHECK(d[0].path == "C.java");
        REQUIRE(d[0].old_blob.has_value());
        REQUIRE(d[0].new_blob.has_value());
        CHECK(*d[0].old_blob != *d[0].new_blob);

        const auto status = r.git({"diff", "--name-status", "-M", c2, c3, "--", "*.java"});
        CHECK(status.rfind("R", 0) == 0);
        CHECK(status.find("B.java\tC.java") != std::string::npos);
    }
    SECTION("path filter")
    {
        const auto all = repo.diff(c2, c3);
        CHECK(all.size() == 2);
        const auto md = repo.diff(c2, c3, {"*.md"});
        REQUIRE(md.size() == 1);
        CHECK(md[0].path == "README.md");
        CHECK(md[0].change_kind == ChangeKind::Modified);
    }
    SECTION("deleted file")
    {
        const auto d = repo.diff(c3, c4);
        REQUIRE(d.size() == 1);
        CHECK(d[0].change_kind == ChangeKind::Deleted);
        CHECK(d[0].path == "A.java");
        CHECK_FALSE(d[0].new_blob.has_value());
    }
    SECTION("modified entries always differ")
    {
        for (const auto& f : repo.diff(c1, c4)) {
            if (f.change_kind == ChangeKind::Modified) {
                CHECK(f.old_blob != f.new_blob);
            }
            CHECK(f.path != "Same.java");
        }
    }
}

TEST_CASE("blame")
{
    fixture::Repo r;
    r.write("F.java", "a\nb\nc\n");
    const auto ca = r.commit("A", fixture::kEpoch);
    const auto repo = Repository::open(r.path());

    SECTION("single commit")
    {
        const auto lines = repo.blame(ca, "F.java");
        REQUIRE(lines.size() == 3);
        for (const auto& l : lines) CHECK(l.origin_commit == ca);
        CHECK(lines[0].line_no == 1);
        CHECK(lines[2].content == "c");
    }
    SECTION("line added on top")
    {
        r.write("F.java", "a\nb\nnew\nc\n");
        const auto cb = r.commit("B", fixture::kEpoch + 10);
        const auto lines = repo.blame(cb, "F.java");
        REQUIRE(lines.size() == 4);
        CHECK(lines[0].origin_commit == ca);
        CHECK(lines[2].origin_commit == cb);
        CHECK(lines[3].origin_commit == ca);
    }
    SECTION("edit chain matches git blame")
    {
        r.write("F.java", "a\nB\nc\nd\n");
        r.commit("B", fixture::kEpoch + 10);
        r.write("F.java", "a\nB\nC\nd\ne\n\n");
        const auto cc = r.commit("C", fixture::kEpoch + 20);
        const auto lines = repo.blame(cc, "F.java");
        const auto oracle = git_blame_origins(r, cc, "F.java");
        REQUIRE(lines.size() == oracle.size());
        for (std::size_t i = 0; i < lines.size(); ++i) CHECK(lines[i].origin_commit == oracle[i]);
        CHECK(lines.size() == count_lines(r.git({"show", cc + ":F.java"})));
    }
    SECTION("missing path")
    {
        CHECK(error_kind_of([&] { (void)repo.blame(ca, "Nope.java"); }) == ErrorKind::PathAbsentAtRevision);
    }
}

TEST_CASE("removed lines, changed paths, ancestry")
{
    fixture::Repo r;
    r.write("F.java", "1\n2\n3\n4\n5\n");
    r.write("docs/x.md", "x\n");
    const auto c1 = r.commit("one", fixture::kEpoch);
    r.write("F.java", "1\nTWO\n3\n5\nsix\n");
    const auto c2 = r.commit("two", fixture::kEpoch + 10);

    const auto repo = Repository::open(r.path());
    const auto d = repo.diff(c1, c2, {"*.java"});
    REQUIRE(d.size() == 1);
    CHECK(repo.removed_lines(d[0].old_oid, d[0].new_oid) == std::vector<std::size_t>{2, 4});

    CHECK(repo.changed_paths(repo.commit(c1)) == std::vector<std::string>{"F.java", "docs/x.md"});
    CHECK(repo.changed_paths(repo.commit(c2)) == std::vector<std::string>{"F.java"});

    CHECK(repo.is_ancestor(c1, c2));
    CHECK_FALSE(repo.is_ancestor(c2, c1));
    CHECK(repo.ancestors(c2).count(c1) == 1);
    CHECK(repo.ancestors(c2).count(c2) == 1);
    CHECK(repo.resolve("HEAD") == c2);
    CHECK(repo.read_blob(d[0].new_oid) == "1\nTWO\n3\n5\nsix\n");
}
