#pragma once

#include "fixture_repo.hpp"

#include <string>

namespace fixture {

// A small Java project with a known history:
//
//   day  commit  change
//    0   c0      Calc.java with add/sub/mul, README
//   20   c1      add body            (bug introduced, fixed by f1)
//   22   c2      mul body + comment  (bug introduced, fixed by f2)
//   30   c3      README only
//   40   f1      "fix add overflow"
//   70   t1      test file only
//   75   c5      sub body            (bug introduced, fixed by f2)
//   80   f2      "fix bug in mul and sub"
//
// Introducers are {c1, c2, c5}; the baseline pool is exactly {c0, f1, f2}, so sampling picks every
// commit whatever the seed.
class ProjectRepo {
public:
    ProjectRepo();

    [[nodiscard]] const std::filesystem::path& path() const { return repo.path(); }

    static std::string calc(const std::string& add, const std::string& sub, const std::string& mul,
                            const std::string& mul_comment);

    Repo repo;
    std::string c0, c1, c2, c3, f1, t1, c5, f2;
};

}  // namespace fixture
