#include "project_repo.hpp"

namespace fixture {

std::string ProjectRepo::calc(const std::string& add, const std::string& sub, const std::string& mul,
                              const std::string& mul_comment)
{
    return "package demo;\n"
           "\n"
           "/** Small calculator. */\n"
           "public class Calc {\n"
           "    /** Adds two numbers. */\n"
           "    public int add(int a, int b) {\n"
           "        " + add + "\n"
           "    }\n"
           "\n"
           "    /** Subtracts b from a. */\n"
           "    public int sub(int a, int b) {\n"
           "        " + sub + "\n"
           "    }\n"
           "\n"
           "    /** " + mul_comment + " */\n"
           "    public int mul(int a, int b) {\n"
           "        " + mul + "\n"
           "    }\n"
           "}\n";
}

ProjectRepo::ProjectRepo()
{
    const std::string path = "src/main/java/demo/Calc.java";
    const std::string plain_mul = "Multiplies two numbers.";
    const std::string exact_mul = "Multiplies two numbers, failing on overflow.";

    repo.write(path, calc("return a + b;", "return a - b;", "return a * b;", plain_mul));
    repo.write("README.md", "# demo\n");
    c0 = repo.commit_at_day("initial import", 0);

    repo.write(path, calc("return (int) ((long) a + b);", "return a - b;", "return a * b;", plain_mul));
    c1 = repo.commit_at_day("widen add", 20);

    repo.write(path, calc("return (int) ((long) a + b);", "return a - b;", "return a * b + 0;", exact_mul));
    c2 = repo.commit_at_day("rework mul", 22);

    repo.write("README.md", "# demo\n\nA calculator.\n");
    c3 = repo.commit_at_day("update readme", 30);

    repo.write(path, calc("return Math.addExact(a, b);", "return a - b;", "return a * b + 0;", exact_mul));
    f1 = repo.commit_at_day("fix add overflow", 40);

    repo.write("src/test/java/demo/CalcTest.java", "package demo;\n\nclass CalcTest {\n}\n");
    t1 = repo.commit_at_day("add tests", 70);

    repo.write(path, calc("return Math.addExact(a, b);", "return a - b - 0;", "return a * b + 0;", exact_mul));
    c5 = repo.commit_at_day("tidy sub", 75);

    repo.write(path,
               calc("return Math.addExact(a, b);", "return Math.subtractExact(a, b);",
                    "return Math.multiplyExact(a, b);", exact_mul));
    f2 = repo.commit_at_day("fix bug in mul and sub", 80);
}

}  // namespace fixture
