#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

// End-to-end exit-code checks driven through the installed binary. The CLI
// path comes from SOFTNET_CLI_PATH (set by ctest via the environment) or the
// default build location.

namespace {

std::string cli_path() {
    if (const char* p = std::getenv("SOFTNET_CLI_PATH")) return p;
    return "./softnet";
}

int run(const std::string& args) {
    std::string cmd = cli_path() + " " + args + " > /dev/null 2> /dev/null";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

void write(const std::string& path, const std::string& content) {
    std::ofstream f(path);
    f << content;
}

} // namespace

TEST_CASE("cli exit codes" * doctest::skip(std::getenv("SOFTNET_CLI_PATH") == nullptr)) {
    write("/tmp/softnet-cli-two.txt", "a,b\nb,c\n");
    CHECK(run("solve /tmp/softnet-cli-two.txt --level --report /tmp/softnet-cli-rep.json -o /tmp/softnet-cli-net.nwk") == 0);
    CHECK(run("check /tmp/softnet-cli-net.nwk /tmp/softnet-cli-two.txt") == 0);

    // a tree cannot represent the incompatible pair: exit 1 and the missing
    // cluster is listed
    write("/tmp/softnet-cli-tree.nwk", "((a,b),c);\n");
    CHECK(run("check /tmp/softnet-cli-tree.nwk /tmp/softnet-cli-two.txt") == 1);

    // malformed input: exit 3
    write("/tmp/softnet-cli-bad.txt", "a,\nb\n");
    CHECK(run("solve /tmp/softnet-cli-bad.txt --level") == 3);
    write("/tmp/softnet-cli-full.txt", "a,b\na\nb\n");
    CHECK(run("solve /tmp/softnet-cli-full.txt --level") == 3);

    // both or neither mode flags: exit 3
    CHECK(run("solve /tmp/softnet-cli-two.txt") == 3);
    CHECK(run("solve /tmp/softnet-cli-two.txt --level --reticulation") == 3);

    // a starved branch budget is inconclusive, not a refutation: exit 2
    CHECK(run("solve /tmp/softnet-cli-two.txt --level --branch-cap 0") == 2);

    // clusters-from-trees with mismatched leaf sets: exit 3
    write("/tmp/softnet-cli-trees.txt", "(a,(b,c));\n((a,b),d);\n");
    CHECK(run("clusters-from-trees /tmp/softnet-cli-trees.txt -o /dev/null") == 3);

    // JSON network output feeds back into check
    CHECK(run("solve /tmp/softnet-cli-two.txt --level --format json --report /dev/null -o /tmp/softnet-cli-net.json") == 0);
    CHECK(run("check /tmp/softnet-cli-net.json /tmp/softnet-cli-two.txt") == 0);

    // oracle with pinned regression counts
    CHECK(run("oracle /tmp/softnet-cli-two.txt --reticulation --max-parameter 2 --pin-counts --report /tmp/softnet-cli-oracle.json") == 0);
    {
        std::ifstream f("/tmp/softnet-cli-oracle.json");
        std::stringstream ss;
        ss << f.rdbuf();
        CHECK(ss.str().find("pinned_counts") != std::string::npos);
    }
}
