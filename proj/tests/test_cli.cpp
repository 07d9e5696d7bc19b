#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(WGF_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write_config(const std::string& name, const std::string& text) {
    const auto path = fs::temp_directory_path() / ("wgf_cli_test_" + name + ".conf");
    std::ofstream(path) << text;
    return path;
}

const char* kSmall = R"([system]
L = 6
beta = 0.2
beta1 = 6.5
[modulation]
type = harmonic
a = 3
omega = 8
b = 0.6
[propagate]
z_max = 2
stride = 20
)";

}  // namespace

TEST_CASE("command line") {
    const auto cfg = write_config("ok", kSmall);
    const auto out = fs::temp_directory_path() / "wgf_cli_test_out";
    fs::remove_all(out);
    const std::string common = "-c " + cfg.string() + " -o " + out.string();

    CHECK(run("propagate " + common) == 0);
    CHECK(fs::exists(out / "trace.csv"));
    CHECK(fs::exists(out / "intensity.csv"));
    CHECK(run("spectrum " + common + " --modes") == 0);
    CHECK(run("fbm " + common) == 0);
    CHECK(run("markovian " + common) == 0);

    CHECK(run("propagate -c " + write_config("bad", std::string(kSmall) + "Zprime = 1\n").string()) == 1);
    CHECK(run("propagate " + common + " --set L=0") == 1);
    CHECK(run("propagate -c /nonexistent/file.conf") == 1);
    CHECK(run("frobnicate") == 1);
    CHECK(run("dynloc " + common) != 0);  // needs a step profile
}
