// End-to-end checks of the command-line tool: exit codes, file formats and
// byte-level determinism across repeated runs.

#include "heymw/manifest.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string cli_path() { return HEYMW_CLI_PATH; }

int run(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / "heymw_cli_scratch" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("exit codes") {
    const fs::path d = fresh_dir("codes");
    CHECK(run("integrate --r0 1 --w0 0 --u0 0 --rho-max 5 --out " + (d / "ok").string()) == 0);
    // E0 < 0
    CHECK(run("integrate --r0 0.75 --w0 0.4 --u0 0.2 --out " + (d / "bad").string()) == 2);
    // symmetric case rejected by the asym precondition
    CHECK(run("asym --r0 0.75 --n 0 --m 1 --out " + (d / "sym").string()) == 2);
    // missing required flag
    CHECK(run("integrate --w0 0 --u0 0") == 2);
    // non-regular datum cannot be built
    CHECK(run("build --r0 0.75 --w0 0.5 --u0 0 --out " + (d / "nb").string()) == 2);
}

TEST_CASE("trajectory file format") {
    const fs::path d = fresh_dir("fmt");
    REQUIRE(run("integrate --r0 1 --w0 0 --u0 0 --rho-max 3 --out " + d.string()) == 0);
    std::ifstream in(d / "trajectory.dat");
    std::string header;
    std::getline(in, header);
    CHECK(header == "# rho r N w U kappa zeta");
    double rho, r, N, w, U, kappa, zeta;
    int rows = 0;
    while (in >> rho >> r >> N >> w >> U >> kappa >> zeta) {
        CHECK(r == 1.0);  // fixed point columns are constant
        CHECK(w == 0.0);
        ++rows;
    }
    CHECK(rows > 10);

    // manifest lists the file with a matching checksum
    const heymw::RunManifest m = heymw::RunManifest::parse(slurp(d / "manifest.json"));
    REQUIRE(m.outputs.size() == 1);
    CHECK(m.outputs[0].path == "trajectory.dat");
    CHECK(m.outputs[0].checksum == heymw::checksum_file((d / "trajectory.dat").string()));
}

TEST_CASE("repeated runs are byte-identical") {
    const fs::path d1 = fresh_dir("det1");
    const fs::path d2 = fresh_dir("det2");
    const std::string flags = "shoot --r0 0.75 --parity odd --n-max 1 --tol 1e-10 --out ";
    REQUIRE(run(flags + d1.string()) == 0);
    REQUIRE(run(flags + d2.string()) == 0);
    CHECK(slurp(d1 / "shoot.dat") == slurp(d2 / "shoot.dat"));

    // manifests agree up to the wall-time field
    heymw::RunManifest a = heymw::RunManifest::parse(slurp(d1 / "manifest.json"));
    heymw::RunManifest b = heymw::RunManifest::parse(slurp(d2 / "manifest.json"));
    a.wall_time_ms = b.wall_time_ms = 0.0;
    CHECK(a == b);
}

TEST_CASE("shoot table prints 12 decimals") {
    const fs::path d = fresh_dir("dec");
    REQUIRE(run("shoot --r0 2 --parity odd --n-max 0 --out " + d.string()) == 0);
    std::ifstream in(d / "shoot.dat");
    std::string header, line;
    std::getline(in, header);
    std::getline(in, line);
    // "0 x.xxxxxxxxxxxx ..." -> the fractional part of each column is 12 digits
    const auto dot = line.find('.');
    REQUIRE(dot != std::string::npos);
    const auto space = line.find(' ', dot);
    CHECK(space - dot - 1 == 12);
}

TEST_CASE("verify subcommand passes on a healthy build") {
    CHECK(run("verify") == 0);
}

TEST_CASE("export-figure emits plot data") {
    // nothing requested: error, no files
    const fs::path none = fresh_dir("exp_none");
    CHECK(run("export-figure --r0 0.75 --out " + none.string()) == 2);
    CHECK_FALSE(fs::exists(none / "manifest.json"));

    // one asymmetric pair: the w-curve crosses zero twice on the left and
    // never on the right, the signature of 0 forward / 2 backward zeros
    const fs::path d = fresh_dir("exp_pair");
    REQUIRE(run("export-figure --r0 0.75 --pair 0,2 --points 401 --out " + d.string()) == 0);
    REQUIRE(fs::exists(d / "w_n=0_m=2.dat"));
    REQUIRE(fs::exists(d / "N_n=0_m=2.dat"));
    std::ifstream in(d / "w_n=0_m=2.dat");
    double x, y, prev = 0.0, prev_x = 0.0;
    int left = 0, right = 0;
    bool have_prev = false;
    while (in >> x >> y) {
        if (have_prev && prev * y < 0.0) (0.5 * (prev_x + x) < 0.0 ? left : right) += 1;
        if (y != 0.0) {
            prev = y;
            prev_x = x;
            have_prev = true;
        }
    }
    CHECK(left == 2);
    CHECK(right == 0);

    // every emitted file appears in the manifest with a matching checksum
    const heymw::RunManifest m = heymw::RunManifest::parse(slurp(d / "manifest.json"));
    CHECK(m.outputs.size() == 2);
    for (const auto& f : m.outputs)
        CHECK(f.checksum == heymw::checksum_file((d / f.path).string()));
}

TEST_CASE("export-figure mu curves decrease over the window") {
    const fs::path d = fresh_dir("exp_mu");
    REQUIRE(run("export-figure --r0 0.9 --mu 0 --out " + d.string()) == 0);
    std::ifstream in(d / "mu_0.dat");
    double w0, u0, prev = 0.0;
    int rows = 0;
    while (in >> w0 >> u0) {
        if (rows > 0) CHECK(u0 < prev);
        prev = u0;
        ++rows;
    }
    CHECK(rows == 65);
}

TEST_SUITE_END();
