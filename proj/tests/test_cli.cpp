#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

#include "masslab/io.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;

namespace {

// Runs the installed CLI and returns its exit code. With raw = true the
// argument string is a complete shell command (used for environment setup).
int run_cli(const std::string& args, bool raw = false) {
    const std::string cmd = (raw ? args : std::string(MASSLAB_CLI_PATH) + " " + args) + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("masslab_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("solve writes the hinged-beam spectrum deterministically") {
    const fs::path dir = fresh_dir("solve");
    const masslab::ProblemSpec spec = oracles::polyharmonic(2, 1, 32, 4);
    masslab::write_text_file((dir / "beam.json").string(), masslab::problem_to_json(spec, nullptr));

    const std::string base = "solve --problem " + (dir / "beam.json").string() + " --count 3 --out ";
    REQUIRE(run_cli(base + (dir / "a").string()) == 0);
    REQUIRE(run_cli(base + (dir / "b").string()) == 0);

    const std::string eig = masslab::read_text_file((dir / "a" / "eigenvalues.csv").string());
    CHECK(eig.rfind("n,lambda,mu", 0) == 0);
    const std::string first = eig.substr(eig.find('\n') + 1, eig.find('\n', eig.find('\n') + 1) - eig.find('\n') - 1);
    const double lambda1 = std::stod(first.substr(first.find(',') + 1));
    CHECK(lambda1 == doctest::Approx(97.409).epsilon(1e-3));

    CHECK(masslab::read_text_file((dir / "a" / "eigenvalues.csv").string()) ==
          masslab::read_text_file((dir / "b" / "eigenvalues.csv").string()));
    CHECK(masslab::read_text_file((dir / "a" / "eigenfunctions.csv").string()) ==
          masslab::read_text_file((dir / "b" / "eigenfunctions.csv").string()));
}

TEST_CASE("solve rejects an oversized count with exit 2") {
    const fs::path dir = fresh_dir("badcount");
    const masslab::ProblemSpec spec = oracles::polyharmonic(1, 1, 4, 1);
    masslab::write_text_file((dir / "p.json").string(), masslab::problem_to_json(spec, nullptr));
    CHECK(run_cli("solve --problem " + (dir / "p.json").string() + " --count 99 --out " + dir.string()) == 2);
}

TEST_CASE("gradcheck passes on a simple eigenvalue and rejects split clusters") {
    const fs::path dir = fresh_dir("gradcheck");
    {
        const masslab::ProblemSpec spec = oracles::polyharmonic(1, 1, 16, 2);
        masslab::write_text_file((dir / "p.json").string(), masslab::problem_to_json(spec, nullptr));
        CHECK(run_cli("gradcheck --problem " + (dir / "p.json").string() + " --F 1 --h 1 --directions 5 --out " +
                      dir.string()) == 0);
    }
    {
        const oracles::DoubleCluster& fixture = oracles::shared_double_cluster();
        masslab::write_text_file((dir / "double.json").string(),
                                 masslab::problem_to_json(fixture.spec, &fixture.rho));
        CHECK(run_cli("gradcheck --problem " + (dir / "double.json").string() +
                      " --F 1 --h 1 --directions 3 --out " + dir.string()) == 2);
    }
    {
        // a degenerate step drowns the quotient in roundoff; the failed check
        // must surface as exit code 4
        CHECK(run_cli("gradcheck --problem " + (dir / "p.json").string() +
                      " --F 1 --h 1 --directions 3 --step 1e-13 --out " + dir.string()) == 4);
    }
}

TEST_CASE("the environment seed steers random draws unless --seed overrides") {
    const fs::path dir = fresh_dir("seed");
    const masslab::ProblemSpec spec = oracles::polyharmonic(1, 1, 16, 2);
    masslab::write_text_file((dir / "p.json").string(), masslab::problem_to_json(spec, nullptr));
    const std::string args = "gradcheck --problem " + (dir / "p.json").string() + " --F 1 --directions 4 --out ";

    REQUIRE(run_cli("env MASSLAB_SEED=7 " + std::string(MASSLAB_CLI_PATH) + " " + args + (dir / "a").string(),
                    true) == 0);
    REQUIRE(run_cli("env MASSLAB_SEED=7 " + std::string(MASSLAB_CLI_PATH) + " " + args + (dir / "b").string(),
                    true) == 0);
    REQUIRE(run_cli("env MASSLAB_SEED=7 " + std::string(MASSLAB_CLI_PATH) + " " + args + (dir / "c").string() +
                        " --seed 9",
                    true) == 0);

    const std::string a = masslab::read_text_file((dir / "a" / "gradcheck.csv").string());
    const std::string b = masslab::read_text_file((dir / "b" / "gradcheck.csv").string());
    const std::string c = masslab::read_text_file((dir / "c" / "gradcheck.csv").string());
    CHECK(a == b);
    CHECK(a != c);
}

TEST_CASE("verify flags configuration and injected-fault failures") {
    const fs::path dir = fresh_dir("verify");
    CHECK(run_cli("verify --cells '' --out " + (dir / "empty").string()) == 2);
    CHECK(run_cli("verify --cells 1:1 --break-comb --out " + (dir / "fault").string()) == 5);
}

TEST_CASE("weakstar and optimize commands write their artifacts") {
    const fs::path dir = fresh_dir("commands");
    const masslab::ProblemSpec spec = oracles::polyharmonic(1, 1, 32, 2);
    masslab::write_text_file((dir / "p.json").string(), masslab::problem_to_json(spec, nullptr));
    const masslab::ProblemSpec fine = oracles::polyharmonic(1, 1, 128, 2);
    masslab::write_text_file((dir / "fine.json").string(), masslab::problem_to_json(fine, nullptr));

    CHECK(run_cli("weakstar --problem " + (dir / "fine.json").string() + " --theta 0.4 --j 2,4,8,16 --out " +
                  (dir / "w").string()) == 0);
    CHECK(fs::exists(dir / "w" / "weakstar.csv"));

    CHECK(run_cli("optimize --problem " + (dir / "p.json").string() +
                  " --density uniform:1.2 --F 1 --sense min --mass 1.2 --iters 100 --out " +
                  (dir / "o").string()) == 0);
    CHECK(fs::exists(dir / "o" / "trace.csv"));
    CHECK(fs::exists(dir / "o" / "final_density.json"));

    // the trace rows carry monotone objectives for a minimization
    const std::string trace = masslab::read_text_file((dir / "o" / "trace.csv").string());
    CHECK(trace.rfind("iterate,objective,step,pg_norm,bangbang_fraction", 0) == 0);
}

TEST_CASE("missing subcommand or file is a configuration error") {
    CHECK(run_cli("solve --problem /nonexistent.json --out /tmp") == 2);
}
