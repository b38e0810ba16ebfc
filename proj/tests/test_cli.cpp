#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Run
{
    int code;
    std::string out; // stdout and stderr interleaved
};

Run run(const std::string& args)
{
    const std::string cmd = std::string(POLYNOMIOGRAM_CLI) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe)
        return {-1, ""};
    std::string out;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0)
        out.append(buf.data(), n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

class Cli : public ::testing::Test
{
protected:
    void SetUp() override
    {
        dir_ = fs::temp_directory_path() /
               ("polynomiogram_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path write(const std::string& name, const std::string& text)
    {
        const fs::path p = dir_ / name;
        std::ofstream(p) << text;
        return p;
    }

    fs::path dir_;
};

std::vector<std::string> lines(const std::string& s)
{
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);)
        out.push_back(l);
    return out;
}

} // namespace

TEST_F(Cli, RootsOfXSquaredPlusOne)
{
    const auto r = run("roots -- 1 0 1");
    ASSERT_EQ(r.code, 0) << r.out;
    const auto l = lines(r.out);
    ASSERT_EQ(l.size(), 2u);
    double re = 0, im = 0;
    ASSERT_EQ(std::sscanf(l[0].c_str(), "re=%lf im=%lf", &re, &im), 2);
    EXPECT_NEAR(re, 0.0, 1e-15);
    EXPECT_NEAR(im, -1.0, 1e-15);
    ASSERT_EQ(std::sscanf(l[1].c_str(), "re=%lf im=%lf", &re, &im), 2);
    EXPECT_NEAR(im, 1.0, 1e-15);
    EXPECT_NE(l[0].find("residual="), std::string::npos);
}

TEST_F(Cli, RootsTablePointP4)
{
    for (const char* engine : {"companion", "aberth"}) {
        const auto r = run(std::string("roots --engine ") + engine + " -- -1 3 3 1");
        ASSERT_EQ(r.code, 0) << r.out;
        const auto l = lines(r.out);
        ASSERT_EQ(l.size(), 3u);
        std::vector<std::pair<double, double>> z;
        for (const auto& s : l) {
            double re, im;
            ASSERT_EQ(std::sscanf(s.c_str(), "re=%lf im=%lf", &re, &im), 2);
            z.emplace_back(std::round(re * 100) / 100, std::round(im * 100) / 100);
        }
        // Sorted by (Re, Im): the conjugate pair first, lower half first.
        EXPECT_EQ(z[0], std::make_pair(-1.63, -1.09));
        EXPECT_EQ(z[1], std::make_pair(-1.63, 1.09));
        EXPECT_EQ(z[2], std::make_pair(0.26, 0.0));
    }
}

TEST_F(Cli, RootsRejectsDegenerateInput)
{
    EXPECT_EQ(run("roots -- 0 0").code, 2);
    EXPECT_EQ(run("roots -- 5").code, 2);
    EXPECT_EQ(run("roots -- 1 '2 +'").code, 2);
    EXPECT_EQ(run("roots --engine newton -- 1 1").code, 2);
    EXPECT_EQ(run("roots --engine aberth --bits 106 -- 'sqrt(2)' 0 1").code, 0);
}

TEST_F(Cli, RenderFusion)
{
    const auto cfg = write("fusion.toml", "preset = \"fusion\"\n[grid]\nwidth = 64\nheight = 64\n[output]\nimage = \"" +
                                              (dir_ / "f.png").string() + "\"\nroots_csv = \"" +
                                              (dir_ / "f.csv").string() + "\"\n");
    const auto r = run("render " + cfg.string());
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("roots_offered=12\n"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("samples=1\n"), std::string::npos);
    EXPECT_NE(r.out.find("wall_seconds="), std::string::npos);
    EXPECT_NE(r.out.find("pixel_sha256="), std::string::npos);
    EXPECT_TRUE(fs::exists(dir_ / "f.png"));
    EXPECT_EQ(slurp(dir_ / "f.png").substr(1, 3), "PNG");
    const auto csv = lines(slurp(dir_ / "f.csv"));
    ASSERT_EQ(csv.size(), 13u);
    EXPECT_EQ(csv[0], "re,im,sample_index");
}

TEST_F(Cli, RenderCountZeroIsConfigError)
{
    const auto cfg = write("bad.toml", "[plan]\ncount = 0\n");
    const auto r = run("render " + cfg.string());
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("plan.count"), std::string::npos) << r.out;
    const auto typo = write("typo.toml", "[grid]\nwidht = 64\n");
    const auto t = run("render " + typo.string());
    EXPECT_EQ(t.code, 2);
    EXPECT_NE(t.out.find("grid.widht"), std::string::npos) << t.out;
}

TEST_F(Cli, RenderMissingFileIsIoError)
{
    EXPECT_EQ(run("render " + (dir_ / "absent.toml").string()).code, 1);
    const auto cfg = write("c.toml", "preset = \"cubic\"\n[plan]\ncount = 10\n[grid]\nwidth = 16\nheight = 16\n"
                                     "[output]\nimage = \"" + (dir_ / "no/such/dir.png").string() + "\"\n");
    EXPECT_EQ(run("render " + cfg.string()).code, 1);
}

TEST_F(Cli, RenderTwiceIdenticalDump)
{
    auto make = [&](const std::string& tag, int workers) {
        return write(tag + ".toml", "preset = \"hibiscus\"\n[plan]\ncount = 2000\n[grid]\nwidth = 64\nheight = 64\n"
                                    "[output]\nimage = \"" + (dir_ / (tag + ".png")).string() +
                                        "\"\ngrid_dump = \"" + (dir_ / (tag + ".grid")).string() +
                                        "\"\n[run]\nworkers = " + std::to_string(workers) + "\n");
    };
    const auto a = run("render " + make("a", 1).string());
    const auto b = run("render " + make("b", 1).string());
    const auto c = run("render " + make("c", 4).string());
    ASSERT_EQ(a.code, 0) << a.out;
    ASSERT_EQ(b.code, 0) << b.out;
    ASSERT_EQ(c.code, 0) << c.out;
    const std::string ga = slurp(dir_ / "a.grid");
    EXPECT_EQ(ga.rfind("POLYGRID 1 64 64 ", 0), 0u);
    EXPECT_EQ(ga, slurp(dir_ / "b.grid"));
    EXPECT_EQ(ga, slurp(dir_ / "c.grid"));
    EXPECT_EQ(slurp(dir_ / "a.png"), slurp(dir_ / "c.png"));
}

TEST_F(Cli, RenderSeedOverride)
{
    auto cfg = [&](const std::string& tag) {
        return write(tag + ".toml", "preset = \"kac10\"\n[plan]\ncount = 200\n[grid]\nwidth = 32\nheight = 32\n"
                                    "[output]\nimage = \"\"\ngrid_dump = \"" + (dir_ / (tag + ".grid")).string() + "\"\n");
    };
    ASSERT_EQ(run("render " + cfg("s1").string() + " --seed 1").code, 0);
    ASSERT_EQ(run("render " + cfg("s2").string() + " --seed 2").code, 0);
    ASSERT_EQ(run("render " + cfg("d").string()).code, 0);
    EXPECT_NE(slurp(dir_ / "s1.grid"), slurp(dir_ / "s2.grid"));
    EXPECT_EQ(slurp(dir_ / "s1.grid"), slurp(dir_ / "d.grid"));
}

TEST_F(Cli, PresetPrintConfigReloads)
{
    const auto r = run("preset hibiscus --print-config");
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("[family.terms]"), std::string::npos);
    // Shrink the run, keep everything else, and render it.
    std::string text = r.out;
    text.replace(text.find("count = 100000"), 14, "count = 300");
    text.replace(text.find("width = 1024"), 12, "width = 32");
    text.replace(text.find("height = 1024"), 13, "height = 32");
    text.replace(text.find("image = \"polynomiogram.png\""), 27, "image = \"\"");
    const auto cfg = write("h.toml", text);
    const auto rr = run("render " + cfg.string());
    EXPECT_EQ(rr.code, 0) << rr.out;
    EXPECT_NE(rr.out.find("samples=300"), std::string::npos);

    const auto info = run("preset lucas");
    EXPECT_EQ(info.code, 0);
    EXPECT_NE(info.out.find("max_degree=64"), std::string::npos);
    EXPECT_EQ(run("preset mandelbrot").code, 2);
}

TEST_F(Cli, Validate)
{
    const auto json = dir_ / "cubic.json";
    const auto r = run("validate cubic --json " + json.string());
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("cubic.pass=true"), std::string::npos);
    EXPECT_NE(slurp(json).find("\"suite\": \"cubic\""), std::string::npos);

    const auto l = run("validate lucas --n 32");
    EXPECT_EQ(l.code, 0) << l.out;
    EXPECT_NE(l.out.find("lucas.n32_b53.max_distance="), std::string::npos);

    const auto k = run("validate kac --degree 20 --samples 300");
    EXPECT_TRUE(k.code == 0 || k.code == 4) << k.out;
    EXPECT_NE(k.out.find("kac.annulus_fraction="), std::string::npos);

    EXPECT_EQ(run("validate bogus").code, 2);
    EXPECT_EQ(run("validate lucas --bits 64").code, 2);
}

TEST_F(Cli, UsageErrors)
{
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
    EXPECT_EQ(run("--help").code, 0);
}
