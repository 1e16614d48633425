#include "qmsurf/report.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace qmsurf;

TEST(TextFormats, Doubles) {
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(1e-14), "1e-14");
    for (double x : {0.3, 1.0 / 3.0, -2.5e-300, 123456.789}) EXPECT_EQ(parse_double(format_double(x)), x);
    EXPECT_THROW(parse_double("1.5x"), std::invalid_argument);
    EXPECT_THROW(parse_double(""), std::invalid_argument);
}

TEST(TextFormats, Complex) {
    EXPECT_EQ(parse_complex("0.3+1.2i"), Complex(0.3, 1.2));
    EXPECT_EQ(parse_complex("-0.3-1.2i"), Complex(-0.3, -1.2));
    EXPECT_EQ(parse_complex("i"), Complex(0, 1));
    EXPECT_EQ(parse_complex("-i"), Complex(0, -1));
    EXPECT_EQ(parse_complex("2i"), Complex(0, 2));
    EXPECT_EQ(parse_complex("1.5"), Complex(1.5, 0));
    EXPECT_EQ(parse_complex("1e-3+2e+1i"), Complex(1e-3, 20));
    EXPECT_EQ(parse_complex("0.25 + i"), Complex(0.25, 1));
    EXPECT_EQ(format_complex(Complex(0.3, -1.2)), "0.3-1.2i");
    for (Complex z : {Complex(0.1, 0.7), Complex(-1.0 / 3, 2.0 / 7)}) EXPECT_EQ(parse_complex(format_complex(z)), z);
    EXPECT_THROW(parse_complex("x+i"), std::invalid_argument);
}

TEST(TextFormats, ElementsAndBases) {
    QuaternionElement x{Rational(1, 2), -3, 0, Rational(7, 4)};
    EXPECT_EQ(format_element(x), "1/2,-3,0,7/4");
    EXPECT_EQ(parse_element("1/2,-3,0,7/4"), x);
    EXPECT_EQ(parse_element("0.5,-3,0,1.75"), x);
    std::array<QuaternionElement, 4> basis{QuaternionElement{1, 0, 0, 0}, QuaternionElement{0, 1, 0, 0},
                                           QuaternionElement{0, 0, 1, 0},
                                           QuaternionElement{Rational(1, 2), Rational(1, 2), Rational(1, 2),
                                                             Rational(1, 2)}};
    EXPECT_EQ(parse_basis(format_basis(basis)), basis);
    EXPECT_THROW(parse_element("1,2,3"), std::invalid_argument);
    EXPECT_THROW(parse_basis("1,0,0,0;0,1,0,0"), std::invalid_argument);
}

TEST(TextFormats, IntegerListsAndGrids) {
    EXPECT_EQ(parse_int_list("3,2,1"), (std::vector<std::int64_t>{3, 2, 1}));
    EXPECT_TRUE(parse_int_list("").empty());
    EXPECT_THROW(parse_int_list("2.5"), std::invalid_argument);
    GridSpec g = parse_grid("-0.45:0.45:10,0.6:2.4:10");
    EXPECT_EQ(g, GridSpec{});
    EXPECT_EQ(parse_grid(format_grid(g)), g);
    auto pts = grid_points(g);
    ASSERT_EQ(pts.size(), 100u);
    EXPECT_EQ(pts.front(), Complex(-0.45, 0.6));
    EXPECT_EQ(pts.back(), Complex(0.45, 2.4));
    for (auto t : pts) EXPECT_GT(std::abs(t.real()), 1e-3);
    EXPECT_THROW(parse_grid("0:1:2,-1:1:2"), std::invalid_argument);
    EXPECT_THROW(parse_grid("0:1:0,1:2:2"), std::invalid_argument);
}

TEST(TextFormats, Omega) {
    auto d = parse_omega("diag:i,0.2+1.3i");
    EXPECT_EQ(d(0, 0), Complex(0, 1));
    EXPECT_EQ(d(0, 1), Complex(0, 0));
    EXPECT_EQ(d(1, 1), Complex(0.2, 1.3));
    auto f = parse_omega("full:i,0.1,2i");
    EXPECT_EQ(f(0, 1), f(1, 0));
    EXPECT_THROW(parse_omega("diag:i"), std::invalid_argument);
    EXPECT_THROW(parse_omega("i,i"), std::invalid_argument);
}

TEST(Config, JsonRoundTrip) {
    RunConfig c;
    c.a = Rational(-3, 2);
    c.b = 5;
    c.mu = QuaternionElement{0, 3, 1, 0};
    c.taus = {Complex(0.3, 1.2), Complex(-0.1, 0.7)};
    c.theta_eps = 1e-12;
    c.format = OutputFormat::Csv;
    c.ms = {3, 2};
    c.h11 = 7;
    c.extremal = true;
    EXPECT_EQ(config_from_json(to_json(c)), c);
    EXPECT_EQ(config_from_json(json::parse(to_json(c).dump())), c);
    RunConfig d;
    EXPECT_EQ(config_from_json(to_json(d)), d);
}

TEST(Config, FlatFileArguments) {
    std::istringstream in("# sample\na = -1\nb=3\n\nsaturate = false\nextremal = true\ntau = \"0.3+1.2i\"  # point\n");
    EXPECT_EQ(config_file_arguments(in),
              (std::vector<std::string>{"-a", "-1", "-b", "3", "--extremal", "--tau", "0.3+1.2i"}));
    std::istringstream underscores("units_height = 3\nno_saturate\n");
    EXPECT_EQ(config_file_arguments(underscores), (std::vector<std::string>{"--units-height", "3", "--no-saturate"}));
}

TEST(ExitCodes, Mapping) {
    EXPECT_EQ(exit_code(ErrorCode::SplitAlgebra), 2);
    EXPECT_EQ(exit_code(ErrorCode::DefiniteAlgebra), 3);
    EXPECT_EQ(exit_code(ErrorCode::NotClosed), 4);
    EXPECT_EQ(exit_code(ErrorCode::NotUnimodular), 5);
    EXPECT_EQ(exit_code(ErrorCode::RiemannRelationViolation), 6);
    EXPECT_EQ(exit_code(ErrorCode::MissingH11), 1);
}

TEST(Algebra, Reports) {
    auto ok = run_algebra(-1, 3);
    EXPECT_EQ(ok.exit_code, 0);
    EXPECT_EQ(ok.document["algebra"]["discriminant"], "6");
    EXPECT_EQ(run_algebra(1, 1).exit_code, 2);
    EXPECT_EQ(run_algebra(-1, -1).exit_code, 3);
}

TEST(Construct, DefaultPipeline) {
    RunConfig c;
    c.mu = QuaternionElement{0, 3, 1, 0};
    auto r = run_construct(c);
    ASSERT_EQ(r.exit_code, 0) << r.document.dump(2);
    EXPECT_EQ(r.document["order"]["reduced_discriminant"], "6");
    EXPECT_EQ(r.document["elementary_divisors"], json::parse("[1,1,1,1]"));
    bool found = false;
    for (const auto& u : r.document["units"])
        if (u["unit"]["pretty"] == "2+j") found = true;
    EXPECT_TRUE(found);
    for (const auto& [key, value] : r.document["checks"].items()) EXPECT_TRUE(value.get<bool>()) << key;
}

TEST(Construct, SearchedMuIsDeterministic) {
    RunConfig c;
    auto first = run_construct(c);
    auto second = run_construct(c);
    ASSERT_EQ(first.exit_code, 0);
    EXPECT_EQ(first.document.dump(), second.document.dump());
    EXPECT_EQ(first.document["mu"]["source"], "search");
}

TEST(Construct, NonMaximalOrderFailsPolarization) {
    RunConfig c;
    c.saturate = false;
    auto r = run_construct(c);
    EXPECT_EQ(r.exit_code, 5);
    EXPECT_EQ(r.document["status"], "error");
}

TEST(Construct, AlgebraErrorsPropagate) {
    RunConfig c;
    c.a = 1;
    c.b = 1;
    EXPECT_EQ(run_construct(c).exit_code, 2);
    c.a = -1;
    c.b = -1;
    EXPECT_EQ(run_construct(c).exit_code, 3);
    RunConfig bad;
    bad.order_basis = std::array<QuaternionElement, 4>{QuaternionElement{1, 0, 0, 0}, QuaternionElement{0, 1, 0, 0},
                                                       QuaternionElement{0, 0, 2, 0}, QuaternionElement{0, 0, 0, 1}};
    EXPECT_EQ(run_construct(bad).exit_code, 4);
}

TEST(Fibers, RowsAndCsv) {
    RunConfig c;
    c.taus = {Complex(0.3, 1.2), Complex(0, 1)};
    auto r = run_fibers(c);
    ASSERT_EQ(r.exit_code, 0);
    ASSERT_EQ(r.document["rows"].size(), 2u);
    EXPECT_EQ(r.document["rows"][0]["class"], "SmoothGenusTwo");
    EXPECT_EQ(r.document["rows"][1]["class"], "TwoEllipticCurves");
    EXPECT_EQ(r.text.substr(0, r.text.find('\n')), "re_tau,im_tau,class,min_even_null,ks_norm,riemann_residual");
    EXPECT_EQ(std::count(r.text.begin(), r.text.end(), '\n'), 3);
    EXPECT_EQ(run_fibers(c).text, r.text);
}

TEST(Fibers, OmegaDirect) {
    RunConfig c;
    c.omega_direct = "diag:i,i";
    auto r = run_fibers(c);
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_EQ(r.document["rows"][0]["class"], "TwoEllipticCurves");
    c.omega_direct = "full:i,2i,i";
    auto bad = run_fibers(c);
    EXPECT_EQ(bad.exit_code, 6);
    EXPECT_EQ(bad.document["rows"][0]["class"], "error:NotSiegel");
}

TEST(Leray, Report) {
    RunConfig c;
    c.ms = {3, 2};
    c.h11 = 20;
    c.extremal = true;
    auto r = run_leray(c);
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_EQ(r.document["ranks"]["rank_L0L1"], 4);
    EXPECT_EQ(r.document["verdict"]["rho"], 20);
    c.h11 = 3;
    EXPECT_EQ(run_leray(c).exit_code, 1);
}
