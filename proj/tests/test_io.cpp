#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "support.hpp"
#include "ueig/cli.hpp"
#include "ueig/io.hpp"

using namespace ueig;

namespace {

std::string data(const std::string& name) { return std::string(UEIG_DATA_DIR) + "/" + name; }

StateFile parse_text(const std::string& s) {
  std::istringstream in(s);
  return parse_state(in);
}

std::string temp_file(const std::string& name, const std::string& body) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << body;
  return p.string();
}

double field(const std::string& text, const std::string& key) {
  const auto p = text.find(key + ": ");
  if (p == std::string::npos) return std::numeric_limits<double>::quiet_NaN();
  return std::stod(text.substr(p + key.size() + 2));
}

}  // namespace

TEST(Parse, ProductKet) {
  const StateFile f = parse_text("format: 1\ndims: [2,2,2]\nnormalize: false\nsymmetry: auto\n1 1 1 1.0 0.0\n");
  EXPECT_EQ(f.dims, (std::vector<std::size_t>{2, 2, 2}));
  ASSERT_EQ(f.amplitudes.size(), 8u);
  EXPECT_EQ(f.amplitudes[0], cplx(1.0));
  for (std::size_t i = 1; i < 8; ++i) EXPECT_EQ(f.amplitudes[i], cplx(0.0));
  EXPECT_FALSE(f.symmetry.has_value());
}

TEST(Parse, ExampleOneFile) {
  const StateFile f = parse_state_file(data("ex41.txt"));
  const auto e = test::example_entries(1);
  for (std::size_t i = 0; i < 8; ++i) EXPECT_LE(std::abs(f.amplitudes[i] - e[i]), 1e-15);
  EXPECT_EQ(f.tensor().symmetry(), SymmetryClass::partial({{0, 1}}));
}

TEST(Parse, IndexOutOfRangeNamesLine) {
  try {
    parse_text("format: 1\ndims: [2,2,2]\n\n1 3 1 1.0 0.0\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
    EXPECT_EQ(std::string(e.what()).rfind("line 4: ", 0), 0u) << e.what();
  }
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse_text("format: 2\ndims: [2]\n"), ParseError);
  EXPECT_THROW(parse_text("dims: [2,2]\ncolour: red\n"), ParseError);
  EXPECT_THROW(parse_text("1 1 1.0 0.0\n"), ParseError);
  EXPECT_THROW(parse_text("dims: [2,2]\n1 1 x 0.0\n"), ParseError);
  EXPECT_THROW(parse_text("dims: [2,2]\n1 1 1.0\n"), ParseError);
  EXPECT_THROW(parse_text("dims: [2,2,2]\nsymmetry: partial:[1,4]\n"), ParseError);
  EXPECT_THROW(parse_text("format: 1\n"), ParseError);
  EXPECT_THROW(parse_text("dims: [2,2]\n1 1 0.5 0.0\n").state(), StateError);
}

TEST(Parse, DeclaredSymmetry) {
  const StateFile f = parse_text("dims: [2,2,2]\nnormalize: true\nsymmetry: partial:[1,2]\n1 1 1 1 0\n1 2 2 1 0\n2 1 2 1 0\n");
  ASSERT_TRUE(f.symmetry.has_value());
  EXPECT_EQ(*f.symmetry, SymmetryClass::partial({{0, 1}}));
  EXPECT_NO_THROW(f.tensor());
  const StateFile bad = parse_text("dims: [2,2,2]\nnormalize: true\nsymmetry: full\n1 2 1 1 0\n");
  EXPECT_THROW(bad.tensor(), SymmetryError);
}

TEST(Emit, RoundTripIsBitExact) {
  std::mt19937_64 rng(91);
  for (int s = 0; s < 10; ++s) {
    const ComplexTensor a = test::random_tensor({2, 3, 2}, rng);
    StateFile f;
    f.dims = a.dims();
    f.amplitudes.assign(a.entries().begin(), a.entries().end());
    f.symmetry = SymmetryClass::none();
    const StateFile g = parse_text(emit_state(f));
    EXPECT_EQ(g.dims, f.dims);
    EXPECT_EQ(g.amplitudes, f.amplitudes);
    EXPECT_EQ(g.symmetry, f.symmetry);
  }
}

TEST(ExportSdp, Format) {
  ConeProblem p;
  p.objective = Eigen::Vector2d(0, 1);
  p.eq_matrix = Eigen::RowVector2d(1, 0);
  p.eq_rhs = Eigen::VectorXd::Ones(1);
  PsdBlock b;
  b.index.resize(2, 2);
  b.index << 0, 1, 1, 0;
  p.blocks.push_back(b);
  std::ostringstream out;
  export_sdp(out, p);
  EXPECT_EQ(out.str(),
            "format: 1\nvariables 2\nvariable_bound inf\nobjective 1\n1 1\nequalities 1 1\n0 0 1\nrhs 0 1\n"
            "psd_blocks 1\nblock 2 2\n0 0 0\n0 1 1\n1 1 0\nface 0\n");
}

TEST(Cli, ExampleOneCertified) {
  CliOptions o;
  o.input = data("ex41.txt");
  std::ostringstream out, err;
  EXPECT_EQ(run(o, out, err), kCertified) << err.str();
  EXPECT_NEAR(field(out.str(), "lambda_max"), 0.9317, 5e-5);
  EXPECT_NE(out.str().find("certificate: certified-global"), std::string::npos);
  EXPECT_NE(out.str().find("json: {"), std::string::npos);
}

TEST(Cli, OracleOnlyIsUncertified) {
  CliOptions o;
  o.input = data("ex42.txt");
  o.oracle_only = true;
  o.seed = 7;
  std::ostringstream out, err;
  EXPECT_EQ(run(o, out, err), kUncertified) << err.str();
  EXPECT_GE(field(out.str(), "lambda_max"), 0.9660);
  EXPECT_NE(out.str().find("upper_bound: none"), std::string::npos);
}

TEST(Cli, BadInputIsError) {
  CliOptions o;
  o.input = temp_file("ueig_bad_index.txt", "format: 1\ndims: [2,2]\n3 1 1.0 0.0\n");
  std::ostringstream out, err;
  EXPECT_EQ(run(o, out, err), kError);
  EXPECT_NE(err.str().find("line 3"), std::string::npos) << err.str();
  o.input = "/nonexistent/state.txt";
  EXPECT_EQ(run(o, out, err), kError);
}

TEST(Cli, ExportAndOutputFiles) {
  CliOptions o;
  o.input = data("ex44.txt");
  o.export_sdp = (std::filesystem::temp_directory_path() / "ueig_ex44.sdp").string();
  o.output = (std::filesystem::temp_directory_path() / "ueig_ex44.report").string();
  std::ostringstream out, err;
  EXPECT_EQ(run(o, out, err), kCertified) << err.str();
  std::ifstream sdp(o.export_sdp), rep(o.output);
  std::string first;
  std::getline(sdp, first);
  EXPECT_EQ(first, "format: 1");
  std::stringstream r;
  r << rep.rdbuf();
  EXPECT_EQ(r.str(), out.str());
  EXPECT_NE(out.str().find("separable: true"), std::string::npos);
}

TEST(Cli, ArgumentParsing) {
  std::vector<std::string> args{"ueig", "--input", "x.txt", "--mode", "sym", "--seed", "3", "--oracle-only"};
  std::vector<char*> argv;
  for (auto& s : args) argv.push_back(s.data());
  CLI::App app;
  CliOptions o;
  add_options(app, o);
  app.parse(static_cast<int>(argv.size()), argv.data());
  EXPECT_EQ(o.mode, "sym");
  EXPECT_EQ(o.seed, 3u);
  EXPECT_TRUE(o.oracle_only);
  EXPECT_EQ(parse_route(o.mode), Route::Symmetric);

  std::vector<std::string> both{"ueig", "--input", "x.txt", "--oracle-only", "--sdp-only"};
  std::vector<char*> bv;
  for (auto& s : both) bv.push_back(s.data());
  CLI::App app2;
  CliOptions o2;
  add_options(app2, o2);
  EXPECT_THROW(app2.parse(static_cast<int>(bv.size()), bv.data()), CLI::ParseError);
}
