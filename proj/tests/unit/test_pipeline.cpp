#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <unistd.h>

#include "oracles.hpp"
#include "textfract/pipeline/analyze.hpp"
#include "textfract/pipeline/commands.hpp"
#include "textfract/pipeline/config.hpp"
#include "textfract/report/csv.hpp"
#include "textfract/report/json.hpp"
#include "textfract/report/plots.hpp"
#include "textfract/report/svg.hpp"

using namespace textfract;
using namespace textfract::pipeline;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("textfract-unit-" + name + "-" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  out << s;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

AnalysisConfig fixture_config() {
  AnalysisConfig cfg;
  cfg.lexicon_path = std::string(TEXTFRACT_DATA_DIR) + "/lexicons/en.txt";
  return cfg;
}

}  // namespace

TEST(Config, CanonicalIsSortedKeyValueLines) {
  const auto text = fixture_config().canonical();
  std::istringstream in(text);
  std::vector<std::string> keys;
  for (std::string line; std::getline(in, line);) {
    const auto eq = line.find('=');
    ASSERT_NE(eq, std::string::npos) << line;
    keys.push_back(line.substr(0, eq));
  }
  EXPECT_TRUE(std::is_sorted(keys.begin(), keys.end()));
  EXPECT_EQ(std::set<std::string>(keys.begin(), keys.end()).size(), keys.size());
  EXPECT_EQ(fixture_config().digest().size(), 64u);
}

TEST(Config, DigestIgnoresOutputSettings) {
  auto a = fixture_config();
  auto b = a;
  b.set("out_dir", "/elsewhere");
  b.set("jobs", "4");
  b.set("formats", "json");
  EXPECT_EQ(a.digest(), b.digest());
  b.set("seed", "2");
  EXPECT_NE(a.digest(), b.digest());
  auto c = a;
  c.set("detrend_order", "3");
  EXPECT_NE(a.digest(), c.digest());
}

TEST(Config, LexiconEntersDigestByContent) {
  const auto dir = scratch("lexicon");
  write(dir / "a.txt", "Mr.\nDr.\n");
  write(dir / "b.txt", "# same entries\nDr\nMr\n");
  write(dir / "c.txt", "Mr.\n");
  auto a = fixture_config(), b = a, c = a;
  a.lexicon_path = (dir / "a.txt").string();
  b.lexicon_path = (dir / "b.txt").string();
  c.lexicon_path = (dir / "c.txt").string();
  EXPECT_EQ(a.digest(), b.digest());
  EXPECT_NE(a.digest(), c.digest());
  fs::remove_all(dir);
}

TEST(Config, SetParsesAndRejects) {
  AnalysisConfig cfg;
  cfg.set("unit", "chars");
  EXPECT_EQ(cfg.unit, corpus::LengthUnit::Characters);
  cfg.set("scale_grid", "dyadic");
  EXPECT_EQ(cfg.scale_grid, ScaleGrid::Dyadic);
  cfg.set("q_step", "0.5");
  EXPECT_EQ(cfg.q_grid().size(), 17u);
  EXPECT_THROW(cfg.set("no_such_key", "1"), Error);
  EXPECT_THROW(cfg.set("surrogates", "-1"), Error);
  EXPECT_THROW(cfg.set("q_min", "abc"), Error);
  EXPECT_THROW(cfg.set("formats", "csv,pdf"), Error);
  EXPECT_THROW(cfg.set("unit", "bytes"), Error);
}

TEST(Config, ValidateRejectsInconsistentRanges) {
  AnalysisConfig cfg;
  cfg.q_min = 2.0;
  cfg.q_max = -2.0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = AnalysisConfig{};
  cfg.detrend_order = -1;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = AnalysisConfig{};
  EXPECT_NO_THROW(cfg.validate());
}

TEST(Config, LoadFileReportsLineNumbers) {
  const auto dir = scratch("config");
  write(dir / "ok.conf", "# analysis\nseed = 7\n\nscale_grid=dyadic  # trailing comment\n");
  write(dir / "bad.conf", "seed=7\nthis line has no equals\n");
  AnalysisConfig cfg;
  cfg.load_file((dir / "ok.conf").string());
  EXPECT_EQ(cfg.seed, 7u);
  EXPECT_EQ(cfg.scale_grid, ScaleGrid::Dyadic);
  try {
    cfg.load_file((dir / "bad.conf").string());
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos) << e.what();
  }
  EXPECT_THROW(cfg.load_file((dir / "missing.conf").string()), Error);
  fs::remove_all(dir);
}

TEST(Config, DyadicScalesArePowersOfTwo) {
  AnalysisConfig cfg;
  cfg.scale_grid = ScaleGrid::Dyadic;
  cfg.scale_min = 32;
  EXPECT_EQ(cfg.scales(65536), (std::vector<std::size_t>{32, 64, 128, 256, 512, 1024, 2048, 4096, 8192}));
}

TEST(Config, DeriveSeedIsDeterministicAndSpread) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t stream : {0u, 1u}) {
    for (std::uint64_t i = 0; i < 200; ++i) {
      EXPECT_EQ(derive_seed(1, stream, i), derive_seed(1, stream, i));
      seen.insert(derive_seed(1, stream, i));
    }
  }
  EXPECT_EQ(seen.size(), 400u);
  EXPECT_NE(derive_seed(1, 0, 0), derive_seed(2, 0, 0));
}

TEST(SeriesCsv, TwoColumnsWithHeader) {
  EXPECT_EQ(parse_series_csv("index,value\n1,3\n2,4.5\n# note\n3,1e1\n"), (std::vector<double>{3, 4.5, 10}));
}

TEST(SeriesCsv, SingleColumnWithoutHeader) {
  EXPECT_EQ(parse_series_csv("7\n8\r\n\n9\n"), (std::vector<double>{7, 8, 9}));
}

TEST(SeriesCsv, MalformedRowThrows) {
  EXPECT_THROW(parse_series_csv("index,value\n1,3\n2,x\n"), Error);
  EXPECT_THROW(parse_series_csv("index,value\n"), Error);
}

TEST(Slice, BoundsAndRebasing) {
  SeriesData d;
  d.values = {1, 2, 3, 4, 5, 6};
  d.full_length = 6;
  d.to = 6;
  apply_slice(d, 2, 5);
  EXPECT_EQ(d.values, (std::vector<double>{2, 3, 4, 5}));
  apply_slice(d, 3, 4);
  EXPECT_EQ(d.values, (std::vector<double>{3, 4}));
  EXPECT_THROW(apply_slice(d, 0, 2), Error);
  EXPECT_THROW(apply_slice(d, 4, 3), Error);
  EXPECT_THROW(apply_slice(d, 1, 7), Error);
}

TEST(Csv, QuotingAndNumbers) {
  report::CsvTable t({"a", "b"});
  t.note("k", "v");
  t.add_row({"plain", "with,comma"});
  t.add_row({"say \"hi\"", "line\nbreak"});
  EXPECT_EQ(t.str(), "# k=v\na,b\nplain,\"with,comma\"\n\"say \"\"hi\"\"\",\"line\nbreak\"\n");
  EXPECT_EQ(report::format_number(0.1), "0.1");
  EXPECT_EQ(report::format_number(std::nan("")), "nan");
  EXPECT_EQ(report::format_number(-INFINITY), "-inf");
  EXPECT_EQ(report::format_number(1.0 / 3.0), "0.333333333333");
}

TEST(Json, MfdfaFieldsPresent) {
  const auto r = run_mfdfa(generate_fgn(0.7, 4096, 2));
  const auto j = report::to_json(r);
  for (const char* k : {"H", "sigma_H", "delta_alpha", "generalized_hurst", "singularity"}) EXPECT_TRUE(j.contains(k)) << k;
  EXPECT_DOUBLE_EQ(j["H"].get<double>(), hurst_exponent(r.hurst));
}

TEST(Svg, WellFormedAndEscaped) {
  report::Plot p("a < b & c", "x", "y", true, true);
  p.points({1, 10, 100}, {1, 0.1, 0.01}, "#1f77b4", "pts");
  const auto doc = p.render(400, 300);
  EXPECT_EQ(doc.rfind("<svg", 0), 0u);
  EXPECT_NE(doc.find("</svg>"), std::string::npos);
  EXPECT_NE(doc.find("a &lt; b &amp; c"), std::string::npos);
}

TEST(Names, UniqueStems) {
  EXPECT_EQ(unique_names({"a/x.txt", "b/x.txt", "y.csv", "c/x.md"}),
            (std::vector<std::string>{"x", "x-2", "y", "x-3"}));
}

TEST(Batch, SortedByPathAndFailuresIsolated) {
  std::vector<Input> in{{"c"}, {"a"}, {"b"}};
  std::atomic<int> calls{0};
  const auto items = run_batch<int>(in, 2, [&](const Input& i) {
    ++calls;
    if (i.path == "b") throw Error(ErrorKind::Io, "boom");
    return static_cast<int>(i.path[0]);
  });
  ASSERT_EQ(items.size(), 3u);
  EXPECT_EQ(calls.load(), 3);
  EXPECT_EQ(items[0].input.path, "a");
  EXPECT_EQ(items[1].input.path, "b");
  EXPECT_FALSE(items[1].result);
  EXPECT_EQ(items[1].error, "io: boom");
  EXPECT_EQ(*items[2].result, 'c');
  Log quiet(true);
  EXPECT_EQ(finish(items, quiet), kPartial);
}

TEST(Analyze, ShortTextWarnsAndRecordsStageErrors) {
  const auto dir = scratch("short");
  write(dir / "t.txt", "One two three. Four five. Six seven eight nine.\n");
  auto cfg = fixture_config();
  const auto d = load_input({(dir / "t.txt").string()}, cfg, cfg.lexicon());
  EXPECT_EQ(d.values, (std::vector<double>{3, 2, 4}));
  const auto r = analyze(d, cfg, cfg.digest());
  ASSERT_FALSE(r.data.warnings.empty());
  EXPECT_NE(r.data.warnings.front().find("below 5000 sentences"), std::string::npos);
  EXPECT_TRUE(r.stage_errors.count("mfdfa"));
  EXPECT_TRUE(r.stage_errors.count("surrogates"));
  EXPECT_FALSE(r.mfdfa);
  fs::remove_all(dir);
}

TEST(Analyze, CascadeSeriesMatchesAnalyticWidth) {
  auto cfg = fixture_config();
  cfg.scale_grid = ScaleGrid::Dyadic;
  cfg.scale_min = 32;
  cfg.surrogates = 2;
  SeriesData d;
  d.values = generate_binomial_cascade(0.3, 14).values;
  d.full_length = d.to = d.values.size();
  const auto r = analyze(d, cfg, cfg.digest());
  ASSERT_TRUE(r.mfdfa);
  EXPECT_NEAR(*r.delta_alpha(), std::log2(7.0 / 3.0), 0.15);
  EXPECT_NEAR(*r.hurst(), oracle::cascade_h(0.3, 2.0), 0.05);
  ASSERT_TRUE(r.shuffled && r.phase);
  EXPECT_EQ(r.shuffled->runs.size(), 2u);
  const auto j = to_json(r, cfg);
  EXPECT_EQ(j["provenance"]["config_digest"], cfg.digest());
}

TEST(Analyze, SurrogatesReproducible) {
  AnalysisConfig cfg;
  cfg.surrogates = 3;
  const auto s = generate_fgn(0.7, 4096, 4);
  const auto a = run_surrogates(s, cfg, SurrogateKind::Shuffled);
  const auto b = run_surrogates(s, cfg, SurrogateKind::Shuffled);
  ASSERT_EQ(a.runs.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(a.runs[i].seed, b.runs[i].seed);
    EXPECT_EQ(a.runs[i].hurst, b.runs[i].hurst);
  }
  EXPECT_NE(a.runs[0].seed, a.runs[1].seed);
}

TEST(Commands, AnalyzeWritesReportsAndIsRepeatable) {
  const auto dir = scratch("cmd");
  std::string csv = "index,value\n";
  const auto s = generate_fgn(0.7, 4096, 5);
  for (std::size_t i = 0; i < s.size(); ++i) csv += std::to_string(i + 1) + "," + report::format_number(s.values[i]) + "\n";
  write(dir / "fgn.csv", csv);
  auto cfg = fixture_config();
  cfg.surrogates = 2;
  Log log(true);
  const std::vector<Input> in{{(dir / "fgn.csv").string(), InputKind::SeriesCsv}};
  cfg.out_dir = (dir / "one").string();
  EXPECT_EQ(cmd_analyze(in, cfg, log), kOk);
  cfg.out_dir = (dir / "two").string();
  cfg.jobs = 2;
  EXPECT_EQ(cmd_analyze(in, cfg, log), kOk);
  for (const char* f : {"fgn/report.json", "fgn/fluctuation.csv", "fgn/spectrum.csv", "corpus.json"}) {
    ASSERT_TRUE(fs::exists(dir / "one" / f)) << f;
    EXPECT_EQ(slurp(dir / "one" / f), slurp(dir / "two" / f)) << f;
  }
  EXPECT_EQ(cmd_analyze({{(dir / "missing.txt").string()}}, cfg, log), kFatal);
  EXPECT_EQ(cmd_analyze({in[0], {(dir / "missing.txt").string()}}, cfg, log), kPartial);
  fs::remove_all(dir);
}
