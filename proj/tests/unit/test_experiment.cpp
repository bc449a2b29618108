#include <cmath>
#include <fstream>

#include "deepsc/error.hpp"
#include "deepsc/experiment/config.hpp"
#include "deepsc/experiment/dataset.hpp"
#include "deepsc/experiment/report.hpp"
#include "deepsc/experiment/runner.hpp"
#include "deepsc/keyvalue.hpp"
#include "deepsc/wav.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace deepsc;
using namespace deepsc::experiment;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small(System system) {
  auto cfg = ExperimentConfig::preset(Scenario::Telephone, system);
  cfg.model.frames = 8;
  cfg.model.frame_len = 16;
  cfg.model.n_se_blocks = 1;
  cfg.model.codec_convs = 1;
  cfg.sequence_length = 128;
  cfg.train_count = 4;
  cfg.test_count = 2;
  cfg.train.epochs = 2;
  cfg.train.batch_size = 2;
  cfg.train.micro_batch = 2;
  cfg.eval.snrs_db = {0, 10};
  cfg.eval.channels = {channel::ChannelKind::awgn(), channel::ChannelKind::rician()};
  return cfg;
}

}  // namespace

TEST_CASE("key-value documents") {
  const auto kv = KeyValues::parse("# comment\n a = 1 \n\nname = x y\nflag = true\n");
  CHECK(kv.get_int("a") == 1);
  CHECK(kv.get_string("name") == "x y");
  CHECK(kv.get_bool("flag"));
  CHECK(kv.get_double("missing", 2.5) == 2.5);
  CHECK_THROWS_AS(kv.get_string("missing"), FormatError);
  CHECK_THROWS_AS(kv.get_int("name"), FormatError);
  CHECK_THROWS_AS(KeyValues::parse("a = 1\na = 2\n"), FormatError);
  CHECK_THROWS_AS(KeyValues::parse("novalue\n"), FormatError);
  CHECK(KeyValues::parse(kv.to_string()).to_string() == kv.to_string());
  CHECK(format_double(0.1) == "0.1");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(split_list("a, b ,c") == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("scenario and system names") {
  CHECK(scenario_rate(Scenario::Telephone) == 8000);
  CHECK(scenario_rate(Scenario::Multimedia) == 44100);
  CHECK(scenario_channel_filters(Scenario::Multimedia) == 16);
  for (auto s : {System::DeepScS, System::CnnOnly, System::Classic, System::SemiTraditional})
    CHECK(parse_system(to_string(s)) == s);
  CHECK_THROWS_AS(parse_scenario("radio"), InvalidArgument);
}

TEST_CASE("experiment config round trip") {
  auto cfg = small(System::DeepScS);
  cfg.seed = 7;
  cfg.apply_seed(7);
  cfg.classic.law = classic::PcmLaw::Uniform16;
  const auto text = cfg.to_text();
  const auto back = ExperimentConfig::from_keyvalues(KeyValues::parse(text));
  CHECK(back.to_text() == text);
  CHECK(back.train.seed == 7);
  CHECK(back.eval.seed == 7);

  const auto mm = ExperimentConfig::from_keyvalues(KeyValues::parse("scenario = multimedia\nsystem = cnn-only\n"));
  CHECK(mm.model.channel_filters == 16);
  CHECK(mm.model.variant == model::Variant::CnnOnly);
  CHECK(ExperimentConfig::preset(Scenario::Telephone, System::SemiTraditional).train.noiseless);
}

TEST_CASE("experiment config validation") {
  auto bad = small(System::DeepScS);
  bad.model.variant = model::Variant::CnnOnly;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = small(System::DeepScS);
  bad.eval.snrs_db = {4, 2};
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = small(System::DeepScS);
  bad.sequence_length = 100;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = small(System::DeepScS);
  bad.model.channel_filters = 16;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  CHECK_THROWS_AS(ExperimentConfig::from_keyvalues(KeyValues::parse("format = other/2\n")), FormatError);
}

TEST_CASE("manifest parsing") {
  const auto entries = parse_manifest("# corpus\n\na.wav,train\n/abs/b.wav , test\nc,d.wav,train\n", "/data");
  REQUIRE(entries.size() == 3);
  CHECK(entries[0].path == fs::path("/data/a.wav"));
  CHECK(entries[0].split == Split::Train);
  CHECK(entries[1].path == fs::path("/abs/b.wav"));
  CHECK(entries[1].split == Split::Test);
  CHECK(entries[2].path == fs::path("/data/c,d.wav"));
  CHECK_THROWS_AS(parse_manifest("a.wav,validation\n"), FormatError);
  CHECK_THROWS_AS(parse_manifest("a.wav\n"), FormatError);
}

TEST_CASE("ingest resamples and fits length") {
  test::TempDir dir("ingest");
  for (int i = 0; i < 3; ++i)
    write_wav(dir.path() / ("f" + std::to_string(i) + ".wav"), test::sine(300 + 100 * i, 16000, 10000 + 30000 * i));
  {
    std::ofstream m(dir.path() / "manifest.csv");
    m << "# three files\nf0.wav,train\nf1.wav,train\nf2.wav,train\n";
  }
  const auto seqs = ingest_dataset(dir.path() / "manifest.csv", Split::Train, 8000);
  // 5000, 20000 and 35000 samples at 8 kHz: 1 + 2 + 3 pieces.
  CHECK(seqs.size() == 6);
  for (const auto& s : seqs) {
    CHECK(s.rate == 8000);
    CHECK(s.size() == 16384);
  }
  const auto again = ingest_dataset(dir.path() / "manifest.csv", Split::Train, 8000);
  for (std::size_t i = 0; i < seqs.size(); ++i) CHECK(again[i].samples == seqs[i].samples);
  CHECK_THROWS_AS(ingest_dataset(dir.path() / "manifest.csv", Split::Test, 8000), InvalidArgument);
  {
    std::ofstream m(dir.path() / "broken.csv");
    m << "missing.wav,test\n";
  }
  CHECK_THROWS_AS(ingest_dataset(dir.path() / "broken.csv", Split::Test, 8000), FormatError);
}

TEST_CASE("synthetic corpus") {
  const auto a = synthesize_corpus(5, 8000, 4096, 42, 0);
  const auto b = synthesize_corpus(5, 8000, 4096, 42, 0);
  const auto c = synthesize_corpus(5, 8000, 4096, 42, 1);
  REQUIRE(a.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(a[i].samples == b[i].samples);
    CHECK(a[i].samples != c[i].samples);
    CHECK(a[i].size() == 4096);
    float peak = 0;
    for (float v : a[i].samples) peak = std::max(peak, std::abs(v));
    CHECK(peak == doctest::Approx(0.95f));
  }
}

TEST_CASE("plot data") {
  MetricReport r1, r2;
  for (double snr : {0.0, 5.0, 10.0}) {
    r1.rows.push_back({channel::ChannelKind::rician(), snr, 0.1, snr, std::nullopt, 2, 42});
    r2.rows.push_back({channel::ChannelKind::rician(), snr, 0.2, snr / 2, std::nullopt, 2, 42});
  }
  std::vector<NamedReport> reports{{"deepsc-s", r1}, {"classic", r2}, {"cnn-only", r1}, {"semi-traditional", r2}};
  const auto files = plot_data(reports);
  const PlotFile* sdr_file = nullptr;
  for (const auto& f : files) {
    CHECK(f.name.find("pesq") == std::string::npos);
    if (f.name == "sdr_db_rician.csv") sdr_file = &f;
  }
  REQUIRE(sdr_file != nullptr);
  std::istringstream in(sdr_file->content);
  std::string header;
  std::getline(in, header);
  CHECK(header == "snr_db,deepsc-s,classic,cnn-only,semi-traditional");
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == 3);
  CHECK_THROWS_AS(plot_data({}), InvalidArgument);

  r1.rows[0].pesq = 3.0;
  const auto with_pesq = plot_data({{"deepsc-s", r1}});
  bool found = false;
  for (const auto& f : with_pesq) found |= f.name == "pesq_rician.csv";
  CHECK(found);
}

TEST_CASE("loss csv") { CHECK(loss_csv({0.5, 0.25}) == "epoch,loss\n1,5.000000000e-01\n2,2.500000000e-01\n"); }

TEST_CASE("classic run is reproducible byte for byte") {
  auto cfg = small(System::Classic);
  test::TempDir a("runa"), b("runb");
  const auto ra = run_classic(cfg, a.path());
  run_classic(cfg, b.path());
  CHECK(ra.rows.size() == 4);
  const auto name = metrics_file_name(System::Classic);
  CHECK(read_text(a.path() / name) == read_text(b.path() / name));
  CHECK(read_text(a.path() / name).rfind("channel,snr_db,mse,sdr_db,pesq,count,seed\n", 0) == 0);
  CHECK(fs::exists(a.path() / "config.txt"));
  CHECK(fs::exists(a.path() / "audio" / "reference_seq0.wav"));
  CHECK(fs::exists(a.path() / "audio" / "rician_+10.0dB_seq0.wav"));
  // The snapshot reproduces the run.
  auto replay = ExperimentConfig::load((a.path() / "config.txt").string());
  test::TempDir c("runc");
  run_classic(replay, c.path());
  CHECK(read_text(c.path() / name) == read_text(a.path() / name));
}

TEST_CASE("train then eval, checkpoint untouched") {
  auto cfg = small(System::DeepScS);
  test::TempDir dir("train");
  const auto ckpt = run_train(cfg, dir.path() / "train");
  CHECK(fs::exists(ckpt));
  CHECK(read_text(dir.path() / "train" / "loss.csv").rfind("epoch,loss\n", 0) == 0);
  const auto before = read_text(ckpt);
  const auto r1 = run_eval(cfg, ckpt, dir.path() / "e1");
  const auto r2 = run_eval(cfg, ckpt, dir.path() / "e2");
  CHECK(read_text(ckpt) == before);
  CHECK(to_csv(r1) == to_csv(r2));
  const auto name = metrics_file_name(System::DeepScS);
  CHECK(read_text(dir.path() / "e1" / name) == read_text(dir.path() / "e2" / name));

  auto wrong = small(System::CnnOnly);
  CHECK_THROWS_AS(run_eval(wrong, ckpt, dir.path() / "e3"), InvalidArgument);
}
