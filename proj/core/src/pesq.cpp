#include "deepsc/pesq.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <mutex>
#include <regex>

#include "deepsc/keyvalue.hpp"
#include "deepsc/resample.hpp"
#include "deepsc/wav.hpp"

namespace deepsc {

namespace fs = std::filesystem;

namespace {

std::mutex g_tmp_mutex;
std::atomic<unsigned> g_counter{0};

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'')
      out += "'\\''";
    else
      out += c;
  }
  return out + "'";
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("deepsc-pesq-" + std::to_string(::getpid()) + "-" + std::to_string(g_counter++));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

}  // namespace

std::optional<std::string> PesqConfig::resolve() const {
  if (!evaluator.empty()) return evaluator;
  if (const char* env = std::getenv(kPesqEnvVar); env && *env) return std::string(env);
  return std::nullopt;
}

double parse_pesq_output(const std::string& output, const std::string& score_regex) {
  std::string last;
  for (const auto& line : split_list(output, '\n'))
    if (!line.empty()) last = line;
  std::smatch m;
  const std::regex re(score_regex);
  if (!std::regex_search(last, m, re) || m.size() < 2)
    throw FormatError("pesq: cannot parse score from '" + last + "'");
  double score = 0.0;
  try {
    score = std::stod(m[1].str());
  } catch (const std::logic_error&) {
    throw FormatError("pesq: malformed score '" + m[1].str() + "'");
  }
  if (!(score >= -0.5 && score <= 4.5)) throw FormatError("pesq: score " + m[1].str() + " outside [-0.5, 4.5]");
  return score;
}

double pesq_external(const SampleSequence& reference, const SampleSequence& degraded, const PesqConfig& cfg) {
  const auto exe = cfg.resolve();
  if (!exe) throw PesqUnavailable(std::string("pesq: no evaluator configured (set ") + kPesqEnvVar + ")");
  if (::access(exe->c_str(), X_OK) != 0) throw PesqUnavailable("pesq: evaluator '" + *exe + "' is not executable");
  if (reference.rate != degraded.rate) throw InvalidArgument("pesq: sample rates differ");

  SampleSequence ref = reference, deg = degraded;
  if (ref.rate != 8000 && ref.rate != 16000) {
    ref = resample(ref, 16000);
    deg = resample(deg, 16000);
  }

  std::lock_guard lock(g_tmp_mutex);
  TempDir dir;
  const auto ref_path = dir.path() / "ref.wav";
  const auto deg_path = dir.path() / "deg.wav";
  write_wav(ref_path, ref);
  write_wav(deg_path, deg);

  const std::string cmd = shell_quote(*exe) + " +" + std::to_string(ref.rate) + " " + shell_quote(ref_path.string()) +
                          " " + shell_quote(deg_path.string()) + " 2>&1";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) throw PesqUnavailable("pesq: cannot start '" + *exe + "'");
  std::string output;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) output.append(buf, n);
  const int status = ::pclose(pipe);
  if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) == 127)
    throw PesqUnavailable("pesq: evaluator '" + *exe + "' did not run");
  return parse_pesq_output(output, cfg.score_regex);
}

}  // namespace deepsc
