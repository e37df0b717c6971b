// File- and exit-code contracts of the command-line tool, driven against
// the real binary. Usage: cli_contract <cli-binary> <source-dir>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tweetcast/data/tensors.hpp"
#include "tweetcast/io/csv.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int g_failures = 0;
std::string g_cli;
std::string g_src;
fs::path g_tmp;

void check(bool ok, const std::string& what) {
    std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", what.c_str());
    if (!ok) ++g_failures;
}

int run(const std::string& args, std::string* err_line = nullptr) {
    const fs::path err_file = g_tmp / "stderr.txt";
    const std::string cmd = g_cli + " " + args + " > /dev/null 2> " + err_file.string();
    const int code = std::system(cmd.c_str());
    if (err_line != nullptr) {
        std::ifstream in(err_file);
        std::getline(in, *err_line);
    }
    return code;
}

std::size_t count_lines(const std::string& path) {
    std::ifstream in(path);
    std::size_t n = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++n;
    return n;
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::fprintf(stderr, "usage: cli_contract <cli-binary> <source-dir>\n");
        return 2;
    }
    g_cli = argv[1];
    g_src = argv[2];
    g_tmp = fs::temp_directory_path() / "tweetcast_cli_contract";
    fs::remove_all(g_tmp);
    fs::create_directories(g_tmp);
    const std::string cfgs = g_src + "/configs";
    const std::string lex = g_src + "/data/lexicons";

    // synth: file contract and row arithmetic (M * D * 96 data rows + header).
    {
        const fs::path out = g_tmp / "scn";
        const int code =
            run("synth --config " + cfgs + "/scenario_small.json --out " + out.string());
        check(code == 0, "synth exits 0 on the shipped small scenario");
        check(fs::exists(out / "traffic.csv") && fs::exists(out / "tweets.jsonl") &&
                  fs::exists(out / "manifest.json") && fs::exists(out / "segments.csv") &&
                  fs::exists(out / "run_manifest.json"),
              "synth writes traffic.csv, tweets.jsonl, segments.csv, manifest.json and one run "
              "manifest");
        const json cfg = json::parse(tweetcast::read_text_file(cfgs + "/scenario_small.json"));
        const std::size_t want =
            cfg["segments"].get<std::size_t>() * cfg["days"].get<std::size_t>() * 96 + 1;
        check(count_lines((out / "traffic.csv").string()) == want,
              "synth traffic.csv row count equals segments*days*96 plus header");
    }

    // synth: bad config -> nonzero exit and a single machine-parsable line.
    {
        const fs::path bad = g_tmp / "bad_config.json";
        tweetcast::write_text_file(bad.string(), "{\"segments\": 0, \"days\": 2}\n");
        std::string err;
        const int code = run("synth --config " + bad.string() + " --out " + (g_tmp / "x").string(),
                             &err);
        check(code != 0 && err.rfind("error: ", 0) == 0,
              "synth rejects a bad config with nonzero exit and an 'error: ' line");
    }
    {
        const fs::path unknown = g_tmp / "unknown_key.json";
        tweetcast::write_text_file(unknown.string(), "{\"segments\": 2, \"days\": 3, \"typo\": 1}\n");
        std::string err;
        const int code = run(
            "synth --config " + unknown.string() + " --out " + (g_tmp / "x2").string(), &err);
        check(code != 0 && err.find("unknown key") != std::string::npos,
              "synth rejects unknown config keys before doing any work");
    }

    // features: empty tweet file -> all-zero feature grid over the traffic span.
    {
        const fs::path empty = g_tmp / "empty.jsonl";
        tweetcast::write_text_file(empty.string(), "");
        const fs::path out = g_tmp / "feat_empty";
        const int code = run("features --tweets " + empty.string() + " --segments " +
                             (g_tmp / "scn/segments.csv").string() + " --lexicons " + lex +
                             " --traffic " + (g_tmp / "scn/traffic.csv").string() + " --out " +
                             out.string());
        bool all_zero = code == 0;
        if (all_zero) {
            const auto rows = tweetcast::read_csv((out / "features.csv").string(),
                                                  tweetcast::features_csv_header());
            const json cfg = json::parse(tweetcast::read_text_file(cfgs + "/scenario_small.json"));
            all_zero = rows.size() ==
                       cfg["segments"].get<std::size_t>() * cfg["days"].get<std::size_t>() * 96;
            for (const auto& r : rows)
                if (r[2] != "0" || r[3] != "0" || r[4] != "0") all_zero = false;
        }
        check(all_zero, "features over an empty tweet file is the all-zero grid");
    }

    // features: malformed JSON line -> error naming the line number.
    {
        const fs::path mangled = g_tmp / "mangled.jsonl";
        tweetcast::write_text_file(
            mangled.string(),
            "{\"ts\": 1588291200, \"lat\": 46.5, \"lon\": -122.3, \"text\": \"ok\"}\nnot json\n");
        std::string err;
        const int code = run("features --tweets " + mangled.string() + " --segments " +
                                 (g_tmp / "scn/segments.csv").string() + " --lexicons " + lex +
                                 " --traffic " + (g_tmp / "scn/traffic.csv").string() + " --out " +
                                 (g_tmp / "feat_bad").string(),
                             &err);
        check(code != 0 && err.find("line 2") != std::string::npos,
              "features reports the malformed JSONL line number");
    }

    // correlate on constant inputs -> clean undefined-correlation error.
    {
        std::ostringstream traffic;
        traffic << tweetcast::traffic_csv_header() << "\n";
        std::ostringstream feats;
        feats << tweetcast::features_csv_header() << "\n";
        for (int step = 0; step < 96 * 3; ++step) {
            char ts[32];
            const int hour = (step / 4) % 24, minute = (step % 4) * 15;
            const int day = 1 + step / 96;
            std::snprintf(ts, sizeof(ts), "2020-05-%02dT%02d:%02d:00Z", day, hour, minute);
            traffic << "1," << ts << ",0.5,100,30\n";
            feats << "1," << ts << ",0,0,0\n";
        }
        const fs::path tpath = g_tmp / "const_traffic.csv";
        const fs::path fpath = g_tmp / "const_features.csv";
        tweetcast::write_text_file(tpath.string(), traffic.str());
        tweetcast::write_text_file(fpath.string(), feats.str());
        std::string err;
        const int code = run("correlate --traffic " + tpath.string() + " --features " +
                                 fpath.string() + " --out " + (g_tmp / "corr_const").string(),
                             &err);
        check(code != 0 && err.rfind("error: ", 0) == 0 &&
                  err.find("variance") != std::string::npos,
              "correlate on constant inputs surfaces the undefined-correlation error cleanly");
    }

    // correlate on real output: OLS JSON carries the full per-term schema.
    {
        const fs::path feat = g_tmp / "feat";
        int code = run("features --tweets " + (g_tmp / "scn/tweets.jsonl").string() +
                       " --segments " + (g_tmp / "scn/segments.csv").string() + " --lexicons " +
                       lex + " --traffic " + (g_tmp / "scn/traffic.csv").string() +
                       " --min-count 1 --out " + feat.string());
        const fs::path corr = g_tmp / "corr";
        code |= run("correlate --traffic " + (g_tmp / "scn/traffic.csv").string() +
                    " --features " + (feat / "features.csv").string() + " --out " + corr.string());
        bool schema_ok = code == 0;
        if (schema_ok) {
            const json ols = json::parse(tweetcast::read_text_file((corr / "ols.json").string()));
            schema_ok = ols.contains("r_squared") && ols.contains("terms");
            for (const char* term :
                 {"alpha", "beta1_tps_lag1", "beta2_tweet", "beta3_tweet_lag1"}) {
                if (!schema_ok) break;
                const auto& t = ols["terms"][term];
                schema_ok = t.contains("coefficient") && t.contains("std_error") &&
                            t.contains("p_value") && t.contains("t_stat");
            }
        }
        check(schema_ok, "correlate ols.json has coefficient/std_error/p_value per regressor "
                         "plus r_squared");
    }

    // train/evaluate/ablate: file contracts on the small configs.
    {
        const fs::path data = g_tmp / "data";
        fs::create_directories(data);
        fs::copy_file(g_tmp / "scn/traffic.csv", data / "traffic.csv",
                      fs::copy_options::overwrite_existing);
        fs::copy_file(g_tmp / "feat/features.csv", data / "features.csv",
                      fs::copy_options::overwrite_existing);
        const fs::path trained = g_tmp / "train";
        int code = run("train --data " + data.string() + " --model-config " + cfgs +
                       "/model_small.json --train-config " + cfgs + "/train_small.json --out " +
                       trained.string());
        check(code == 0 && fs::exists(trained / "checkpoint.json") &&
                  fs::exists(trained / "loss_history.csv"),
              "train writes checkpoint.json and loss_history.csv");
        bool loss_header_ok = false;
        {
            std::ifstream in(trained / "loss_history.csv");
            std::string header;
            std::getline(in, header);
            loss_header_ok = header == "epoch,train_mse,val_mse";
        }
        check(loss_header_ok, "loss history follows the epoch,train_mse,val_mse schema");

        // Oracle stub: the harness self-test must report exactly zero error.
        const fs::path ev = g_tmp / "eval_stub";
        code = run("evaluate --data " + data.string() + " --train-config " + cfgs +
                   "/train_small.json --stub oracle --out " + ev.string());
        bool zeros = code == 0;
        if (zeros) {
            const json m = json::parse(tweetcast::read_text_file((ev / "metrics.json").string()));
            zeros = m["oracle_stub"]["overall"]["mse"] == 0.0 &&
                    m["oracle_stub"]["overall"]["mae"] == 0.0 &&
                    m["oracle_stub"]["overall"]["mape"] == 0.0;
        }
        check(zeros, "evaluate --stub oracle reports all-zero metrics");

        const fs::path abl = g_tmp / "abl";
        code = run("ablate --data " + data.string() + " --model-config " + cfgs +
                   "/model_small.json --train-config " + cfgs + "/train_small.json --out " +
                   abl.string());
        bool abl_ok = code == 0;
        if (abl_ok) {
            const auto lines = count_lines((abl / "ablation.csv").string());
            abl_ok = lines == 6;  // header + full + four variants
        }
        check(abl_ok, "ablate emits the five-variant table (full plus four ablations)");
    }

    std::printf("cli_contract: %s\n", g_failures == 0 ? "all checks passed" : "FAILURES");
    fs::remove_all(g_tmp);
    return g_failures == 0 ? 0 : 1;
}
