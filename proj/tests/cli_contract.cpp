// Exit-code and determinism contract of the command-line tool, exercised
// through real process invocations. argv: <tool path> <data dir>.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

int failures = 0;
std::string tool, data_dir;

int run(const std::string& args, std::string* output = nullptr) {
    const std::string out_file = "/tmp/crashlab_cli_out.txt";
    const std::string cmd = tool + " " + args + " > " + out_file + " 2>&1";
    const int raw = std::system(cmd.c_str());
    if (output) {
        std::ifstream f(out_file);
        std::stringstream ss;
        ss << f.rdbuf();
        *output = ss.str();
    }
    return WEXITSTATUS(raw);
}

void expect(bool ok, const std::string& what) {
    if (!ok) {
        std::cout << "FAILED: " << what << '\n';
        ++failures;
    }
}

std::string grep_line(const std::string& text, const std::string& needle) {
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line))
        if (line.find(needle) != std::string::npos) return line;
    return {};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cout << "usage: cli_contract <tool> <data_dir>\n";
        return 1;
    }
    tool = argv[1];
    data_dir = argv[2];

    expect(run("") == 2, "no subcommand exits 2");
    expect(run("bogus") == 2, "unknown subcommand exits 2");
    expect(run("train --reward sideways --data " + data_dir) == 2, "unknown reward exits 2");
    expect(run("eval --runs 1") == 2, "eval without --checkpoint exits 2");
    expect(run("--help") == 0, "--help exits 0");
    expect(run("replay --log /tmp/no_such_file.log --data " + data_dir) == 1,
           "missing log exits 1");
    expect(run("analyze --a /tmp/empty_dir_a --b /tmp/empty_dir_b") == 1,
           "empty analyze inputs exit 1");

    std::string reg_out;
    expect(run("registry", &reg_out) == 0, "registry exits 0");
    expect(reg_out.find("0\tnoop") == 0, "registry starts with the NoOp row");

    // Training determinism: identical flag sets give identical checkpoints.
    std::string t1, t2;
    const std::string train_flags = "train --route R1 --weather SD --reward ttc --states 300 "
                                    "--replay-capacity 100 --seed 5 --data " +
                                    data_dir;
    expect(run(train_flags + " --out /tmp/cli_train_a", &t1) == 0, "train run A exits 0");
    expect(run(train_flags + " --out /tmp/cli_train_b", &t2) == 0, "train run B exits 0");
    const std::string h1 = grep_line(t1, "hash");
    const std::string h2 = grep_line(t2, "hash");
    expect(!h1.empty() && h1.substr(h1.find("hash")) == h2.substr(h2.find("hash")),
           "repeated training produces identical checkpoint hashes");

    // Eval end to end, then replay one of its logs cleanly.
    const std::string eval_flags = "eval --checkpoint /tmp/cli_train_a/checkpoint.bin --route R1 "
                                   "--weather SD --reward ttc --runs 3 --seed 40 --data " +
                                   data_dir;
    expect(run(eval_flags + " --out /tmp/cli_eval", nullptr) == 0, "eval exits 0");
    expect(run("replay --log /tmp/cli_eval/run_40.log --data " + data_dir) == 0,
           "recorded eval run replays cleanly");

    // Parallel batches match the sequential ones file for file.
    const std::string base = "baseline --strategy rs --route R1 --weather SD --reward ttc "
                             "--runs 4 --seed 90 --max-decisions 12 --data " +
                             data_dir;
    expect(run(base + " --out /tmp/cli_seq --parallel 1") == 0, "sequential baseline exits 0");
    expect(run(base + " --out /tmp/cli_par --parallel 3") == 0, "parallel baseline exits 0");
    std::string seq_sum, par_sum;
    {
        std::ifstream a("/tmp/cli_seq/summary.txt"), b("/tmp/cli_par/summary.txt");
        std::stringstream sa, sb;
        sa << a.rdbuf();
        sb << b.rdbuf();
        seq_sum = sa.str();
        par_sum = sb.str();
    }
    expect(!seq_sum.empty() && seq_sum == par_sum,
           "parallel and sequential batches produce identical summaries");

    std::string analyze_out;
    expect(run("analyze --a /tmp/cli_seq --b /tmp/cli_eval", &analyze_out) == 0,
           "analyze over real log sets exits 0");
    expect(!grep_line(analyze_out, "#Collision").empty(), "analyze reports the collision metric");

    expect(run("baseline --strategy gs --route R1 --weather SD --reward dto --runs 1 --seed 60 "
               "--max-decisions 3 --data " +
               data_dir + " --out /tmp/cli_gs") == 0,
           "greedy baseline exits 0");
    expect(run("replay --log /tmp/cli_gs/run_60.log --data " + data_dir) == 0,
           "recorded greedy run replays cleanly");
    {
        std::ifstream trials("/tmp/cli_gs/gs_trials_60.txt");
        std::string header;
        std::getline(trials, header);
        expect(header.find("trials") != std::string::npos,
               "greedy run writes per-step trial counts");
    }

    if (failures == 0) {
        std::cout << "cli contract: all checks passed\n";
        return 0;
    }
    std::cout << failures << " cli contract checks failed\n";
    return 1;
}
