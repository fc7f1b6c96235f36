#include "sgdnet/commands.hpp"

#include "sgdnet/checkpoint.hpp"
#include "sgdnet/datasets.hpp"
#include "sgdnet/diffusion.hpp"
#include "sgdnet/errors.hpp"
#include "sgdnet/experiment.hpp"
#include "sgdnet/features.hpp"
#include "sgdnet/parallel.hpp"
#include "sgdnet/random.hpp"
#include "sgdnet/training.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <thread>

namespace sgdnet::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
    // graph input
    std::string input;
    std::string format = "tsv-sign";
    std::string dataset;
    std::string data_dir;
    std::string train_edges;
    std::string test_edges;
    std::string features;
    std::string checkpoint;
    std::string out;

    // hyperparameters
    int layers = 1;
    double c = 0.35;
    int k = 10;
    int svd_rank = 128;
    int dim = 32;
    double lr = 0.01;
    double weight_decay = 0.001;
    int epochs = 100;
    std::string m0 = "uniform";

    // run control
    int seeds = 10;
    std::uint64_t seed = 0;
    double ratio = 0.2;
    unsigned threads = 0;
};

// Options whose presence on the command line overrides per-dataset defaults.
struct Overrides {
    CLI::Option* layers = nullptr;
    CLI::Option* c = nullptr;
    CLI::Option* k = nullptr;
    CLI::Option* svd_rank = nullptr;
    CLI::Option* dim = nullptr;
    CLI::Option* lr = nullptr;
    CLI::Option* weight_decay = nullptr;
    CLI::Option* epochs = nullptr;
    CLI::Option* m0 = nullptr;
    CLI::Option* ratio = nullptr;
};

bool given(const CLI::Option* o) { return o != nullptr && o->count() > 0; }

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string fmt_sci(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6e", v);
    return buf;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    return out;
}

fs::path out_dir(const Options& o) {
    const fs::path dir = o.out.empty() ? fs::path(".") : fs::path(o.out);
    fs::create_directories(dir);
    return dir;
}

void add_model_flags(CLI::App* app, Options& o, Overrides& ov) {
    ov.layers = app->add_option("--layers", o.layers, "number of SGD layers")->check(CLI::PositiveNumber);
    ov.c = app->add_option("--c", o.c, "local feature injection ratio in (0, 1)")
               ->check(CLI::Range(0.0, 1.0));
    ov.k = app->add_option("--k", o.k, "diffusion steps per layer")->check(CLI::PositiveNumber);
    ov.dim = app->add_option("--dim", o.dim, "hidden width")->check(CLI::PositiveNumber);
    ov.lr = app->add_option("--lr", o.lr, "Adam learning rate")->check(CLI::NonNegativeNumber);
    ov.weight_decay = app->add_option("--weight-decay", o.weight_decay, "L2 coefficient")
                          ->check(CLI::NonNegativeNumber);
    ov.epochs = app->add_option("--epochs", o.epochs, "full-batch epochs")->check(CLI::NonNegativeNumber);
    ov.m0 = app->add_option("--m0", o.m0, "initial negative-surfer features")
                ->check(CLI::IsMember({"zero", "uniform"}));
}

void add_common_flags(CLI::App* app, Options& o) {
    app->add_option("--seed", o.seed, "base random seed");
    app->add_option("--threads", o.threads, "worker threads (0 = hardware concurrency)");
}

void add_graph_source(CLI::App* app, Options& o) {
    app->add_option("--input", o.input, "edge file (.gz accepted)");
    app->add_option("--format", o.format, "edge file format")
        ->check(CLI::IsMember({"tsv-sign", "tsv", "csv-rating", "csv"}));
    app->add_option("--dataset", o.dataset, "registered dataset name");
    app->add_option("--data-dir", o.data_dir, "directory holding dataset files");
}

std::string resolve_data_dir(const Options& o) {
    if (!o.data_dir.empty()) return o.data_dir;
    if (const char* env = std::getenv("SGDNET_DATA_DIR")) return env;
    return "data";
}

const DatasetInfo& require_dataset(const std::string& name) {
    const DatasetInfo* info = find_dataset(name);
    if (!info) {
        throw ArgumentError("unknown dataset '" + name + "'; known: " + known_dataset_names());
    }
    return *info;
}

EdgeList load_dataset(const DatasetInfo& info, const std::string& dir) {
    const auto path = locate_dataset(info, dir);
    if (!path) {
        std::string tried;
        for (const auto& f : info.file_names) tried += " " + f;
        throw DataError("dataset '" + info.name + "' not found in " + dir + " (tried" + tried +
                        ", each also with .gz)");
    }
    return load_edge_list(*path, info.format);
}

struct Source {
    std::string name;
    EdgeList data;
};

Source load_source(const Options& o) {
    if (!o.input.empty() && !o.dataset.empty()) {
        throw ArgumentError("give either --input or --dataset, not both");
    }
    if (!o.input.empty()) {
        return {fs::path(o.input).stem().string(), load_edge_list(o.input, parse_edge_format(o.format))};
    }
    if (!o.dataset.empty()) {
        const auto& info = require_dataset(o.dataset);
        return {info.name, load_dataset(info, resolve_data_dir(o))};
    }
    throw ArgumentError("an edge source is required (--input or --dataset)");
}

TrainConfig train_config(const Options& o) {
    TrainConfig t;
    t.dim = o.dim;
    t.layers = o.layers;
    t.c = o.c;
    t.k_steps = o.k;
    t.m0_mode = parse_m0_mode(o.m0);
    t.weight_decay = o.weight_decay;
    t.epochs = o.epochs;
    t.adam.lr = o.lr;
    t.seed = o.seed;
    return t;
}

void require(const std::string& value, const char* flag) {
    if (value.empty()) throw ArgumentError(std::string(flag) + " is required");
}

int cmd_prep(const Options& o, std::ostream& out) {
    const Source src = load_source(o);
    ExperimentConfig cfg;
    cfg.svd_rank = o.svd_rank;
    cfg.test_ratio = o.ratio;
    const PreparedSplit prep = prepare_split(src.data, cfg, o.seed);

    const fs::path dir = out_dir(o);
    save_features(dir / "features.sgdf", prep.features);
    write_id_map(dir / "idmap.tsv", src.data.raw_ids);
    write_edges_tsv(dir / "train.tsv", prep.split.train);
    write_edges_tsv(dir / "test.tsv", prep.split.test);

    const std::string summary =
        format_summary(src.name, summarize(SignedDigraph(src.data.edges, src.data.num_nodes))) +
        "train edges " + std::to_string(prep.split.train.size()) + "\n" +
        "test edges  " + std::to_string(prep.split.test.size()) + "\n" +
        "features    " + std::to_string(prep.features.data.rows()) + " x " +
        std::to_string(prep.features.data.cols()) + "\n";
    open_out(dir / "summary.txt") << summary;
    out << summary;
    return kOk;
}

SignedDigraph graph_for_features(const std::string& edges_path, const FeatureMatrix& x) {
    return SignedDigraph(read_edges_tsv(edges_path), static_cast<NodeId>(x.data.rows()));
}

int cmd_train(const Options& o, std::ostream& out, std::ostream& err) {
    require(o.train_edges, "--train-edges");
    require(o.features, "--features");
    const FeatureMatrix x = load_features(o.features);
    const SignedDigraph g = graph_for_features(o.train_edges, x);
    const TrainConfig cfg = train_config(o);
    const fs::path dir = out_dir(o);

    std::vector<double> losses;
    const auto write_losses = [&] {
        auto f = open_out(dir / "loss.csv");
        f << "epoch,loss\n";
        for (std::size_t e = 0; e < losses.size(); ++e) f << e << ',' << fmt_sci(losses[e]) << '\n';
    };
    try {
        const TrainResult r = train(g, x.data, cfg, [&](int, double loss) { losses.push_back(loss); });
        save_checkpoint(dir / "checkpoint.sgdn", {r.params, cfg.c, cfg.k_steps});
    } catch (const TrainingAborted& e) {
        write_losses();
        save_checkpoint(dir / "checkpoint.partial.sgdn", {e.last_good(), cfg.c, cfg.k_steps});
        err << "training aborted: " << e.what() << "\n";
        return kNumeric;
    }
    write_losses();
    out << "epochs " << losses.size() << "\n";
    if (!losses.empty()) out << "final loss " << fmt(losses.back()) << "\n";
    out << "wrote " << (dir / "checkpoint.sgdn").string() << "\n";
    return kOk;
}

int cmd_eval(const Options& o, std::ostream& out) {
    require(o.checkpoint, "--checkpoint");
    require(o.features, "--features");
    require(o.train_edges, "--train-edges");
    require(o.test_edges, "--test-edges");
    const Checkpoint ck = load_checkpoint(o.checkpoint);
    const FeatureMatrix x = load_features(o.features);
    const SignedDigraph g = graph_for_features(o.train_edges, x);
    const auto test = read_edges_tsv(o.test_edges);
    for (const auto& e : test) {
        if (e.src >= g.num_nodes() || e.dst >= g.num_nodes()) {
            throw DataError("test edge references node outside the feature matrix");
        }
    }

    TrainConfig tc;
    tc.c = ck.c;
    tc.k_steps = ck.k_steps;
    tc.m0_mode = parse_m0_mode(o.m0);
    tc.seed = o.seed;
    const auto preds = predict_edges(normalize(g), x.data, ck.params, eval_diffusion_config(tc), test);
    const MetricReport report = evaluate_predictions(preds);

    const fs::path dir = out_dir(o);
    auto f = open_out(dir / "predictions.csv");
    f << "u,v,label,p_plus,pred\n";
    for (const auto& p : preds) {
        f << p.u << ',' << p.v << ',' << static_cast<int>(p.label) << ',' << fmt(p.p_plus) << ','
          << static_cast<int>(p.pred) << '\n';
    }
    out << "edges " << preds.size() << "\n";
    out << "AUC " << (report.auc ? fmt(*report.auc) : std::string("NA")) << "\n";
    out << "F1-macro " << fmt(report.f1_macro) << "\n";
    return kOk;
}

int cmd_diffuse(const Options& o, std::ostream& out) {
    const Source src = load_source(o);
    const SignedDigraph g(src.data.edges, src.data.num_nodes);
    const NormalizedAdjacency na = normalize(g);
    Rng rng(derive_seed(o.seed, Stream::init));
    const Matrix h = uniform_matrix(g.num_nodes(), o.dim, -1.0, 1.0, rng);
    const DiffusionConfig cfg{o.c, o.k, parse_m0_mode(o.m0), derive_seed(o.seed, Stream::m0)};
    cfg.validate();

    const bool exact = g.num_nodes() <= kExactSolveMaxNodes;
    DiffusionState star;
    if (exact) star = exact_solve(na, h, cfg.c);
    const DiffusionState t0 = initial_state(h, cfg);

    std::ofstream file;
    if (!o.out.empty()) {
        if (fs::path(o.out).has_parent_path()) fs::create_directories(fs::path(o.out).parent_path());
        file = open_out(o.out);
    }
    std::ostream& csv = o.out.empty() ? out : file;
    csv << "step,residual,error,bound\n";
    const auto row = [&](int k, const std::string& residual, const DiffusionState& t) {
        csv << k << ',' << residual << ',';
        if (exact) {
            csv << fmt_sci(distance_l1(star, t)) << ',' << fmt_sci(error_bound(t0, star, cfg.c, k));
        } else {
            csv << "NA,NA";
        }
        csv << '\n';
    };
    row(0, "NA", t0);
    DiffusionState prev = t0;
    diffuse_from(na, h, t0, cfg.c, cfg.k_steps, [&](int k, const DiffusionState& t) {
        row(k, fmt_sci(distance_l1(t, prev)), t);
        prev = t;
    });
    return kOk;
}

int cmd_experiment(const Options& o, const Overrides& ov, std::ostream& out, std::ostream& err) {
    require(o.dataset, "--dataset");
    std::vector<const DatasetInfo*> targets;
    if (o.dataset == "all") {
        for (const auto& d : known_datasets()) targets.push_back(&d);
    } else {
        targets.push_back(&require_dataset(o.dataset));
    }
    if (o.seeds < 1) throw ArgumentError("--seeds must be >= 1");
    const std::string data_dir = resolve_data_dir(o);

    std::vector<ExperimentResult> results;
    bool aborted = false;
    for (const DatasetInfo* info : targets) {
        ExperimentConfig cfg = info->config;
        if (given(ov.layers)) cfg.train.layers = o.layers;
        if (given(ov.c)) cfg.train.c = o.c;
        if (given(ov.k)) cfg.train.k_steps = o.k;
        if (given(ov.svd_rank)) cfg.svd_rank = o.svd_rank;
        if (given(ov.dim)) cfg.train.dim = o.dim;
        if (given(ov.lr)) cfg.train.adam.lr = o.lr;
        if (given(ov.weight_decay)) cfg.train.weight_decay = o.weight_decay;
        if (given(ov.epochs)) cfg.train.epochs = o.epochs;
        if (given(ov.m0)) cfg.train.m0_mode = parse_m0_mode(o.m0);
        if (given(ov.ratio)) cfg.test_ratio = o.ratio;

        const EdgeList data = load_dataset(*info, data_dir);
        err << format_summary(info->name, summarize(SignedDigraph(data.edges, data.num_nodes)));
        auto r = run_experiment(info->name, data, cfg, o.seeds, o.seed, [&](const SeedRun& s) {
            err << info->name << " seed " << s.seed << " AUC "
                << (s.metrics.auc ? fmt(*s.metrics.auc) : std::string("NA")) << " F1 "
                << fmt(s.metrics.f1_macro) << "\n";
        });
        if (r.aborted) {
            err << info->name << ": " << r.error << "\n";
            aborted = true;
        }
        if (!o.out.empty()) {
            auto f = open_out(out_dir(o) / (info->name + ".csv"));
            write_experiment_csv(f, r);
        }
        results.push_back(std::move(r));
    }
    out << format_experiment_table(results);
    return aborted ? kNumeric : kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    Overrides ov;
    CLI::App app{"Signed graph diffusion network for link sign prediction"};
    app.require_subcommand(1);
    app.set_config("--config", "", "INI file; keys go under a [subcommand] section");

    auto* prep = app.add_subcommand("prep", "split edges and build SVD input features");
    add_graph_source(prep, o);
    prep->add_option("--ratio", o.ratio, "test fraction")->check(CLI::Range(0.0, 1.0));
    prep->add_option("--svd-rank", o.svd_rank, "feature width")->check(CLI::PositiveNumber);
    prep->add_option("--out", o.out, "output directory");
    add_common_flags(prep, o);

    auto* train_cmd = app.add_subcommand("train", "train on a prepared split");
    train_cmd->add_option("--train-edges", o.train_edges, "dense-id training edges (train.tsv)");
    train_cmd->add_option("--features", o.features, "feature file (features.sgdf)");
    train_cmd->add_option("--out", o.out, "output directory");
    add_model_flags(train_cmd, o, ov);
    add_common_flags(train_cmd, o);

    auto* eval_cmd = app.add_subcommand("eval", "score test edges with a checkpoint");
    eval_cmd->add_option("--checkpoint", o.checkpoint, "checkpoint.sgdn");
    eval_cmd->add_option("--features", o.features, "feature file (features.sgdf)");
    eval_cmd->add_option("--train-edges", o.train_edges, "diffusion graph edges (train.tsv)");
    eval_cmd->add_option("--test-edges", o.test_edges, "edges to score (test.tsv)");
    eval_cmd->add_option("--m0", o.m0, "initial negative-surfer features")
        ->check(CLI::IsMember({"zero", "uniform"}));
    eval_cmd->add_option("--out", o.out, "output directory");
    add_common_flags(eval_cmd, o);

    auto* diffuse_cmd = app.add_subcommand("diffuse", "trace diffusion convergence on random features");
    add_graph_source(diffuse_cmd, o);
    diffuse_cmd->add_option("--c", o.c, "local feature injection ratio")->check(CLI::Range(0.0, 1.0));
    diffuse_cmd->add_option("--k", o.k, "steps")->check(CLI::PositiveNumber);
    diffuse_cmd->add_option("--dim", o.dim, "feature width")->check(CLI::PositiveNumber);
    diffuse_cmd->add_option("--m0", o.m0, "initial negative-surfer features")
        ->check(CLI::IsMember({"zero", "uniform"}));
    diffuse_cmd->add_option("--out", o.out, "CSV path (default stdout)");
    add_common_flags(diffuse_cmd, o);

    Overrides exp_ov;
    auto* exp_cmd = app.add_subcommand("experiment", "repeated split/train/eval on a registered dataset");
    exp_cmd->add_option("--dataset", o.dataset, "dataset name or 'all'");
    exp_cmd->add_option("--data-dir", o.data_dir, "directory holding dataset files");
    exp_cmd->add_option("--seeds", o.seeds, "number of seeds")->check(CLI::PositiveNumber);
    exp_ov.ratio = exp_cmd->add_option("--ratio", o.ratio, "test fraction")->check(CLI::Range(0.0, 1.0));
    exp_ov.svd_rank = exp_cmd->add_option("--svd-rank", o.svd_rank, "feature width")->check(CLI::PositiveNumber);
    exp_cmd->add_option("--out", o.out, "directory for per-dataset CSV files");
    add_model_flags(exp_cmd, o, exp_ov);
    add_common_flags(exp_cmd, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    set_num_threads(o.threads > 0 ? o.threads : std::max(1u, std::thread::hardware_concurrency()));
    try {
        if (*prep) return cmd_prep(o, out);
        if (*train_cmd) return cmd_train(o, out, err);
        if (*eval_cmd) return cmd_eval(o, out);
        if (*diffuse_cmd) return cmd_diffuse(o, out);
        return cmd_experiment(o, exp_ov, out, err);
    } catch (const sgdnet::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const NumericError& e) {
        err << "numeric error: " << e.what() << "\n";
        return kNumeric;
    } catch (const DataError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ArgumentError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    }
}

}  // namespace sgdnet::cli
