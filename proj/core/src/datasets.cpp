#include "sgdnet/datasets.hpp"

namespace sgdnet {

namespace {

ExperimentConfig tuned(int layers, double c) {
    ExperimentConfig cfg;
    cfg.svd_rank = 128;
    cfg.test_ratio = 0.2;
    cfg.train.dim = 32;
    cfg.train.layers = layers;
    cfg.train.c = c;
    cfg.train.k_steps = 10;
    cfg.train.adam.lr = 0.01;
    cfg.train.weight_decay = 0.001;
    cfg.train.epochs = 100;
    cfg.train.m0_mode = M0Mode::uniform;
    return cfg;
}

}  // namespace

const std::vector<DatasetInfo>& known_datasets() {
    static const std::vector<DatasetInfo> registry = {
        {"bitcoin-alpha",
         {"soc-sign-bitcoinalpha.csv", "bitcoin-alpha.csv", "bitcoin_alpha.csv"},
         EdgeFormat::csv_rating,
         tuned(1, 0.35),
         {3783, 24186, 22650, 1536}},
        {"bitcoin-otc",
         {"soc-sign-bitcoinotc.csv", "bitcoin-otc.csv", "bitcoin_otc.csv"},
         EdgeFormat::csv_rating,
         tuned(2, 0.25),
         {5881, 35592, 32029, 3563}},
        {"slashdot",
         {"out.slashdot-zoo", "slashdot.tsv", "slashdot-zoo.tsv"},
         EdgeFormat::tsv_sign,
         tuned(2, 0.55),
         {79120, 515397, 392326, 123071}},
        {"epinions",
         {"soc-sign-epinions.txt", "epinions.tsv"},
         EdgeFormat::tsv_sign,
         tuned(2, 0.55),
         {131828, 841372, 717667, 123705}},
    };
    return registry;
}

const DatasetInfo* find_dataset(const std::string& name) {
    for (const auto& d : known_datasets()) {
        if (d.name == name) return &d;
    }
    return nullptr;
}

std::string known_dataset_names() {
    std::string out;
    for (const auto& d : known_datasets()) {
        if (!out.empty()) out += ", ";
        out += d.name;
    }
    return out;
}

std::optional<std::filesystem::path> locate_dataset(const DatasetInfo& info,
                                                    const std::filesystem::path& dir) {
    for (const auto& name : info.file_names) {
        for (const auto& candidate : {dir / name, dir / (name + ".gz")}) {
            if (std::filesystem::is_regular_file(candidate)) return candidate;
        }
    }
    return std::nullopt;
}

}  // namespace sgdnet
