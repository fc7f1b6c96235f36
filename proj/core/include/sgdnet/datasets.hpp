#pragma once

#include "sgdnet/experiment.hpp"
#include "sgdnet/graph.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace sgdnet {

struct DatasetInfo {
    std::string name;
    std::vector<std::string> file_names;  // tried in order, each also with ".gz"
    EdgeFormat format;
    ExperimentConfig config;  // published per-dataset hyperparameters
    GraphSummary expected;    // published statistics after loading
};

const std::vector<DatasetInfo>& known_datasets();
const DatasetInfo* find_dataset(const std::string& name);
std::string known_dataset_names();

/// First existing candidate file of `info` inside `dir`.
std::optional<std::filesystem::path> locate_dataset(const DatasetInfo& info,
                                                    const std::filesystem::path& dir);

}  // namespace sgdnet
